#pragma once

#include <cmath>
#include <span>

namespace cumex {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

namespace detail {
inline void two_sum(double a, double b, double& s, double& e) noexcept {
  s = a + b;
  const double z = s - a;
  e = (a - (s - z)) + (b - z);
}
inline void two_prod(double a, double b, double& p, double& e) noexcept {
  p = a * b;
  e = std::fma(a, b, -p);
}
}  // namespace detail

/// Compensated Horner evaluation of sum_j coeffs[j] * u^j (Graillat, Langlois, Louvet).
inline double compensated_horner(std::span<const double> coeffs, double u) noexcept {
  if (coeffs.empty()) return 0.0;
  double s = coeffs.back();
  double c = 0.0;
  for (std::size_t i = coeffs.size() - 1; i-- > 0;) {
    double p, pe, se;
    detail::two_prod(s, u, p, pe);
    detail::two_sum(p, coeffs[i], s, se);
    c = c * u + (pe + se);
  }
  return s + c;
}

}  // namespace cumex
