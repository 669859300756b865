#pragma once

// Conversions among raw moments, cumulants and modified moments.
//
// All routines are generic over the scalar ring T: Rational for exact
// identities, double for sweeps, Polynomial for symbolic manipulation.

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "cumex/rational.hpp"
#include "cumex/sequences.hpp"

namespace cumex {

/// Binomial coefficient C(n, k) for 0 <= n <= 60.
inline std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (n > 60) throw std::invalid_argument("binomial: n too large");
  k = std::min(k, n - k);
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

inline Rational factorial(int n) {
  Rational r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

/// C(n, k) without the range limit of binomial().
inline Rational binomial_exact(int n, int k) {
  if (k < 0 || k > n) return 0;
  Rational r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// m_k = kappa_k + sum_{j=1}^{k-1} C(k-1, j-1) kappa_j m_{k-j}
template <class T>
MomentVector<T> moments_from_cumulants(const CumulantVector<T>& c) {
  const int n = c.order();
  MomentVector<T> m(n);
  for (int k = 1; k <= n; ++k) {
    T acc = c(k);
    for (int j = 1; j < k; ++j) acc = acc + scalar_from_int<T>(binomial(k - 1, j - 1)) * c(j) * m(k - j);
    m(k) = acc;
  }
  return m;
}

/// Exact inverse of moments_from_cumulants.
template <class T>
CumulantVector<T> cumulants_from_moments(const MomentVector<T>& m) {
  const int n = m.order();
  CumulantVector<T> c(n);
  for (int k = 1; k <= n; ++k) {
    T acc = m(k);
    for (int j = 1; j < k; ++j) acc = acc - scalar_from_int<T>(binomial(k - 1, j - 1)) * c(j) * m(k - j);
    c(k) = acc;
  }
  return c;
}

/// Gram-Charlier coefficients of the standardized density ratio:
///   mt_k = kappa_k + sum_{j=3}^{k-3} C(k-1, j) mt_j kappa_{k-j},   mt_1 = mt_2 = 0.
/// kappa_1 and kappa_2 are ignored.
template <class T>
ModifiedMomentVector<T> modified_moments_from_cumulants(const CumulantVector<T>& c) {
  const int n = c.order();
  if (n < 3) throw std::invalid_argument("modified moments need cumulants through order >= 3");
  ModifiedMomentVector<T> mt(n);
  for (int k = 3; k <= n; ++k) {
    T acc = c(k);
    for (int j = 3; j <= k - 3; ++j)
      acc = acc + scalar_from_int<T>(binomial(k - 1, j)) * mt(j) * c(k - j);
    mt(k) = acc;
  }
  return mt;
}

/// Independent route to the modified moments: expand exp(sum_{k>=3} kappa_k t^k / k!)
/// as a truncated power series and read off k! times the t^k coefficient.
/// Intended as a test oracle for the recursion above.
template <class T>
ModifiedMomentVector<T> modified_moments_series_oracle(const CumulantVector<T>& c) {
  const int n = c.order();
  if (n < 3) throw std::invalid_argument("modified moments need cumulants through order >= 3");

  using Series = std::vector<T>;  // coefficients of t^0..t^n
  auto mul = [n](const Series& a, const Series& b) {
    Series out(n + 1, T(0));
    for (int i = 0; i <= n; ++i) {
      if (a[i] == T(0)) continue;
      for (int j = 0; i + j <= n; ++j) out[i + j] = out[i + j] + a[i] * b[j];
    }
    return out;
  };

  Series psi(n + 1, T(0));
  for (int k = 3; k <= n; ++k) psi[k] = c(k) * scalar_cast<T>(Rational(1 / factorial(k)));

  // exp(psi) = sum_p psi^p / p!; psi^p starts at t^{3p}.
  Series total(n + 1, T(0));
  total[0] = T(1);
  Series power(n + 1, T(0));
  power[0] = T(1);
  for (int p = 1; 3 * p <= n; ++p) {
    power = mul(power, psi);
    const T inv_pfact = scalar_cast<T>(Rational(1 / factorial(p)));
    for (int i = 0; i <= n; ++i) total[i] = total[i] + power[i] * inv_pfact;
  }

  ModifiedMomentVector<T> mt(n);
  for (int k = 1; k <= n; ++k) mt(k) = total[k] * scalar_cast<T>(factorial(k));
  return mt;
}

/// m_j = sum_i probs_i * support_i^j for j = 1..order.
template <class T>
MomentVector<T> pmf_raw_moments(std::span<const std::int64_t> support, std::span<const T> probs,
                                int order) {
  if (support.size() != probs.size())
    throw std::invalid_argument("pmf support and probability lengths differ");
  if (support.empty()) throw std::invalid_argument("empty pmf");
  T sum = T(0);
  for (const T& p : probs) {
    if (p < T(0)) throw std::invalid_argument("negative probability in pmf");
    sum = sum + p;
  }
  if constexpr (is_exact_v<T>) {
    if (sum != 1) throw std::invalid_argument("pmf does not sum to 1");
  } else {
    if (std::abs(to_double(sum) - 1.0) > 1e-12) throw std::invalid_argument("pmf does not sum to 1");
  }

  MomentVector<T> m(order);
  for (std::size_t i = 0; i < support.size(); ++i) {
    const T z = scalar_from_int<T>(support[i]);
    T zp = probs[i];
    for (int j = 1; j <= order; ++j) {
      zp = zp * z;
      m(j) = m(j) + zp;
    }
  }
  return m;
}

}  // namespace cumex
