#pragma once

// Globally adaptive 21-point Gauss-Kronrod integration on a finite interval.
// The interval with the largest error estimate is bisected until the total
// estimate meets max(abs_tol, rel_tol * |I|) or the subdivision budget runs out.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "cumex/compensated.hpp"

namespace cumex {

struct QuadratureConfig {
  double abs_tol = 1e-15;
  double rel_tol = 1e-10;
  double range_sigmas = 14.0;
  int max_subdivisions = 2000;

  void validate() const {
    if (!(abs_tol > 0) || !(rel_tol > 0)) throw std::invalid_argument("quadrature tolerances must be positive");
    if (!(range_sigmas > 0)) throw std::invalid_argument("range_sigmas must be positive");
    if (max_subdivisions < 1) throw std::invalid_argument("max_subdivisions must be >= 1");
  }
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int subdivisions = 0;
  int evaluations = 0;
  bool converged = false;
};

class QuadratureError : public std::runtime_error {
 public:
  explicit QuadratureError(const QuadratureResult& r)
      : std::runtime_error("quadrature did not converge: estimate " + std::to_string(r.value) +
                           ", error " + std::to_string(r.error) + " after " +
                           std::to_string(r.subdivisions) + " subdivisions"),
        result_(r) {}
  const QuadratureResult& result() const noexcept { return result_; }

 private:
  QuadratureResult result_;
};

namespace detail {

// Abscissae and weights from QUADPACK dqk21.
inline constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
inline constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gk21(F& f, double a, double b) {
  const double centr = 0.5 * (a + b);
  const double hlgth = 0.5 * (b - a);
  const double fc = f(centr);
  double resg = 0.0;
  double resk = kWgk[10] * fc;
  double resabs = std::abs(resk);
  std::array<double, 10> f1{}, f2{};
  for (int j = 0; j < 10; ++j) {
    const double dx = hlgth * kXgk[j];
    f1[j] = f(centr - dx);
    f2[j] = f(centr + dx);
    const double s = f1[j] + f2[j];
    resk += kWgk[j] * s;
    resabs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) resg += kWg[j / 2] * s;
  }
  const double reskh = 0.5 * resk;
  double resasc = kWgk[10] * std::abs(fc - reskh);
  for (int j = 0; j < 10; ++j) resasc += kWgk[j] * (std::abs(f1[j] - reskh) + std::abs(f2[j] - reskh));

  const double dh = std::abs(hlgth);
  const double result = resk * hlgth;
  resabs *= dh;
  resasc *= dh;
  double err = std::abs((resk - resg) * hlgth);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  const double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
  return {a, b, result, err};
}

}  // namespace detail

/// Integrates f over [a, b]. Never throws on non-convergence; check `converged`.
template <class F>
QuadratureResult integrate(F&& f, double a, double b, const QuadratureConfig& cfg = {}) {
  cfg.validate();
  if (!(b > a)) throw std::invalid_argument("integration interval must have b > a");
  std::priority_queue<detail::Panel> heap;
  heap.push(detail::gk21(f, a, b));
  QuadratureResult r;
  r.evaluations = 21;

  auto totals = [&heap](double& value, double& error) {
    auto copy = heap;
    CompensatedSum v, e;
    while (!copy.empty()) {
      v += copy.top().value;
      e += copy.top().error;
      copy.pop();
    }
    value = v.value();
    error = e.value();
  };

  double value = heap.top().value;
  double error = heap.top().error;
  while (true) {
    if (error <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(value))) {
      r.converged = true;
      break;
    }
    if (r.subdivisions >= cfg.max_subdivisions) break;
    const detail::Panel worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;  // interval exhausted at machine precision
    heap.pop();
    const auto left = detail::gk21(f, worst.a, mid);
    const auto right = detail::gk21(f, mid, worst.b);
    heap.push(left);
    heap.push(right);
    r.evaluations += 42;
    ++r.subdivisions;
    // incremental update, refreshed exactly every 64 steps
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    if (r.subdivisions % 64 == 0) totals(value, error);
  }
  totals(value, error);
  r.value = value;
  r.error = error;
  if (!r.converged) r.converged = error <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(value));
  return r;
}

}  // namespace cumex
