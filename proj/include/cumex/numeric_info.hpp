#pragma once

// Reference values by quadrature for Y = Z + N with discrete Z and Gaussian N:
// mutual information, differential entropy, divergence from the
// moment-matched Gaussian.
//
// Every relative-entropy integral is written as  integral p(y) phi(r(y)) dy
// with r = q/p and phi(r) = r log r - r + 1 >= 0, which equals
// integral q log(q/p) when both densities have unit mass. log r is always a
// difference of log-sum-exp values, never a ratio of densities.

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cumex/compensated.hpp"
#include "cumex/leakage_model.hpp"
#include "cumex/quadrature.hpp"
#include "cumex/rational.hpp"

namespace cumex {

struct GaussianComponent {
  double weight;
  double mean;
  double sigma;
};

class GaussianMixture {
 public:
  GaussianMixture() = default;
  explicit GaussianMixture(std::vector<GaussianComponent> comps) : comps_(std::move(comps)) {
    if (comps_.empty()) throw std::invalid_argument("mixture needs at least one component");
    double s = 0.0;
    for (const auto& c : comps_) {
      if (!(c.sigma > 0)) throw std::invalid_argument("mixture component sigma must be positive");
      if (c.weight < 0) throw std::invalid_argument("negative mixture weight");
      s += c.weight;
    }
    if (std::abs(s - 1.0) > 1e-14) throw std::invalid_argument("mixture weights do not sum to 1");
    std::erase_if(comps_, [](const GaussianComponent& c) { return c.weight == 0.0; });
    for (const auto& c : comps_) {
      log_w_.push_back(std::log(c.weight) - std::log(c.sigma) - 0.5 * std::log(2.0 * std::numbers::pi));
      inv_2var_.push_back(0.5 / (c.sigma * c.sigma));
    }
  }

  const std::vector<GaussianComponent>& components() const noexcept { return comps_; }

  double mean() const {
    CompensatedSum s;
    for (const auto& c : comps_) s += c.weight * c.mean;
    return s.value();
  }

  double variance() const {
    const double mu = mean();
    CompensatedSum s;
    for (const auto& c : comps_) s += c.weight * (c.sigma * c.sigma + (c.mean - mu) * (c.mean - mu));
    return s.value();
  }

  double log_density(double y) const {
    double mx = -std::numeric_limits<double>::infinity();
    thread_local std::vector<double> e;
    e.resize(comps_.size());
    for (std::size_t i = 0; i < comps_.size(); ++i) {
      const double d = y - comps_[i].mean;
      e[i] = log_w_[i] - d * d * inv_2var_[i];
      mx = std::max(mx, e[i]);
    }
    double s = 0.0;
    for (double v : e) s += std::exp(v - mx);
    return mx + std::log(s);
  }

  double density(double y) const { return std::exp(log_density(y)); }

  /// [min mean - r sigma, max mean + r sigma] over components.
  std::pair<double, double> range(double r) const {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& c : comps_) {
      lo = std::min(lo, c.mean - r * c.sigma);
      hi = std::max(hi, c.mean + r * c.sigma);
    }
    return {lo, hi};
  }

 private:
  std::vector<GaussianComponent> comps_;
  std::vector<double> log_w_;
  std::vector<double> inv_2var_;
};

/// phi(e^d) = d e^d - (e^d - 1), accurate for small |d|.
inline double phi_of_log_ratio(double d) {
  if (std::abs(d) < 0.1) {
    // sum_{n>=2} (n-1) d^n / n!
    double term = d;  // d^n / n! at n = 1
    double s = 0.0;
    for (int n = 2; n <= 14; ++n) {
      term *= d / n;
      s += (n - 1) * term;
    }
    return s;
  }
  return d * std::exp(d) - std::expm1(d);
}

namespace detail {

template <class T>
std::vector<double> row_to_double(const std::vector<T>& row) {
  std::vector<double> out;
  for (const auto& p : row) out.push_back(to_double(p));
  return out;
}

inline GaussianMixture mixture_from_pmf(const std::vector<std::int64_t>& support, const std::vector<double>& pmf,
                                        double sigma_N) {
  std::vector<GaussianComponent> comps;
  double s = 0.0;
  for (double p : pmf) s += p;
  for (std::size_t i = 0; i < support.size(); ++i)
    if (pmf[i] > 0) comps.push_back({pmf[i] / s, static_cast<double>(support[i]), sigma_N});
  return GaussianMixture(std::move(comps));
}

// D(q || p) = integral p phi(q/p) over [lo, hi].
inline QuadratureResult relative_entropy(const GaussianMixture& q, const GaussianMixture& p, double lo, double hi,
                                         const QuadratureConfig& cfg) {
  auto f = [&](double y) {
    const double lp = p.log_density(y);
    const double lq = q.log_density(y);
    return std::exp(lp) * phi_of_log_ratio(lq - lp);
  };
  return integrate(f, lo, hi, cfg);
}

// Distinct conditional rows with their accumulated prior mass.
template <class T>
std::vector<std::pair<double, std::vector<double>>> distinct_rows(const SensitiveDistribution<T>& d) {
  std::map<std::vector<double>, double> rows;
  for (std::size_t x = 0; x < d.secrets(); ++x) rows[row_to_double(d.cond_pmf[x])] += to_double(d.prior[x]);
  std::vector<std::pair<double, std::vector<double>>> out;
  for (auto& [row, w] : rows)
    if (w > 0) out.emplace_back(w, row);
  return out;
}

}  // namespace detail

/// Mixture of Y = Z + N for secret x, or of the marginal Y when x is empty.
template <class T>
GaussianMixture mixture_from_leakage(const SensitiveDistribution<T>& d, double sigma_N,
                                     std::optional<std::size_t> x = std::nullopt) {
  if (!(sigma_N > 0)) throw std::invalid_argument("sigma_N must be positive");
  if (x) {
    if (*x >= d.secrets()) throw std::out_of_range("secret index out of range");
    return detail::mixture_from_pmf(d.support, detail::row_to_double(d.cond_pmf[*x]), sigma_N);
  }
  return detail::mixture_from_pmf(d.support, detail::row_to_double(d.marginal_pmf()), sigma_N);
}

struct InformationResult {
  double value = 0.0;
  double error = 0.0;  // summed quadrature error estimates
  bool converged = true;
  int subdivisions = 0;
};

/// I(X;Y) = sum_x p(x) D(Y|x || Y) in nats, without throwing on non-convergence.
template <class T>
InformationResult mutual_information_detailed(const SensitiveDistribution<T>& d, double sigma_N,
                                              const QuadratureConfig& cfg = {}) {
  if (!(sigma_N > 0)) throw std::invalid_argument("sigma_N must be positive");
  d.validate();
  const auto marginal = mixture_from_leakage(d, sigma_N);
  const auto [lo, hi] = marginal.range(cfg.range_sigmas);
  InformationResult r;
  CompensatedSum total, err;
  for (const auto& [w, row] : detail::distinct_rows(d)) {
    const auto cond = detail::mixture_from_pmf(d.support, row, sigma_N);
    const auto q = detail::relative_entropy(cond, marginal, lo, hi, cfg);
    total += w * q.value;
    err += w * q.error;
    r.converged = r.converged && q.converged;
    r.subdivisions += q.subdivisions;
  }
  r.value = total.value();
  r.error = err.value();
  return r;
}

template <class T>
double mutual_information_exact(const SensitiveDistribution<T>& d, double sigma_N, const QuadratureConfig& cfg = {}) {
  const auto r = mutual_information_detailed(d, sigma_N, cfg);
  if (!r.converged) throw QuadratureError({r.value, r.error, r.subdivisions, 0, false});
  return r.value;
}

namespace detail {
inline std::pair<double, double> joint_range(const GaussianMixture& m, double mu, double sigma, double r) {
  auto [lo, hi] = m.range(r);
  return {std::min(lo, mu - r * sigma), std::max(hi, mu + r * sigma)};
}
inline double checked(const QuadratureResult& q) {
  if (!q.converged) throw QuadratureError(q);
  return q.value;
}
}  // namespace detail

/// D(m || N(mu, var)) for a given Gaussian reference.
inline double kl_to_gaussian(const GaussianMixture& m, double mu, double var, const QuadratureConfig& cfg = {}) {
  if (!(var > 0)) throw std::invalid_argument("reference variance must be positive");
  const double s = std::sqrt(var);
  const GaussianMixture g({{1.0, mu, s}});
  const auto [lo, hi] = detail::joint_range(m, mu, s, cfg.range_sigmas);
  return detail::checked(detail::relative_entropy(m, g, lo, hi, cfg));
}

/// D(m || m*) with m* the Gaussian of equal mean and variance.
inline double kl_to_gaussian(const GaussianMixture& m, const QuadratureConfig& cfg = {}) {
  return kl_to_gaussian(m, m.mean(), m.variance(), cfg);
}

/// -integral f log f.
inline double differential_entropy(const GaussianMixture& m, const QuadratureConfig& cfg = {}) {
  const auto [lo, hi] = m.range(cfg.range_sigmas);
  auto f = [&](double y) {
    const double l = m.log_density(y);
    return -std::exp(l) * l;
  };
  return detail::checked(integrate(f, lo, hi, cfg));
}

inline double gaussian_entropy(double var) {
  return 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e * var);
}

class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// I(X;Y) = E_x D(Y|x || Y*) - D(Y || Y*) with one Y* shared by all secrets.
/// Requires E(Z|x) and E(Z^2|x) to be independent of x (checked exactly).
inline double mi_via_divergence_difference(const SensitiveDistribution<Rational>& d, double sigma_N,
                                           const QuadratureConfig& cfg = {}) {
  if (!(sigma_N > 0)) throw std::invalid_argument("sigma_N must be positive");
  for (int k = 1; k <= 2; ++k)
    if (interclass_variance(d, k) != 0)
      throw PreconditionError("conditional moment of order " + std::to_string(k) + " depends on the secret");

  const auto marginal = mixture_from_leakage(d, sigma_N);
  const double mu = marginal.mean();
  const double var = marginal.variance();
  CompensatedSum total;
  for (const auto& [w, row] : detail::distinct_rows(d))
    total += w * kl_to_gaussian(detail::mixture_from_pmf(d.support, row, sigma_N), mu, var, cfg);
  total += -kl_to_gaussian(marginal, mu, var, cfg);
  return total.value();
}

}  // namespace cumex
