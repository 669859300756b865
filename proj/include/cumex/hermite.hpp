#pragma once

// Probabilists' Hermite polynomials He_k (weight e^{-x^2/2}/sqrt(2 pi)),
// product linearization and exact Gaussian expectations of products.

#include <algorithm>
#include <map>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cumex/cumulant_algebra.hpp"
#include "cumex/rational.hpp"

#ifndef CUMEX_HERMITE_CAP
#define CUMEX_HERMITE_CAP 32
#endif

namespace cumex {

inline constexpr int kHermiteCap = CUMEX_HERMITE_CAP;

namespace detail {
inline void check_hermite_index(int k) {
  if (k < 0 || k > kHermiteCap)
    throw std::invalid_argument("Hermite index " + std::to_string(k) + " outside 0.." +
                                std::to_string(kHermiteCap));
}
}  // namespace detail

/// He_k in the monomial basis: coeffs[j] multiplies x^j.
struct HermitePolynomial {
  int degree = 0;
  std::vector<Rational> coeffs;

  double operator()(double x) const {
    double acc = 0.0;
    for (int j = degree; j >= 0; --j) acc = acc * x + to_double(coeffs[j]);
    return acc;
  }
  friend bool operator==(const HermitePolynomial&, const HermitePolynomial&) = default;
};

/// He_{k+1}(x) = x He_k(x) - k He_{k-1}(x), He_0 = 1, He_1 = x.
inline HermitePolynomial hermite_polynomial(int k) {
  detail::check_hermite_index(k);
  std::vector<Rational> prev{1};
  if (k == 0) return {0, prev};
  std::vector<Rational> cur{0, 1};
  for (int n = 1; n < k; ++n) {
    std::vector<Rational> next(n + 2, Rational(0));
    for (int j = 0; j <= n; ++j) next[j + 1] += cur[j];
    for (int j = 0; j < n; ++j) next[j] -= n * prev[j];
    prev = std::move(cur);
    cur = std::move(next);
  }
  return {k, cur};
}

/// Finite linear combination sum_k c_k He_k. Zero coefficients are never stored.
class HermiteSeries {
 public:
  HermiteSeries() = default;

  static HermiteSeries single(int k, const Rational& c = 1) {
    HermiteSeries s;
    s.add(k, c);
    return s;
  }

  void add(int k, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(k, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Rational coefficient(int k) const {
    auto it = terms_.find(k);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  const std::map<int, Rational>& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }
  int max_degree() const { return terms_.empty() ? -1 : terms_.rbegin()->first; }

  friend bool operator==(const HermiteSeries&, const HermiteSeries&) = default;

 private:
  std::map<int, Rational> terms_;
};

namespace detail {

// He_a He_b = sum_r C(a,r) C(b,r) r! He_{a+b-2r}; no cap on a, b.
inline void accumulate_product(HermiteSeries& out, int a, int b, const Rational& scale,
                               int max_keep = -1) {
  const int rmax = std::min(a, b);
  for (int r = 0; r <= rmax; ++r) {
    const int deg = a + b - 2 * r;
    if (max_keep >= 0 && deg > max_keep) continue;
    Rational c = scale;
    c *= binomial_exact(a, r) * binomial_exact(b, r) * factorial(r);
    out.add(deg, c);
  }
}

}  // namespace detail

/// Hermite-basis expansion of He_a * He_b.
inline HermiteSeries linearize_product(int a, int b) {
  detail::check_hermite_index(a);
  detail::check_hermite_index(b);
  HermiteSeries out;
  detail::accumulate_product(out, a, b, Rational(1));
  return out;
}

/// Product of a series with a single He_b, linearized.
inline HermiteSeries multiply(const HermiteSeries& s, int b, int max_keep = -1) {
  HermiteSeries out;
  for (const auto& [a, c] : s.terms()) detail::accumulate_product(out, a, b, c, max_keep);
  return out;
}

/// Exact value of  integral g(x) prod_i He_{k_i}(x) dx  for the standard normal density g.
/// Linearizes left to right and reads off the He_0 coefficient.
inline Rational gaussian_product_integral(std::span<const int> indices) {
  if (indices.empty()) throw std::invalid_argument("gaussian_product_integral: empty index list");
  for (int k : indices) detail::check_hermite_index(k);
  const int total = std::accumulate(indices.begin(), indices.end(), 0);
  if (total % 2 != 0) return 0;

  // A component He_t can only reach He_0 if t does not exceed the degree still to come.
  int remaining = total - indices[0];
  HermiteSeries acc = HermiteSeries::single(indices[0]);
  for (std::size_t i = 1; i < indices.size(); ++i) {
    remaining -= indices[i];
    acc = multiply(acc, indices[i], remaining);
  }
  return acc.coefficient(0);
}

inline Rational gaussian_product_integral(std::initializer_list<int> indices) {
  return gaussian_product_integral(std::span<const int>(indices.begin(), indices.size()));
}

}  // namespace cumex
