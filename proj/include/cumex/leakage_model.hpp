#pragma once

// Two-share masking with Hamming-weight leakage:
//   Z = wH(X ^ (C*M)) + wH(M),  M uniform over the field.
// Conditional pmfs of Z given the secret, HCI order and inter-class variances.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "cumex/cumulant_algebra.hpp"
#include "cumex/expansion.hpp"
#include "cumex/gf2m.hpp"
#include "cumex/polynomial.hpp"
#include "cumex/rational.hpp"

namespace cumex {

struct MaskingScheme {
  MaskingScheme(gf2m::FieldSpec f, std::uint32_t c) : field(f), C(c) {
    if (c == 0) throw std::invalid_argument("masking constant C must be nonzero");
    if (c >= f.order()) throw std::invalid_argument("masking constant C outside the field");
  }
  gf2m::FieldSpec field;
  std::uint32_t C;
};

/// Per-secret pmf of an integer leakage Z on support 0..max_z.
template <class T>
struct SensitiveDistribution {
  std::vector<std::int64_t> support;
  std::vector<std::vector<T>> cond_pmf;  // [x][z index]
  std::vector<T> prior;

  std::size_t secrets() const { return cond_pmf.size(); }

  void validate() const {
    if (cond_pmf.empty() || prior.size() != cond_pmf.size())
      throw std::invalid_argument("prior and pmf table differ in size");
    auto check_sum = [](const std::vector<T>& v, const char* what) {
      T s = T(0);
      for (const T& p : v) {
        if (p < T(0)) throw std::invalid_argument(std::string("negative entry in ") + what);
        s = s + p;
      }
      if constexpr (is_exact_v<T>) {
        if (s != 1) throw std::invalid_argument(std::string(what) + " does not sum to 1");
      } else {
        if (std::abs(s - 1.0) > 1e-12) throw std::invalid_argument(std::string(what) + " does not sum to 1");
      }
    };
    check_sum(prior, "prior");
    for (const auto& row : cond_pmf) {
      if (row.size() != support.size()) throw std::invalid_argument("pmf row length differs from support");
      check_sum(row, "pmf row");
    }
  }

  std::vector<T> marginal_pmf() const {
    std::vector<T> m(support.size(), T(0));
    for (std::size_t x = 0; x < cond_pmf.size(); ++x)
      for (std::size_t i = 0; i < support.size(); ++i) m[i] = m[i] + prior[x] * cond_pmf[x][i];
    return m;
  }
};

template <class T>
std::vector<T> uniform_prior(std::size_t n) {
  return std::vector<T>(n, scalar_cast<T>(make_rational(1, static_cast<std::int64_t>(n))));
}

/// Exact conditional pmfs by enumerating every mask.
inline SensitiveDistribution<Rational> build_distribution(const MaskingScheme& s) {
  const std::uint32_t q = s.field.order();
  const int n = s.field.degree();
  SensitiveDistribution<Rational> d;
  for (int z = 0; z <= 2 * n; ++z) d.support.push_back(z);
  d.cond_pmf.assign(q, std::vector<Rational>(2 * n + 1, Rational(0)));
  const Rational w = make_rational(1, q);
  for (std::uint32_t x = 0; x < q; ++x)
    for (std::uint32_t m = 0; m < q; ++m) {
      const std::uint32_t share = x ^ gf2m::mul_raw(s.field, s.C, m);
      d.cond_pmf[x][gf2m::hamming_weight(share) + gf2m::hamming_weight(m)] += w;
    }
  d.prior = uniform_prior<Rational>(q);
  return d;
}

inline SensitiveDistribution<double> to_double(const SensitiveDistribution<Rational>& d) {
  SensitiveDistribution<double> out;
  out.support = d.support;
  for (const auto& row : d.cond_pmf) {
    std::vector<double> r;
    for (const auto& p : row) r.push_back(to_double(p));
    out.cond_pmf.push_back(std::move(r));
  }
  for (const auto& p : d.prior) out.prior.push_back(to_double(p));
  return out;
}

/// E(Z^k | X = x).
template <class T>
T conditional_moment(const SensitiveDistribution<T>& d, std::size_t x, int k) {
  if (k < 1) throw std::invalid_argument("moment order must be >= 1");
  if (x >= d.secrets()) throw std::out_of_range("secret index out of range");
  T acc = T(0);
  for (std::size_t i = 0; i < d.support.size(); ++i) {
    T zk = T(1);
    for (int j = 0; j < k; ++j) zk = zk * scalar_from_int<T>(d.support[i]);
    acc = acc + zk * d.cond_pmf[x][i];
  }
  return acc;
}

/// Var_x E(Z^k | X = x) under the prior.
template <class T>
T interclass_variance(const SensitiveDistribution<T>& d, int k) {
  T mean = T(0), second = T(0);
  for (std::size_t x = 0; x < d.secrets(); ++x) {
    const T m = conditional_moment(d, x, k);
    mean = mean + d.prior[x] * m;
    second = second + d.prior[x] * m * m;
  }
  return second - mean * mean;
}

/// Var(Z) of the marginal leakage.
template <class T>
T leakage_variance(const SensitiveDistribution<T>& d) {
  const auto pm = d.marginal_pmf();
  const auto m = pmf_raw_moments<T>(d.support, pm, 2);
  return m(2) - m(1) * m(1);
}

struct LeakageProfile {
  int K = 0;
  std::map<int, Rational> V;  // k = 1..K
  Rational sigma_Z2;
};

class BalancedError : public std::runtime_error {
 public:
  explicit BalancedError(int max_k)
      : std::runtime_error("leakage balanced through order " + std::to_string(max_k)), max_k_(max_k) {}
  int max_k() const noexcept { return max_k_; }

 private:
  int max_k_;
};

/// Smallest k with Var_x E(Z^k|x) > 0, by exact comparison.
inline LeakageProfile hci_order(const SensitiveDistribution<Rational>& d, int max_k) {
  if (max_k < 1) throw std::invalid_argument("max_k must be >= 1");
  LeakageProfile p;
  p.sigma_Z2 = leakage_variance(d);
  for (int k = 1; k <= max_k; ++k) {
    Rational v = interclass_variance(d, k);
    p.V[k] = v;
    if (v != 0) {
      p.K = k;
      return p;
    }
  }
  throw BalancedError(max_k);
}

// ---------------------------------------------------------------------------
// Propagation of balance from Z to Y = Z + N.

struct PropagationRow {
  int k = 0;
  bool balanced = false;
  Rational max_deviation;  // largest |coefficient difference| in sigma_N^2 across secrets
};

struct PropagationReport {
  std::vector<PropagationRow> rows;  // k = 1..K
  bool consistent() const {
    for (const auto& r : rows)
      if (r.balanced != (r.k < static_cast<int>(rows.size()))) return false;
    return true;
  }
};

/// E(N^j) for N ~ N(0, s) as a polynomial in s = sigma_N^2 (variable index 1).
inline Polynomial gaussian_moment(int j) {
  if (j % 2) return Polynomial();
  Rational dfact = 1;
  for (int i = j - 1; i > 1; i -= 2) dfact *= i;
  return Polynomial::monomial(Monomial(static_cast<std::size_t>(j / 2), 1), dfact);
}

/// E(Y^k | x) = sum_j C(k,j) E(Z^j|x) E(N^{k-j}), symbolic in sigma_N^2.
inline Polynomial conditional_output_moment(const SensitiveDistribution<Rational>& d, std::size_t x, int k) {
  Polynomial acc;
  for (int j = 0; j <= k; ++j) {
    const Rational mz = j == 0 ? Rational(1) : conditional_moment(d, x, j);
    acc += Polynomial(binomial_exact(k, j) * mz) * gaussian_moment(k - j);
  }
  return acc;
}

/// For k = 1..K, checks whether E(Y^k|x) is the same polynomial in sigma_N^2 for every x.
inline PropagationReport balanced_propagation_check(const SensitiveDistribution<Rational>& d, int K) {
  if (K < 1) throw std::invalid_argument("K must be >= 1");
  PropagationReport rep;
  for (int k = 1; k <= K; ++k) {
    PropagationRow row{k, true, Rational(0)};
    const Polynomial ref = conditional_output_moment(d, 0, k);
    for (std::size_t x = 1; x < d.secrets(); ++x) {
      const Polynomial diff = conditional_output_moment(d, x, k) - ref;
      for (const auto& [m, c] : diff.terms()) {
        row.balanced = false;
        const Rational a = c < 0 ? Rational(-c) : c;
        if (a > row.max_deviation) row.max_deviation = a;
      }
    }
    rep.rows.push_back(row);
  }
  return rep;
}

/// Largest |E(Y^k|x) - E(Y^k|0)| at a concrete noise level.
inline double propagation_deviation(const SensitiveDistribution<Rational>& d, double sigma_N, int k) {
  const Polynomial ref = conditional_output_moment(d, 0, k);
  double worst = 0.0;
  for (std::size_t x = 1; x < d.secrets(); ++x) {
    const Polynomial diff = conditional_output_moment(d, x, k) - ref;
    const double v = diff.evaluate<double>([&](int) { return sigma_N * sigma_N; });
    worst = std::max(worst, std::abs(v));
  }
  return worst;
}

// ---------------------------------------------------------------------------

template <class T>
ConditionalCumulantTable<T> conditional_cumulant_table(const SensitiveDistribution<T>& d, int order) {
  if (order < 3) throw std::invalid_argument("cumulant table order must be >= 3");
  d.validate();
  ConditionalCumulantTable<T> t;
  t.prior = d.prior;
  for (const auto& row : d.cond_pmf)
    t.per_x.push_back(cumulants_from_moments(pmf_raw_moments<T>(d.support, row, order)));
  t.marginal = cumulants_from_moments(pmf_raw_moments<T>(d.support, d.marginal_pmf(), order));
  return t;
}

inline ConditionalCumulantTable<double> to_double(const ConditionalCumulantTable<Rational>& t) {
  auto conv = [](const CumulantVector<Rational>& c) {
    std::vector<double> v;
    for (const auto& r : c.values()) v.push_back(to_double(r));
    return CumulantVector<double>(std::move(v));
  };
  ConditionalCumulantTable<double> out;
  for (const auto& p : t.prior) out.prior.push_back(to_double(p));
  for (const auto& c : t.per_x) out.per_x.push_back(conv(c));
  out.marginal = conv(t.marginal);
  return out;
}

}  // namespace cumex
