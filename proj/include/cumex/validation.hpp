#pragma once

// Self-test suite behind `cumex validate`. Checks are grouped by module and
// selected by a filter matched against "group" or "group.name".

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cumex/comparison.hpp"
#include "cumex/cumulant_algebra.hpp"
#include "cumex/expansion.hpp"
#include "cumex/gf2m.hpp"
#include "cumex/golden.hpp"
#include "cumex/hermite.hpp"
#include "cumex/leakage_model.hpp"
#include "cumex/numeric_info.hpp"
#include "cumex/sweep.hpp"

namespace cumex {

struct CheckResult {
  bool passed = true;
  std::string detail;

  void fail(const std::string& why) {
    if (passed) detail.clear();
    passed = false;
    if (!detail.empty()) detail += "; ";
    detail += why;
  }
};

struct Check {
  std::string group;
  std::string name;
  std::function<CheckResult(const GoldenSet&)> run;

  std::string id() const { return group + "." + name; }
  bool selected(const std::string& filter) const {
    return filter.empty() || group == filter || id() == filter || id().rfind(filter + ".", 0) == 0;
  }
};

/// The nine (field, C) pairs of the published table, in its column order.
inline std::vector<std::pair<gf2m::FieldSpec, std::uint32_t>> table_schemes() {
  const auto f16 = gf2m::FieldSpec::f16();
  const auto f256 = gf2m::FieldSpec::f256();
  return {{f16, 1}, {f16, 4}, {f16, 8}, {f16, 3}, {f256, 1}, {f256, 128}, {f256, 143}, {f256, 45}, {f256, 29}};
}

namespace detail {

inline Rational random_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-20, 20), den(1, 9);
  return make_rational(num(rng), den(rng));
}

inline CumulantVector<Rational> random_cumulants(std::mt19937_64& rng, int order) {
  CumulantVector<Rational> c(order);
  for (int k = 1; k <= order; ++k) c(k) = random_rational(rng);
  return c;
}

// Random pmf with small integer support and exact probabilities.
inline std::pair<std::vector<std::int64_t>, std::vector<Rational>> random_pmf(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> len(1, 5), val(-3, 6), w(1, 7);
  const int n = len(rng);
  std::vector<std::int64_t> s;
  std::vector<Rational> p;
  int total = 0;
  std::vector<int> ws;
  for (int i = 0; i < n; ++i) {
    s.push_back(val(rng));
    ws.push_back(w(rng));
    total += ws.back();
  }
  for (int x : ws) p.push_back(make_rational(x, total));
  return {s, p};
}

inline std::string str(const Rational& r) { return to_string(r); }

}  // namespace detail

inline std::vector<Check> standard_checks() {
  using detail::str;
  std::vector<Check> c;
  auto add = [&c](std::string g, std::string n, std::function<CheckResult(const GoldenSet&)> f) {
    c.push_back({std::move(g), std::move(n), std::move(f)});
  };

  // ---------------------------------------------------------------- cumulant
  add("cumulant", "round_trip", [](const GoldenSet&) {
    CheckResult r;
    std::mt19937_64 rng(11);
    for (int order = 1; order <= 10; ++order)
      for (int rep = 0; rep < 20; ++rep) {
        const auto c = detail::random_cumulants(rng, order);
        if (cumulants_from_moments(moments_from_cumulants(c)) != c) r.fail("order " + std::to_string(order));
      }
    return r;
  });
  add("cumulant", "series_oracle", [](const GoldenSet&) {
    CheckResult r;
    std::mt19937_64 rng(12);
    for (int order = 3; order <= 12; ++order)
      for (int rep = 0; rep < 10; ++rep) {
        const auto c = detail::random_cumulants(rng, order);
        const auto a = modified_moments_from_cumulants(c);
        if (a != modified_moments_series_oracle(c)) r.fail("order " + std::to_string(order));
        if (a(1) != 0 || a(2) != 0) r.fail("nonzero mt1/mt2");
      }
    return r;
  });
  add("cumulant", "low_order_identities", [](const GoldenSet&) {
    CheckResult r;
    const auto mt = symbolic_modified_moments(7);
    const Polynomial k3 = Polynomial::variable(3), k4 = Polynomial::variable(4);
    if (mt(6) != Polynomial::variable(6) + Polynomial(10) * k3 * k3) r.fail("mt6 != k6 + 10 k3^2");
    if (mt(7) != Polynomial::variable(7) + Polynomial(35) * k3 * k4) r.fail("mt7 != k7 + 35 k3 k4");
    return r;
  });
  add("cumulant", "additivity", [](const GoldenSet&) {
    CheckResult r;
    std::mt19937_64 rng(13);
    for (int rep = 0; rep < 30; ++rep) {
      auto [sa, pa] = detail::random_pmf(rng);
      auto [sb, pb] = detail::random_pmf(rng);
      std::vector<std::int64_t> s;
      std::vector<Rational> p;
      for (std::size_t i = 0; i < sa.size(); ++i)
        for (std::size_t j = 0; j < sb.size(); ++j) {
          s.push_back(sa[i] + sb[j]);
          p.push_back(pa[i] * pb[j]);
        }
      const int order = 8;
      const auto ka = cumulants_from_moments(pmf_raw_moments<Rational>(sa, pa, order));
      const auto kb = cumulants_from_moments(pmf_raw_moments<Rational>(sb, pb, order));
      const auto ks = cumulants_from_moments(pmf_raw_moments<Rational>(s, p, order));
      for (int k = 1; k <= order; ++k)
        if (ks(k) != ka(k) + kb(k)) r.fail("rep " + std::to_string(rep) + " order " + std::to_string(k));
    }
    return r;
  });
  add("cumulant", "shift_covariance", [](const GoldenSet&) {
    CheckResult r;
    std::mt19937_64 rng(14);
    for (int rep = 0; rep < 30; ++rep) {
      auto [s, p] = detail::random_pmf(rng);
      const auto k0 = cumulants_from_moments(pmf_raw_moments<Rational>(s, p, 8));
      for (auto& v : s) v += 5;
      const auto k1 = cumulants_from_moments(pmf_raw_moments<Rational>(s, p, 8));
      if (k1(1) != k0(1) + 5) r.fail("kappa1 not shifted");
      for (int k = 2; k <= 8; ++k)
        if (k1(k) != k0(k)) r.fail("kappa" + std::to_string(k) + " changed by shift");
    }
    return r;
  });

  // ---------------------------------------------------------------- hermite
  add("hermite", "special_values", [](const GoldenSet& g) {
    CheckResult r;
    if (g.hermite.empty()) r.fail("no hermite golden records");
    for (const auto& h : g.hermite) {
      const auto v = gaussian_product_integral(std::span<const int>(h.indices));
      if (v != h.value) r.fail("indices -> " + str(v) + ", golden " + str(h.value));
    }
    return r;
  });
  add("hermite", "orthogonality", [](const GoldenSet&) {
    CheckResult r;
    for (int k = 0; k <= 8; ++k)
      for (int l = 0; l <= 8; ++l) {
        const auto v = gaussian_product_integral({k, l});
        if (v != (k == l ? factorial(k) : Rational(0))) r.fail("(" + std::to_string(k) + "," + std::to_string(l) + ")");
      }
    return r;
  });
  add("hermite", "odd_total_degree", [](const GoldenSet&) {
    CheckResult r;
    for (int a = 0; a <= 9; ++a)
      for (int b = 0; b <= 9; ++b)
        for (int c = 0; c <= 9; ++c)
          if ((a + b + c) % 2 && gaussian_product_integral({a, b, c}) != 0) r.fail("odd total nonzero");
    return r;
  });
  add("hermite", "recurrence_and_derivative", [](const GoldenSet&) {
    CheckResult r;
    for (int k = 1; k < kHermiteCap; ++k) {
      const auto hk = hermite_polynomial(k), hm = hermite_polynomial(k - 1), hp = hermite_polynomial(k + 1);
      for (int j = 0; j <= k + 1; ++j) {
        Rational lhs = (j >= 1 && j - 1 <= k ? hk.coeffs[j - 1] : Rational(0)) - (j <= k - 1 ? k * hm.coeffs[j] : Rational(0));
        if (lhs != hp.coeffs[j]) r.fail("recurrence at k=" + std::to_string(k));
      }
      for (int j = 0; j < k; ++j)
        if (hk.coeffs[j + 1] * (j + 1) != k * hm.coeffs[j]) r.fail("derivative at k=" + std::to_string(k));
      if (hk.coeffs[k] != 1) r.fail("not monic at k=" + std::to_string(k));
    }
    return r;
  });
  add("hermite", "permutation_symmetry", [](const GoldenSet&) {
    CheckResult r;
    std::vector<int> idx{3, 4, 5, 6};
    const auto ref = gaussian_product_integral(std::span<const int>(idx));
    do {
      if (gaussian_product_integral(std::span<const int>(idx)) != ref) r.fail("order dependence");
    } while (std::next_permutation(idx.begin(), idx.end()));
    return r;
  });

  // ---------------------------------------------------------------- expansion
  add("expansion", "series_coefficients", [](const GoldenSet&) {
    CheckResult r;
    const Rational want[] = {1, make_rational(1, 2), make_rational(-1, 6), make_rational(1, 12)};
    for (int n = 1; n <= 4; ++n)
      if (xlogx_series_coefficient(n) != want[n - 1]) r.fail("a_" + std::to_string(n));
    return r;
  });
  add("expansion", "generic_equals_closed", [](const GoldenSet&) {
    CheckResult r;
    for (int K = 3; K <= 6; ++K)
      if (to_cumulant_basis(divergence_expansion_generic(K)).total() != closed_divergence_form(K).total())
        r.fail("K=" + std::to_string(K));
    return r;
  });
  add("expansion", "golden_text", [](const GoldenSet& g) {
    CheckResult r;
    for (const auto& [basis, K] : std::vector<std::pair<std::string, int>>{{"cumulant", 6}, {"mtilde", 6}, {"cumulant", 3}}) {
      const auto want = g.term_lines(basis, K);
      if (want.empty()) {
        r.fail("no golden lines for " + basis + " K=" + std::to_string(K));
        continue;
      }
      const auto generic = divergence_expansion_generic(K);
      const auto got = basis == "mtilde" ? generic.lines() : to_cumulant_basis(generic).lines();
      auto a = got, b = want;
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      if (a != b) r.fail(basis + " K=" + std::to_string(K) + " differs from golden");
    }
    return r;
  });
  add("expansion", "leading_coefficients", [](const GoldenSet&) {
    CheckResult r;
    for (int K = 3; K <= 8; ++K) {
      const auto e = divergence_expansion_generic(K);
      for (int k = 3; k <= K; ++k)
        if (e.total().coefficient({k, k}) != Rational(1) / (2 * factorial(k)))
          r.fail("K=" + std::to_string(K) + " k=" + std::to_string(k));
      for (const auto& t : e.terms()) {
        if (t.sigma_power % 2) r.fail("odd sigma power");
        for (const auto& [m, cf] : t.monomials.terms())
          if (m.front() < 3) r.fail("factor index below 3");
      }
    }
    return r;
  });
  add("expansion", "cardoso_difference", [](const GoldenSet&) {
    CheckResult r;
    const auto diff = closed_divergence_form(6).total() - comparison::cardoso_form(6).total();
    Polynomial want;
    want += Polynomial::monomial({3, 3, 4}, make_rational(-1, 8));
    want += Polynomial::monomial({3, 3, 3, 3}, make_rational(7, 48));
    want += Polynomial::monomial({4, 4, 4}, make_rational(-1, 48));
    want += Polynomial::monomial({3, 4, 5}, make_rational(-1, 12));
    if (diff != want) r.fail("closed - cardoso is not the cross-term list");
    for (int w : diff.weights())
      if (w <= 8) r.fail("difference reaches sigma^-" + std::to_string(w));
    return r;
  });
  add("expansion", "carlet_difference", [](const GoldenSet&) {
    CheckResult r;
    // two equiprobable secrets with free symbolic cumulants; marginal = average
    auto var = [](int x, int k) { return Polynomial::variable(100 * (x + 1) + k); };
    ConditionalCumulantTable<Polynomial> t;
    t.prior = {Polynomial(make_rational(1, 2)), Polynomial(make_rational(1, 2))};
    for (int x = 0; x < 2; ++x) {
      CumulantVector<Polynomial> c(6);
      for (int k = 3; k <= 6; ++k) c(k) = var(x, k);
      t.per_x.push_back(c);
    }
    t.marginal = CumulantVector<Polynomial>(6);
    for (int k = 3; k <= 6; ++k) t.marginal(k) = Polynomial(make_rational(1, 2)) * (var(0, k) + var(1, k));

    const auto mi = mi_expansion_series(t, 6);
    const auto carlet = comparison::carlet_expansion_series(t, 6);
    ExpansionResult cross(Basis::cumulant, 6,
                          closed_divergence_form(6).total() - comparison::cardoso_form(6).total(), 14);
    const auto want = detail::expected_minus_marginal(cross, t);
    for (int p = 6; p <= 12; p += 2) {
      const Polynomial d = mi.coefficient(p) - carlet.coefficient(p);
      if (d != want.coefficient(p)) r.fail("sigma^-" + std::to_string(p) + " difference is not the cross terms");
      if (p <= 8 && !d.is_zero()) r.fail("nonzero difference at sigma^-" + std::to_string(p));
    }
    // kappa6 of the marginal no longer the average: sigma^-12 now differs beyond the cross terms
    t.marginal(6) = Polynomial::variable(6);
    const Polynomial d12 = mi_expansion_series(t, 6).coefficient(12) - comparison::carlet_expansion_series(t, 6).coefficient(12);
    if (d12 == detail::expected_minus_marginal(cross, t).coefficient(12)) r.fail("kappa6 mismatch not visible");
    return r;
  });
  add("expansion", "comon_rescaling", [](const GoldenSet&) {
    CheckResult r;
    const auto rep = comon_consistency_check();
    if (!rep.consistent)
      for (const auto& d : rep.discrepancies) r.fail(d);
    if (rep.leading.size() != 4) r.fail("expected 4 terms at n^-1, n^-2");
    if (rep.higher.size() != 4) r.fail("expected 4 terms beyond n^-2");
    return r;
  });
  add("expansion", "k7_square_term", [](const GoldenSet&) {
    CheckResult r;
    const auto e = divergence_expansion_generic(7);
    const auto* t = e.term(14);
    if (!t || t->monomials.coefficient({7, 7}) != make_rational(1, 10080)) r.fail("m7^2 coefficient is not 1/10080");
    return r;
  });
  add("expansion", "k8_obstruction_witness", [](const GoldenSet&) {
    CheckResult r;
    const auto e = divergence_expansion_generic(8);
    const auto* t = e.term(14);
    const Rational a = t ? t->monomials.coefficient({3, 3, 8}) : Rational(0);
    if (a == 0) r.fail("no sigma^-14 term with factors {8,3,3} (alpha3 = 0: integral g He8 He3^2 vanishes)");
    return r;
  });
  add("expansion", "nonnegative_at_scale", [](const GoldenSet&) {
    CheckResult r;
    for (const auto& [f, C] : table_schemes()) {
      const auto s = analyze_scheme(f, C);
      for (double n2 : {10.0, 31.6, 100.0, 1000.0}) {
        const double v = mi_expansion(s.cumulants, std::sqrt(n2 + s.sigma_Z2()), 6);
        if (v < 0) r.fail(f.name() + " C=" + std::to_string(C) + " negative at sigma_N^2=" + format_g17(n2));
      }
    }
    return r;
  });
  add("expansion", "monotone_decay", [](const GoldenSet&) {
    CheckResult r;
    std::mt19937_64 rng(15);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int rep = 0; rep < 20; ++rep) {
      CumulantVector<double> c(6);
      for (int k = 3; k <= 6; ++k) c(k) = u(rng);
      if (c(3) == 0) c(3) = 1;
      const auto s = divergence_expansion_closed(c, 6);
      double prev = s(5.0);
      for (double sigma = 5.0; sigma <= 1000.0; sigma *= 1.05) {
        const double v = s(sigma);
        if (v > prev) r.fail("increase at sigma=" + format_g17(sigma));
        prev = v;
      }
    }
    return r;
  });

  // ---------------------------------------------------------------- gf2m
  add("gf2m", "known_products", [](const GoldenSet&) {
    CheckResult r;
    const auto f16 = gf2m::FieldSpec::f16(), f256 = gf2m::FieldSpec::f256();
    if (gf2m::mul_raw(f16, 2, 8) != 3) r.fail("F16 2*8 != 3");
    if (gf2m::mul_raw(f256, 2, 0x80) != 0x1D) r.fail("F256 2*0x80 != 0x1D");
    if (gf2m::mul_raw(gf2m::FieldSpec::aes(), 2, 0x80) != 0x1B) r.fail("AES 2*0x80 != 0x1B");
    return r;
  });
  add("gf2m", "group_and_tables", [](const GoldenSet&) {
    CheckResult r;
    for (const auto& f : {gf2m::FieldSpec::f16(), gf2m::FieldSpec::f256()}) {
      const gf2m::LogTables tab(f);
      const std::uint32_t q = f.order();
      for (std::uint32_t a = 1; a < q; ++a)
        if (gf2m::mul_raw(f, a, gf2m::pow_raw(f, a, q - 2)) != 1) r.fail(f.name() + " inverse");
      for (std::uint32_t a = 0; a < q; ++a)
        for (std::uint32_t b = 0; b < q; ++b)
          if (gf2m::mul_raw(f, a, b) != tab.mul(a, b)) {
            r.fail(f.name() + " table mismatch");
            break;
          }
    }
    return r;
  });
  add("gf2m", "distributivity", [](const GoldenSet&) {
    CheckResult r;
    const auto f16 = gf2m::FieldSpec::f16();
    for (std::uint32_t a = 0; a < 16; ++a)
      for (std::uint32_t b = 0; b < 16; ++b)
        for (std::uint32_t c = 0; c < 16; ++c)
          if (gf2m::mul_raw(f16, a, b ^ c) != (gf2m::mul_raw(f16, a, b) ^ gf2m::mul_raw(f16, a, c))) r.fail("F16");
    const auto f256 = gf2m::FieldSpec::f256();
    std::mt19937_64 rng(16);
    std::uniform_int_distribution<std::uint32_t> u(0, 255);
    for (int i = 0; i < 10000; ++i) {
      const auto a = u(rng), b = u(rng), c = u(rng);
      if (gf2m::mul_raw(f256, a, b ^ c) != (gf2m::mul_raw(f256, a, b) ^ gf2m::mul_raw(f256, a, c))) r.fail("F256");
    }
    return r;
  });

  // ---------------------------------------------------------------- leakage
  add("leakage", "published_table", [](const GoldenSet& g) {
    CheckResult r;
    if (g.published.empty()) r.fail("no published records");
    for (const auto& rec : g.published) {
      const auto d = build_distribution(MaskingScheme(gf2m::FieldSpec::by_name(rec.field), rec.C));
      const auto p = hci_order(d, 8);
      if (p.K != rec.K || p.V.at(p.K) != rec.V)
        r.fail(rec.field + " C=" + std::to_string(rec.C) + ": computed (K=" + std::to_string(p.K) + ", V=" +
               str(p.V.at(p.K)) + "), published (K=" + std::to_string(rec.K) + ", V=" + str(rec.V) + ")");
    }
    return r;
  });
  add("leakage", "model_table", [](const GoldenSet& g) {
    CheckResult r;
    if (g.model.empty()) r.fail("no model records");
    for (const auto& rec : g.model) {
      const auto d = build_distribution(MaskingScheme(gf2m::FieldSpec::by_name(rec.field), rec.C));
      const auto p = hci_order(d, 8);
      if (p.K != rec.K || p.V.at(p.K) != rec.V)
        r.fail(rec.field + " C=" + std::to_string(rec.C) + ": K=" + std::to_string(p.K) + " V=" + str(p.V.at(p.K)));
      for (int k = 1; k < p.K; ++k)
        if (p.V.at(k) != 0) r.fail("nonzero V below K");
    }
    return r;
  });
  add("leakage", "cumulant_identities", [](const GoldenSet&) {
    CheckResult r;
    for (const auto& [f, C] : table_schemes()) {
      const auto d = build_distribution(MaskingScheme(f, C));
      const int K = hci_order(d, 8).K;
      const auto t = conditional_cumulant_table(d, std::max(K, 3));
      const auto mm = pmf_raw_moments<Rational>(d.support, d.marginal_pmf(), K);
      Rational mean = 0, second = 0;
      for (std::size_t x = 0; x < d.secrets(); ++x) {
        const Rational dk = t.per_x[x](K) - t.marginal(K);
        if (dk != conditional_moment(d, x, K) - mm(K)) r.fail(f.name() + " C=" + std::to_string(C) + " kappa/moment gap");
        mean += d.prior[x] * t.per_x[x](K);
        second += d.prior[x] * t.per_x[x](K) * t.per_x[x](K);
      }
      if (mean != t.marginal(K)) r.fail(f.name() + " C=" + std::to_string(C) + " E kappa_K(Z|X) != kappa_K(Z)");
      if (second - mean * mean != interclass_variance(d, K)) r.fail(f.name() + " C=" + std::to_string(C) + " Var kappa_K != V_K");
    }
    return r;
  });
  add("leakage", "permutation_symmetry", [](const GoldenSet&) {
    CheckResult r;
    std::mt19937_64 rng(17);
    for (const auto& [f, C] : table_schemes()) {
      auto d = build_distribution(MaskingScheme(f, C));
      const auto p0 = hci_order(d, 8);
      const auto m0 = conditional_cumulant_table(d, 6).marginal;
      std::shuffle(d.cond_pmf.begin(), d.cond_pmf.end(), rng);
      const auto p1 = hci_order(d, 8);
      if (p1.K != p0.K || p1.V != p0.V || conditional_cumulant_table(d, 6).marginal != m0)
        r.fail(f.name() + " C=" + std::to_string(C));
    }
    return r;
  });
  add("leakage", "balance_propagation", [](const GoldenSet&) {
    CheckResult r;
    for (const auto& [f, C] : table_schemes()) {
      const auto d = build_distribution(MaskingScheme(f, C));
      const int K = hci_order(d, 8).K;
      const auto rep = balanced_propagation_check(d, K);
      if (!rep.consistent()) r.fail(f.name() + " C=" + std::to_string(C));
      if (propagation_deviation(d, 0.0, K) == 0.0) r.fail("sigma_N=0 lost the order-K leak");
    }
    return r;
  });

  // ---------------------------------------------------------------- numeric
  add("numeric", "mi_nonnegative_monotone", [](const GoldenSet&) {
    CheckResult r;
    const QuadratureConfig q;
    for (const auto& [f, C] : table_schemes()) {
      const auto d = build_distribution(MaskingScheme(f, C));
      double prev = std::numeric_limits<double>::infinity();
      for (double n2 : {1.0, 3.16, 10.0, 31.6, 100.0}) {
        const double v = mutual_information_exact(d, std::sqrt(n2), q);
        if (v < -q.abs_tol) r.fail(f.name() + " C=" + std::to_string(C) + " negative MI");
        if (v > prev) r.fail(f.name() + " C=" + std::to_string(C) + " MI increases at " + format_g17(n2));
        prev = v;
      }
    }
    return r;
  });
  add("numeric", "entropy_kl_identity", [](const GoldenSet&) {
    CheckResult r;
    std::vector<GaussianMixture> ms{
        GaussianMixture({{1.0, 0.0, 2.0}}),
        GaussianMixture({{0.5, -1.0, 5.0}, {0.5, 1.0, 5.0}}),
        GaussianMixture({{0.5, -40.0, 1.0}, {0.5, 40.0, 1.0}}),
        GaussianMixture({{0.2, 0.0, 0.7}, {0.5, 1.0, 0.7}, {0.3, 3.0, 0.7}}),
    };
    const auto d = build_distribution(MaskingScheme(gf2m::FieldSpec::f16(), 3));
    for (double s : {0.5, 2.0, 5.0}) ms.push_back(mixture_from_leakage(d, s));
    for (const auto& m : ms) {
      const double gap = differential_entropy(m) + kl_to_gaussian(m) - gaussian_entropy(m.variance());
      if (std::abs(gap) > 1e-10) r.fail("identity gap " + format_g17(gap));
    }
    return r;
  });
  add("numeric", "divergence_difference", [](const GoldenSet&) {
    CheckResult r;
    for (const auto& [f, C] : table_schemes()) {
      const auto d = build_distribution(MaskingScheme(f, C));
      const int K = hci_order(d, 8).K;
      if (K < 3) {
        try {
          mi_via_divergence_difference(d, 5.0);
          r.fail(f.name() + " C=" + std::to_string(C) + " accepted unbalanced second moments");
        } catch (const PreconditionError&) {
        }
        continue;
      }
      const double a = mi_via_divergence_difference(d, 5.0), b = mutual_information_exact(d, 5.0);
      if (std::abs(a - b) > 1e-9) r.fail(f.name() + " C=" + std::to_string(C) + " gap " + format_g17(a - b));
    }
    return r;
  });
  add("numeric", "ratio_golden", [](const GoldenSet& g) {
    CheckResult r;
    if (g.ratios.empty()) r.fail("no ratio records");
    for (const auto& rec : g.ratios) {
      const auto s = analyze_scheme(gf2m::FieldSpec::by_name(rec.field), rec.C);
      const double mi = mutual_information_exact(s.dist, std::sqrt(rec.at));
      const double ratio = mi / theorem1_asymptote(s.profile.K, s.V_K(), rec.at, s.sigma_Z2());
      if (std::abs(ratio - rec.value) > 1e-8 * rec.value)
        r.fail(rec.field + " C=" + std::to_string(rec.C) + " at " + format_g17(rec.at) + ": " + format_g17(ratio));
    }
    return r;
  });
  add("numeric", "divergence_golden", [](const GoldenSet& g) {
    CheckResult r;
    if (g.divergences.empty()) r.fail("no divergence records");
    for (const auto& rec : g.divergences) {
      const auto d = build_distribution(MaskingScheme(gf2m::FieldSpec::by_name(rec.field), rec.C));
      const auto m = mixture_from_leakage(d, rec.at);
      const double D = kl_to_gaussian(m);
      if (std::abs(D - rec.value) > 1e-8 * rec.value) r.fail("sigma_N=" + format_g17(rec.at) + ": " + format_g17(D));
      const auto t = conditional_cumulant_table(d, 6);
      const double Dc = divergence_expansion_closed(t.marginal, 6)(std::sqrt(m.variance()));
      const double tol = rec.at < 10 ? 0.02 : 0.005;
      if (std::abs(D - Dc) / D >= tol) r.fail("closed form off by " + format_g17(std::abs(D - Dc) / D));
    }
    return r;
  });

  return c;
}

struct ValidationOutcome {
  int run = 0;
  int failed = 0;
  bool ok() const { return run > 0 && failed == 0; }
};

/// Runs the selected checks, one PASS/FAIL line each.
inline ValidationOutcome run_validation(const GoldenSet& golden, const std::string& filter, std::ostream& out) {
  ValidationOutcome o;
  for (const auto& chk : standard_checks()) {
    if (!chk.selected(filter)) continue;
    ++o.run;
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult res;
    try {
      res = chk.run(golden);
    } catch (const std::exception& e) {
      res.fail(std::string("exception: ") + e.what());
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (!res.passed) ++o.failed;
    out << (res.passed ? "PASS " : "FAIL ") << chk.id() << " (" << static_cast<long>(ms) << " ms)";
    if (!res.detail.empty()) out << ": " << res.detail;
    out << '\n';
  }
  out << o.run - o.failed << '/' << o.run << " checks passed\n";
  return o;
}

}  // namespace cumex
