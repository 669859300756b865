#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "cumex/comparison.hpp"
#include "cumex/expansion.hpp"

using namespace cumex;

namespace {

Rational R(std::int64_t n, std::int64_t d = 1) { return make_rational(n, d); }

CumulantVector<Rational> kappa(std::initializer_list<Rational> k3_up) {
  std::vector<Rational> v{0, 1};
  v.insert(v.end(), k3_up);
  return CumulantVector<Rational>(v);
}

Polynomial mono(Monomial m, Rational c) { return Polynomial::monomial(std::move(m), c); }

}  // namespace

TEST(SeriesCoefficients, XLogX) {
  EXPECT_EQ(xlogx_series_coefficient(1), 1);
  EXPECT_EQ(xlogx_series_coefficient(2), R(1, 2));
  EXPECT_EQ(xlogx_series_coefficient(3), R(-1, 6));
  EXPECT_EQ(xlogx_series_coefficient(4), R(1, 12));
  EXPECT_EQ(xlogx_series_coefficient(5), R(-1, 20));
  // numeric check of (1+h)log(1+h) at h = 0.1
  double s = 0;
  for (int n = 1; n <= 30; ++n) s += to_double(xlogx_series_coefficient(n)) * std::pow(0.1, n);
  EXPECT_NEAR(s, 1.1 * std::log(1.1), 1e-15);
}

TEST(ClosedForm, EightTermsAtKSix) {
  const auto e = closed_divergence_form(6);
  EXPECT_EQ(e.monomial_count(), 8u);
  EXPECT_EQ(e.remainder_power(), 14);
  Polynomial want = mono({3, 3}, R(1, 12)) + mono({4, 4}, R(1, 48)) + mono({3, 3, 4}, R(-1, 8)) +
                    mono({5, 5}, R(1, 240)) + mono({3, 3, 3, 3}, R(7, 48)) + mono({4, 4, 4}, R(-1, 48)) +
                    mono({3, 4, 5}, R(-1, 12)) + mono({6, 6}, R(1, 1440));
  EXPECT_EQ(e.total(), want);
  std::vector<int> powers;
  for (const auto& t : e.terms()) powers.push_back(t.sigma_power);
  EXPECT_EQ(powers, (std::vector<int>{6, 8, 10, 12}));
}

TEST(ClosedForm, Truncation) {
  EXPECT_EQ(closed_divergence_form(3).monomial_count(), 1u);
  EXPECT_EQ(closed_divergence_form(4).monomial_count(), 2u);
  EXPECT_EQ(closed_divergence_form(5).monomial_count(), 4u);
  EXPECT_EQ(closed_divergence_form(3).remainder_power(), 8);
  EXPECT_THROW(closed_divergence_form(2), std::invalid_argument);
  EXPECT_THROW(closed_divergence_form(7), std::invalid_argument);
}

TEST(ClosedForm, KappaThreeOnly) {
  const auto s = divergence_expansion_closed(kappa({1, 0, 0, 0}), 6);
  ASSERT_EQ(s.terms.size(), 2u);
  EXPECT_EQ(s.terms[0], std::make_pair(6, R(1, 12)));
  EXPECT_EQ(s.terms[1], std::make_pair(12, R(7, 48)));
}

TEST(ClosedForm, GaussianIsEmpty) {
  EXPECT_TRUE(divergence_expansion_closed(kappa({0, 0, 0, 0}), 6).terms.empty());
}

TEST(ClosedForm, KappaFourEqualsTwo) {
  const auto s = divergence_expansion_closed(kappa({0, 2, 0, 0}), 6);
  EXPECT_EQ(s.coefficient(8), R(1, 12));
  EXPECT_EQ(s.coefficient(12), R(-1, 6));
  EXPECT_EQ(s.terms.size(), 2u);
}

TEST(ClosedForm, RequiresOrderK) {
  EXPECT_THROW(divergence_expansion_closed(CumulantVector<double>(4), 6), std::invalid_argument);
}

TEST(ClosedForm, CanonicalText) {
  const auto lines = closed_divergence_form(6).lines();
  EXPECT_NE(std::find(lines.begin(), lines.end(), "(-1/8) * k3^2 * k4 / s^10"), lines.end());
  EXPECT_NE(std::find(lines.begin(), lines.end(), "(-1/12) * k3 * k4 * k5 / s^12"), lines.end());
  EXPECT_EQ(closed_divergence_form(3).to_string(), "(1/12) * k3^2 / s^6\n");
}

TEST(SigmaSeries, CompensatedEvaluation) {
  const auto s = divergence_expansion_closed(CumulantVector<double>{0, 1, 1.5, -2, 0.5, 3}, 6);
  for (double sigma : {2.0, 5.0, 40.0}) {
    const double direct = 1.5 * 1.5 / 12 / std::pow(sigma, 6) + 4.0 / 48 / std::pow(sigma, 8) +
                          (-(1.5 * 1.5 * -2) / 8 + 0.25 / 240) / std::pow(sigma, 10) +
                          (7 * std::pow(1.5, 4) / 48 + 8.0 / 48 + 1.5 * 2 * 0.5 / 12 + 9.0 / 1440) / std::pow(sigma, 12);
    EXPECT_NEAR(s(sigma), direct, 1e-15 * direct);
  }
  EXPECT_THROW(s(0.0), std::domain_error);
}

TEST(Generic, ModifiedMomentFormAtKSix) {
  const auto e = divergence_expansion_generic(6);
  EXPECT_EQ(e.basis(), Basis::modified_moment);
  EXPECT_EQ(e.monomial_count(), 9u);
  const auto t = e.total();
  EXPECT_EQ(t.coefficient({3, 3}), R(1, 12));
  EXPECT_EQ(t.coefficient({4, 4}), R(1, 48));
  EXPECT_EQ(t.coefficient({5, 5}), R(1, 240));
  EXPECT_EQ(t.coefficient({3, 3, 4}), R(-1, 8));
  EXPECT_EQ(t.coefficient({6, 6}), R(1, 1440));
  EXPECT_EQ(t.coefficient({4, 4, 4}), R(-1, 48));
  EXPECT_EQ(t.coefficient({3, 4, 5}), R(-1, 12));
  EXPECT_EQ(t.coefficient({3, 3, 6}), R(-1, 72));
  EXPECT_EQ(t.coefficient({3, 3, 3, 3}), R(31, 144));
}

TEST(Generic, CumulantBasisEqualsClosedForm) {
  for (int K = 3; K <= 6; ++K)
    EXPECT_EQ(to_cumulant_basis(divergence_expansion_generic(K)).total(), closed_divergence_form(K).total()) << K;
}

TEST(Generic, LeadingCoefficientAndParity) {
  for (int K = 3; K <= 8; ++K) {
    const auto e = divergence_expansion_generic(K);
    EXPECT_EQ(e.remainder_power(), 2 * K + 2);
    for (int k = 3; k <= K; ++k) EXPECT_EQ(e.total().coefficient({k, k}), Rational(1) / (2 * factorial(k)));
    int prev = 0;
    for (const auto& t : e.terms()) {
      EXPECT_EQ(t.sigma_power % 2, 0);
      EXPECT_GT(t.sigma_power, prev);
      EXPECT_LT(t.sigma_power, e.remainder_power());
      prev = t.sigma_power;
      for (const auto& [m, c] : t.monomials.terms()) {
        EXPECT_GE(m.front(), 3);
        EXPECT_EQ(weight(m), t.sigma_power);
      }
    }
  }
}

TEST(Generic, OrderSevenSquareTerm) {
  const auto e = divergence_expansion_generic(7);
  const auto* t = e.term(14);
  ASSERT_NE(t, nullptr);
  EXPECT_EQ(t->monomials.coefficient({7, 7}), R(1, 10080));
}

TEST(Generic, OrderEightSigmaFourteenTerms) {
  // alpha3 for mt8 mt3^2 is computed, not assumed; integral g He8 He3 He3 = 0 makes it vanish
  const auto e = divergence_expansion_generic(8);
  const auto* t = e.term(14);
  ASSERT_NE(t, nullptr);
  EXPECT_EQ(t->monomials.coefficient({3, 3, 8}), 0);
  EXPECT_EQ(t->monomials.coefficient({7, 7}), R(1, 10080));
  EXPECT_EQ(t->monomials.coefficient({3, 4, 7}), R(-1, 144));
  EXPECT_EQ(t->monomials.size(), 7u);
}

TEST(Generic, NumericOverloadMatchesClosed) {
  const CumulantVector<Rational> c{0, 1, R(1, 3), R(-2, 5), R(3, 7), R(1, 2)};
  const auto mm = modified_moments_from_cumulants(c);
  const auto a = divergence_expansion_generic(mm, 6);
  const auto b = divergence_expansion_closed(c, 6);
  EXPECT_EQ(a.terms, b.terms);
}

TEST(Generic, RangeChecked) {
  EXPECT_THROW(divergence_expansion_generic(2), std::invalid_argument);
  EXPECT_THROW(divergence_expansion_generic(kMaxOrder + 1), std::invalid_argument);
}

TEST(Entropy, GaussianAndKappaThree) {
  const double g = 0.5 * std::log(2 * std::numbers::pi * std::numbers::e * 100.0);
  EXPECT_DOUBLE_EQ(entropy_expansion(CumulantVector<double>{0, 100, 0, 0, 0, 0}, 10.0, 6), g);
  EXPECT_NEAR(entropy_expansion(CumulantVector<double>{0, 100, 1}, 10.0, 3), g - 1.0 / 12e6, 1e-15);
  EXPECT_THROW(entropy_expansion(CumulantVector<double>(6), -1.0, 6), std::domain_error);
  EXPECT_THROW(entropy_expansion(CumulantVector<double>(6), 1.0, 2), std::invalid_argument);
}

TEST(Cardoso, FirstTermsAgree) {
  const auto c = CumulantVector<double>{0, 1, 0.7};
  EXPECT_DOUBLE_EQ(comparison::cardoso_approximation(c, 3.0, 3), divergence_expansion_closed(c, 3)(3.0));
  EXPECT_EQ(comparison::cardoso_approximation(CumulantVector<double>(6), 3.0, 6), 0.0);
}

TEST(Cardoso, DifferenceIsCrossTerms) {
  const CumulantVector<double> c{0, 4, 1, 1, 0, 0};
  const double sigma = 2.0;
  const double diff = divergence_expansion_closed(c, 6)(sigma) - comparison::cardoso_approximation(c, sigma, 6);
  const double want = -1.0 / (8 * std::pow(sigma, 10)) + (7.0 / 48 - 1.0 / 48) / std::pow(sigma, 12);
  EXPECT_NEAR(diff, want, 1e-16);
}

TEST(Cardoso, SymbolicDifference) {
  const auto d = closed_divergence_form(6).total() - comparison::cardoso_form(6).total();
  EXPECT_EQ(d, mono({3, 3, 4}, R(-1, 8)) + mono({3, 3, 3, 3}, R(7, 48)) + mono({4, 4, 4}, R(-1, 48)) +
                   mono({3, 4, 5}, R(-1, 12)));
}

TEST(MiExpansion, NoLeakage) {
  ConditionalCumulantTable<Rational> t;
  const CumulantVector<Rational> c{1, 2, R(1, 2), R(-1, 3), R(1, 5), R(2, 7)};
  t.prior = {R(1, 3), R(2, 3)};
  t.per_x = {c, c};
  t.marginal = c;
  EXPECT_TRUE(mi_expansion_series(t, 6).terms.empty());
  EXPECT_TRUE(comparison::carlet_expansion_series(t, 6).terms.empty());
}

TEST(MiExpansion, TwoSymmetricSecrets) {
  const Rational a = R(3, 2);
  ConditionalCumulantTable<Rational> t;
  t.prior = {R(1, 2), R(1, 2)};
  t.per_x = {CumulantVector<Rational>{0, 1, a, 0, 0, 0}, CumulantVector<Rational>{0, 1, -a, 0, 0, 0}};
  t.marginal = CumulantVector<Rational>{0, 1, 0, 0, 0, 0};
  const auto s = mi_expansion_series(t, 6);
  EXPECT_EQ(s.coefficient(6), a * a / 12);
  EXPECT_EQ(s.coefficient(12), 7 * a * a * a * a / 48);
  EXPECT_EQ(s.terms.size(), 2u);
  EXPECT_EQ(comparison::carlet_expansion_series(t, 6).coefficient(6), s.coefficient(6));
}

TEST(MiExpansion, PriorValidated) {
  ConditionalCumulantTable<double> t;
  t.prior = {0.5, 0.6};
  t.per_x = {CumulantVector<double>(6), CumulantVector<double>(6)};
  t.marginal = CumulantVector<double>(6);
  EXPECT_THROW(mi_expansion(t, 3.0, 6), std::invalid_argument);
}

TEST(Carlet, DivergesFromCorrectedFormOnlyFromSigmaTen) {
  auto var = [](int x, int k) { return Polynomial::variable(100 * (x + 1) + k); };
  ConditionalCumulantTable<Polynomial> t;
  t.prior = {Polynomial(R(1, 2)), Polynomial(R(1, 2))};
  for (int x = 0; x < 2; ++x) {
    CumulantVector<Polynomial> c(6);
    for (int k = 3; k <= 6; ++k) c(k) = var(x, k);
    t.per_x.push_back(c);
  }
  t.marginal = CumulantVector<Polynomial>(6);
  for (int k = 3; k <= 6; ++k) t.marginal(k) = Polynomial(R(1, 2)) * (var(0, k) + var(1, k));
  const auto mi = mi_expansion_series(t, 6);
  const auto ca = comparison::carlet_expansion_series(t, 6);
  EXPECT_EQ(mi.coefficient(6), ca.coefficient(6));
  EXPECT_EQ(mi.coefficient(8), ca.coefficient(8));
  EXPECT_NE(mi.coefficient(10), ca.coefficient(10));
  EXPECT_NE(mi.coefficient(12), ca.coefficient(12));
}

TEST(Carlet, KappaSixMismatchShowsAtSigmaTwelve) {
  // balanced through kappa5 but the marginal kappa6 is not the average of the conditionals
  ConditionalCumulantTable<Rational> t;
  t.prior = {R(1, 2), R(1, 2)};
  t.per_x = {CumulantVector<Rational>{0, 1, 0, 0, 0, 1}, CumulantVector<Rational>{0, 1, 0, 0, 0, 3}};
  t.marginal = CumulantVector<Rational>{0, 1, 0, 0, 0, 5};
  EXPECT_EQ(mi_expansion_series(t, 6).coefficient(8), comparison::carlet_expansion_series(t, 6).coefficient(8));
  EXPECT_NE(mi_expansion_series(t, 6).coefficient(12), comparison::carlet_expansion_series(t, 6).coefficient(12));
}

TEST(Theorem1, Values) {
  EXPECT_DOUBLE_EQ(theorem1_asymptote(3, 0.25, 98, 2), 0.25 / (12 * 1e6));
  const double S = 37.5;
  EXPECT_DOUBLE_EQ(theorem1_asymptote(4, 6.75, S - 4, 4), 6.75 / (48 * std::pow(S, 4)));
  EXPECT_EQ(theorem1_asymptote(5, 0.0, 1, 1), 0.0);
  EXPECT_THROW(theorem1_asymptote(2, 1, 1, 1), std::invalid_argument);
  EXPECT_THROW(theorem1_asymptote(7, 1, 1, 1), std::invalid_argument);
  EXPECT_THROW(theorem1_asymptote(3, -1, 1, 1), std::invalid_argument);
  EXPECT_THROW(theorem1_asymptote(3, 1, 0, 0), std::invalid_argument);
}

TEST(Comon, FourLeadingTermsMatch) {
  const auto r = comon_consistency_check();
  EXPECT_TRUE(r.consistent);
  EXPECT_TRUE(r.discrepancies.empty());
  ASSERT_EQ(r.leading.size(), 4u);
  ASSERT_EQ(r.higher.size(), 4u);
  for (const auto& t : r.higher) EXPECT_LE(t.n_power, -3);
  int at_n3 = 0;
  for (const auto& t : r.higher) at_n3 += t.n_power == -3;
  EXPECT_EQ(at_n3, 3);  // k5^2, k4^3, k3 k4 k5; k6^2 sits at n^-4
}

TEST(Comon, NumericVariant) {
  EXPECT_TRUE(comon_consistency_check(CumulantVector<Rational>{0, 1, R(2, 3), R(-1, 5), R(4), R(1, 7)}));
  EXPECT_TRUE(comon_consistency_check(CumulantVector<Rational>(6)));
}

TEST(Decay, MonotoneInSigma) {
  const auto s = divergence_expansion_closed(CumulantVector<double>{0, 1, 2.5, -4.0, 3.0, -5.0}, 6);
  double prev = s(5.0);
  for (double sigma = 5.01; sigma <= 1000; sigma *= 1.01) {
    EXPECT_LE(s(sigma), prev);
    prev = s(sigma);
  }
}
