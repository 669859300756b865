#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "cumex/expansion.hpp"
#include "cumex/numeric_info.hpp"

using namespace cumex;

namespace {

SensitiveDistribution<Rational> scheme(const char* field, std::uint32_t C) {
  return build_distribution(MaskingScheme(gf2m::FieldSpec::by_name(field), C));
}

// Oracle values from tests/oracles/mi_oracle.py (mpmath, 40 digits).
struct OracleMi {
  const char* field;
  std::uint32_t C;
  double sigma_N2, mi;
};
const OracleMi kOracle[] = {
    {"f16", 1, 10, 0.0017671971956697314},   {"f16", 1, 100, 2.4035650561869088e-5},
    {"f16", 4, 10, 0.00096018694223478433},  {"f16", 4, 100, 1.2148718614603856e-5},
    {"f16", 8, 10, 0.0005491431250977486},   {"f16", 8, 100, 6.1847129018803485e-6},
    {"f16", 3, 10, 0.00012054550768343162},  {"f16", 3, 100, 1.7884412223008414e-7},
    {"f256", 1, 10, 0.0026200266703169768},  {"f256", 1, 100, 4.6251281509672359e-5},
};

}  // namespace

TEST(Mixture, Validation) {
  EXPECT_THROW(GaussianMixture(std::vector<GaussianComponent>{}), std::invalid_argument);
  EXPECT_THROW(GaussianMixture({{1.0, 0.0, 0.0}}), std::invalid_argument);
  EXPECT_THROW(GaussianMixture({{0.5, 0.0, 1.0}, {0.6, 0.0, 1.0}}), std::invalid_argument);
  EXPECT_THROW(GaussianMixture({{1.5, 0.0, 1.0}, {-0.5, 0.0, 1.0}}), std::invalid_argument);
  EXPECT_EQ(GaussianMixture({{1.0, 0.0, 1.0}, {0.0, 5.0, 1.0}}).components().size(), 1u);
}

TEST(Mixture, MomentsAndDensity) {
  const GaussianMixture m({{0.25, -1.0, 0.5}, {0.75, 3.0, 2.0}});
  EXPECT_DOUBLE_EQ(m.mean(), 2.0);
  EXPECT_DOUBLE_EQ(m.variance(), 0.25 * (0.25 + 9.0) + 0.75 * (4.0 + 1.0));
  const double y = 0.7;
  const double direct = 0.25 * std::exp(-0.5 * std::pow((y + 1) / 0.5, 2)) / (0.5 * std::sqrt(2 * std::numbers::pi)) +
                        0.75 * std::exp(-0.5 * std::pow((y - 3) / 2.0, 2)) / (2.0 * std::sqrt(2 * std::numbers::pi));
  EXPECT_NEAR(m.density(y), direct, 1e-16);
  // far tail stays finite in log space
  EXPECT_TRUE(std::isfinite(m.log_density(1e3)));
  const auto [lo, hi] = m.range(14);
  EXPECT_DOUBLE_EQ(lo, -25.0);
  EXPECT_DOUBLE_EQ(hi, 31.0);
}

TEST(Phi, SeriesMatchesClosedFormAtSwitch) {
  for (double d : {-0.0999999, 0.0999999, 0.05, -0.03}) {
    const double closed = d * std::exp(d) - std::expm1(d);
    EXPECT_NEAR(phi_of_log_ratio(d), closed, 1e-16);
  }
  EXPECT_EQ(phi_of_log_ratio(0.0), 0.0);
  EXPECT_GT(phi_of_log_ratio(1e-9), 0.0);
  EXPECT_GT(phi_of_log_ratio(-5.0), 0.0);
}

TEST(Divergence, GaussianPairClosedForm) {
  const GaussianMixture q({{1.0, 0.5, 1.3}});
  const double a = 0.5, s1 = 1.3, b = -0.2, var = 2.1;
  const double want = 0.5 * std::log(var / (s1 * s1)) + (s1 * s1 + (a - b) * (a - b)) / (2 * var) - 0.5;
  EXPECT_NEAR(kl_to_gaussian(q, b, var), want, 1e-14);
  EXPECT_NEAR(kl_to_gaussian(q), 0.0, 1e-15);
  EXPECT_THROW(kl_to_gaussian(q, 0.0, 0.0), std::invalid_argument);
}

TEST(Entropy, SingleGaussian) {
  const GaussianMixture g({{1.0, 4.0, 3.0}});
  EXPECT_NEAR(differential_entropy(g), gaussian_entropy(9.0), 1e-13);
}

TEST(Entropy, KlIdentity) {
  const auto d = scheme("f16", 3);
  for (double sN : {0.7, 2.0, 6.0}) {
    const auto m = mixture_from_leakage(d, sN);
    EXPECT_NEAR(differential_entropy(m) + kl_to_gaussian(m), gaussian_entropy(m.variance()), 1e-12);
  }
}

TEST(MutualInformation, AgreesWithOracle) {
  for (const auto& o : kOracle) {
    const double v = mutual_information_exact(scheme(o.field, o.C), std::sqrt(o.sigma_N2));
    EXPECT_NEAR(v, o.mi, 1e-8 * o.mi) << o.field << " C=" << o.C << " sigma_N2=" << o.sigma_N2;
  }
}

TEST(MutualInformation, NonnegativeAndDecreasing) {
  const auto d = scheme("f16", 3);
  double prev = std::numeric_limits<double>::infinity();
  for (double sN : {0.05, 0.3, 1.0, 3.0, 10.0, 30.0}) {
    const auto r = mutual_information_detailed(d, sN);
    EXPECT_TRUE(r.converged);
    EXPECT_GE(r.value, 0.0);
    EXPECT_LT(r.value, prev);
    prev = r.value;
  }
}

TEST(MutualInformation, BoundedByPriorEntropy) {
  const auto d = scheme("f16", 1);
  EXPECT_LE(mutual_information_exact(d, 0.01), std::log(16.0) + 1e-12);
}

TEST(MutualInformation, NoiselessLimitOfUnmaskedBit) {
  SensitiveDistribution<Rational> d;
  d.support = {0, 1};
  d.cond_pmf = {{1, 0}, {0, 1}};
  d.prior = uniform_prior<Rational>(2);
  EXPECT_NEAR(mutual_information_exact(d, 0.02), std::log(2.0), 1e-10);
  // identical rows leak nothing
  d.cond_pmf = {{make_rational(1, 2), make_rational(1, 2)}, {make_rational(1, 2), make_rational(1, 2)}};
  EXPECT_EQ(mutual_information_exact(d, 1.0), 0.0);
}

TEST(MutualInformation, SigmaValidated) {
  EXPECT_THROW(mutual_information_exact(scheme("f16", 3), 0.0), std::invalid_argument);
  EXPECT_THROW(mixture_from_leakage(scheme("f16", 3), 1.0, 16), std::out_of_range);
}

TEST(MutualInformation, ThrowsWhenBudgetExhausted) {
  QuadratureConfig cfg;
  cfg.max_subdivisions = 1;
  cfg.rel_tol = 1e-14;
  cfg.abs_tol = 1e-300;
  EXPECT_THROW(mutual_information_exact(scheme("f16", 3), 0.3, cfg), QuadratureError);
}

TEST(DivergenceDifference, EqualsMutualInformation) {
  for (std::uint32_t C : {3u}) {
    const auto d = scheme("f16", C);
    for (double sN : {1.0, 3.0, 10.0}) {
      const double a = mutual_information_exact(d, sN);
      const double b = mi_via_divergence_difference(d, sN);
      EXPECT_NEAR(a, b, 1e-9 * a + 1e-18) << sN;
    }
  }
  EXPECT_NEAR(mi_via_divergence_difference(scheme("f256", 29), 5.0), mutual_information_exact(scheme("f256", 29), 5.0),
              1e-16);
}

TEST(DivergenceDifference, RequiresBalancedSecondMoment) {
  EXPECT_THROW(mi_via_divergence_difference(scheme("f16", 1), 3.0), PreconditionError);
}

TEST(DivergenceDifference, MarginalAgainstOracleAndClosedForm) {
  const auto d = scheme("f16", 3);
  const auto t = to_double(conditional_cumulant_table(d, 6));
  const struct {
    double sN, D;
  } ref[] = {{5, 3.9260208810294556e-8}, {10, 1.9248852954713508e-10}};
  for (const auto& r : ref) {
    const auto m = mixture_from_leakage(d, r.sN);
    const double D = kl_to_gaussian(m);
    EXPECT_NEAR(D, r.D, 1e-9 * r.D);
    const double closed = divergence_expansion_closed(t.marginal, 6)(std::sqrt(m.variance()));
    EXPECT_NEAR(closed, D, (r.sN < 10 ? 0.02 : 0.005) * D);
  }
}
