#pragma once

// Divergence, entropy and mutual-information expansions in powers of 1/sigma.
//
// A symbolic expansion is a Polynomial over cumulants (or modified moments)
// in which every monomial of weight w multiplies sigma^{-w}. The closed
// forms are written out term by term; the generic engine derives them from
// the Gram-Charlier series by expanding (1+h)log(1+h) and integrating the
// Hermite products exactly.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "cumex/compensated.hpp"
#include "cumex/cumulant_algebra.hpp"
#include "cumex/hermite.hpp"
#include "cumex/polynomial.hpp"
#include "cumex/rational.hpp"
#include "cumex/sequences.hpp"

namespace cumex {

enum class Basis { cumulant, modified_moment };

inline char variable_prefix(Basis b) { return b == Basis::cumulant ? 'k' : 'm'; }

/// All monomials multiplying sigma^{-sigma_power}.
struct ExpansionTerm {
  int sigma_power = 0;
  Polynomial monomials;
  friend bool operator==(const ExpansionTerm&, const ExpansionTerm&) = default;
};

/// Formats one monomial line, e.g. "(-1/8) * k3^2 * k4 / s^10".
inline std::string format_monomial(const Monomial& m, const Rational& coeff, int sigma_power,
                                   char prefix) {
  std::ostringstream os;
  os << '(' << to_string(coeff) << ')';
  for (std::size_t i = 0; i < m.size();) {
    std::size_t j = i;
    while (j < m.size() && m[j] == m[i]) ++j;
    os << " * " << prefix << m[i];
    if (j - i > 1) os << '^' << (j - i);
    i = j;
  }
  os << " / s^" << sigma_power;
  return os.str();
}

/// Numeric coefficients of an expansion: value = sum_j coeff_j * sigma^{-power_j}.
template <class T>
struct SigmaSeries {
  std::vector<std::pair<int, T>> terms;  // ascending powers, no zero coefficients
  int remainder_power = 0;

  T coefficient(int power) const {
    for (const auto& [p, c] : terms)
      if (p == power) return c;
    return T(0);
  }

  /// Compensated Horner in u = 1/sigma^2.
  double operator()(double sigma) const {
    if (!(sigma > 0)) throw std::domain_error("sigma must be positive");
    if (terms.empty()) return 0.0;
    const int top = terms.back().first / 2;
    std::vector<double> coeffs(static_cast<std::size_t>(top) + 1, 0.0);
    for (const auto& [p, c] : terms) coeffs[static_cast<std::size_t>(p / 2)] += to_double(c);
    return compensated_horner(coeffs, 1.0 / (sigma * sigma));
  }
};

class ExpansionResult {
 public:
  ExpansionResult(Basis basis, int order_K, const Polynomial& total, int remainder_power)
      : basis_(basis), order_(order_K), remainder_power_(remainder_power) {
    for (int w : total.weights()) {
      if (w >= remainder_power) continue;
      terms_.push_back({w, total.homogeneous_part(w)});
    }
  }

  Basis basis() const noexcept { return basis_; }
  int order() const noexcept { return order_; }
  int remainder_power() const noexcept { return remainder_power_; }
  const std::vector<ExpansionTerm>& terms() const noexcept { return terms_; }

  Polynomial total() const {
    Polynomial p;
    for (const auto& t : terms_) p += t.monomials;
    return p;
  }

  const ExpansionTerm* term(int sigma_power) const {
    for (const auto& t : terms_)
      if (t.sigma_power == sigma_power) return &t;
    return nullptr;
  }

  std::size_t monomial_count() const {
    std::size_t n = 0;
    for (const auto& t : terms_) n += t.monomials.size();
    return n;
  }

  /// One canonical line per monomial, ascending in sigma power.
  std::vector<std::string> lines() const {
    std::vector<std::string> out;
    for (const auto& t : terms_)
      for (const auto& [m, c] : t.monomials.terms())
        out.push_back(format_monomial(m, c, t.sigma_power, variable_prefix(basis_)));
    return out;
  }

  std::string to_string() const {
    std::string s;
    for (const auto& l : lines()) s += l + '\n';
    return s;
  }

  /// Substitute concrete values v_k for the basis variables.
  template <class T, class Tag>
  SigmaSeries<T> evaluate(const OrderedSequence<T, Tag>& values) const {
    SigmaSeries<T> out;
    out.remainder_power = remainder_power_;
    for (const auto& t : terms_) {
      T c = t.monomials.evaluate<T>([&](int k) { return values(k); });
      if (c != T(0)) out.terms.emplace_back(t.sigma_power, c);
    }
    return out;
  }

 private:
  Basis basis_;
  int order_;
  int remainder_power_;
  std::vector<ExpansionTerm> terms_;
};

namespace detail {
inline void check_closed_order(int K) {
  if (K < 3 || K > 6) throw std::invalid_argument("closed-form expansion order K must be in 3..6");
}
}  // namespace detail

/// Coefficient a_n of h^n in (1+h)log(1+h) = h + h^2/2 - h^3/6 + h^4/12 - ...
inline Rational xlogx_series_coefficient(int n) {
  if (n < 1) throw std::invalid_argument("series index must be >= 1");
  if (n == 1) return 1;
  Rational c = Rational(1) / Rational(n * (n - 1));
  return n % 2 == 0 ? c : Rational(-c);
}

/// D(f||g) in the cumulant basis, written out through sigma^{-12}, truncated to sigma^{-2K}.
inline ExpansionResult closed_divergence_form(int K) {
  detail::check_closed_order(K);
  Polynomial p;
  p += Polynomial::monomial({3, 3}, make_rational(1, 12));
  p += Polynomial::monomial({4, 4}, make_rational(1, 48));
  p += Polynomial::monomial({3, 3, 4}, make_rational(-1, 8));
  p += Polynomial::monomial({5, 5}, make_rational(1, 240));
  p += Polynomial::monomial({3, 3, 3, 3}, make_rational(7, 48));
  p += Polynomial::monomial({4, 4, 4}, make_rational(-1, 48));
  p += Polynomial::monomial({3, 4, 5}, make_rational(-1, 12));
  p += Polynomial::monomial({6, 6}, make_rational(1, 1440));
  return ExpansionResult(Basis::cumulant, K, p, 2 * K + 2);
}

/// Closed-form divergence expansion for concrete cumulants.
template <class T>
SigmaSeries<T> divergence_expansion_closed(const CumulantVector<T>& c, int K) {
  detail::check_closed_order(K);
  if (c.order() < K) throw std::invalid_argument("cumulants must be given through order K");
  return closed_divergence_form(K).evaluate(c);
}

/// Generic engine: D(f||g) = sum_n a_n integral g h^n with
/// h = sum_{k=3}^K mt_k He_k / (k! sigma^k), truncated at sigma^{-2K}.
/// Result is in the modified-moment basis.
inline ExpansionResult divergence_expansion_generic(int K) {
  if (K < 3 || K > kMaxOrder) throw std::invalid_argument("generic expansion order K out of range");
  const int max_weight = 2 * K;
  Polynomial total;

  // Only h^n with 3n <= 2K reach sigma^{-2K}; n = 1 integrates to zero.
  std::vector<int> idx;
  auto visit = [&](auto&& self, int n, int min_k, int weight_so_far) -> void {
    if (static_cast<int>(idx.size()) == n) {
      if (weight_so_far % 2 != 0) return;
      // multinomial count of orderings of this multiset
      Rational count = factorial(n);
      Rational inv_fact = 1;
      for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j < idx.size() && idx[j] == idx[i]) ++j;
        count /= factorial(static_cast<int>(j - i));
        i = j;
      }
      for (int k : idx) inv_fact /= factorial(k);
      const Rational integral = gaussian_product_integral(std::span<const int>(idx));
      if (integral == 0) return;
      total.add_term(idx, xlogx_series_coefficient(n) * count * inv_fact * integral);
      return;
    }
    const int slots_left = n - static_cast<int>(idx.size());
    for (int k = min_k; k <= K; ++k) {
      if (weight_so_far + k * slots_left > max_weight) break;
      idx.push_back(k);
      self(self, n, k, weight_so_far + k);
      idx.pop_back();
    }
  };
  for (int n = 2; 3 * n <= max_weight; ++n) visit(visit, n, 3, 0);

  return ExpansionResult(Basis::modified_moment, K, total, max_weight + 2);
}

/// Symbolic mt_k as polynomials in kappa_3..kappa_n.
inline ModifiedMomentVector<Polynomial> symbolic_modified_moments(int n) {
  CumulantVector<Polynomial> kappa(n);
  for (int k = 3; k <= n; ++k) kappa(k) = Polynomial::variable(k);
  return modified_moments_from_cumulants(kappa);
}

/// Rewrite a modified-moment expansion in the cumulant basis.
inline ExpansionResult to_cumulant_basis(const ExpansionResult& e) {
  if (e.basis() == Basis::cumulant) return e;
  const int n = std::max(3, e.order());
  const auto mt = symbolic_modified_moments(n);
  Polynomial out = e.total().substitute([&](int k) { return mt(k); });
  return ExpansionResult(Basis::cumulant, e.order(), out, e.remainder_power());
}

template <class T>
SigmaSeries<T> divergence_expansion_generic(const ModifiedMomentVector<T>& mm, int K) {
  if (mm.order() < K) throw std::invalid_argument("modified moments must be given through order K");
  return divergence_expansion_generic(K).evaluate(mm);
}

/// h(Y) = 1/2 log(2 pi e sigma^2) - D(f||g).
template <class T>
double entropy_expansion(const CumulantVector<T>& c, double sigma, int K) {
  detail::check_closed_order(K);
  if (!(sigma > 0)) throw std::domain_error("sigma must be positive");
  const double gaussian = 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e * sigma * sigma);
  return gaussian - divergence_expansion_closed(c, K)(sigma);
}

/// Prior over secrets, per-secret cumulants of Z|X=x and marginal cumulants of Z.
template <class T>
struct ConditionalCumulantTable {
  std::vector<T> prior;
  std::vector<CumulantVector<T>> per_x;
  CumulantVector<T> marginal;

  int order() const { return marginal.order(); }

  void validate() const {
    if (prior.size() != per_x.size() || prior.empty())
      throw std::invalid_argument("prior and conditional tables differ in size");
    T sum = T(0);
    for (const T& p : prior) sum = sum + p;
    if constexpr (std::is_same_v<T, double>) {
      if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("prior does not sum to 1");
    } else {
      if (sum != T(1)) throw std::invalid_argument("prior does not sum to 1");
    }
    for (const auto& c : per_x)
      if (c.order() != marginal.order())
        throw std::invalid_argument("conditional and marginal orders differ");
  }
};

namespace detail {
// E_x[M(kappa|x)] - M(kappa) for each monomial M of a symbolic expansion.
template <class T>
SigmaSeries<T> expected_minus_marginal(const ExpansionResult& form,
                                       const ConditionalCumulantTable<T>& t) {
  t.validate();
  if (t.order() < form.order()) throw std::invalid_argument("cumulants must be given through order K");
  SigmaSeries<T> out;
  out.remainder_power = form.remainder_power();
  for (const auto& term : form.terms()) {
    T coeff = T(0);
    for (const auto& [m, c] : term.monomials.terms()) {
      auto monomial_value = [&](const CumulantVector<T>& kv) {
        T v = T(1);
        for (int k : m) v = v * kv(k);
        return v;
      };
      T expected = T(0);
      for (std::size_t x = 0; x < t.per_x.size(); ++x)
        expected = expected + t.prior[x] * monomial_value(t.per_x[x]);
      coeff = coeff + scalar_cast<T>(c) * (expected - monomial_value(t.marginal));
    }
    if (coeff != T(0)) out.terms.emplace_back(term.sigma_power, coeff);
  }
  return out;
}
}  // namespace detail

/// I(X;Y) = E_x D(Y|x || Y*) - D(Y || Y*) expanded term by term with the closed form.
template <class T>
SigmaSeries<T> mi_expansion_series(const ConditionalCumulantTable<T>& t, int K) {
  return detail::expected_minus_marginal(closed_divergence_form(K), t);
}

/// sigma^2 = sigma_N^2 + sigma_Z^2 is supplied by the caller.
template <class T>
double mi_expansion(const ConditionalCumulantTable<T>& t, double sigma, int K) {
  return mi_expansion_series(t, K)(sigma);
}

/// Leading-order mutual information  V_K / (2 K! (sigma_N^2 + sigma_Z^2)^K),  3 <= K <= 6.
inline double theorem1_asymptote(int K, double V_K, double sigma_N2, double sigma_Z2) {
  if (K < 3 || K > 6) throw std::invalid_argument("asymptotic equivalent is established only for 3 <= K <= 6");
  if (V_K < 0) throw std::invalid_argument("inter-class variance must be nonnegative");
  if (sigma_N2 < 0 || sigma_Z2 < 0 || sigma_N2 + sigma_Z2 <= 0)
    throw std::invalid_argument("variances must be nonnegative and not both zero");
  return V_K / (2.0 * to_double(factorial(K)) * std::pow(sigma_N2 + sigma_Z2, K));
}

// ---------------------------------------------------------------------------
// Edgeworth rescaling check: sigma -> sqrt(n) sigma, kappa_k -> n kappa_k.

/// A closed-form monomial after rescaling: coeff * factors / (n^{-n_power} sigma^{sigma_power}).
struct ScaledTerm {
  int n_power = 0;  // exponent of n (negative)
  int sigma_power = 0;
  Monomial factors;
  Rational coeff;
  friend bool operator==(const ScaledTerm&, const ScaledTerm&) = default;
};

struct ComonReport {
  std::vector<ScaledTerm> leading;  // n^-1 and n^-2
  std::vector<ScaledTerm> higher;   // n^-3 and beyond
  bool consistent = false;
  std::vector<std::string> discrepancies;
};

/// The classical negentropy expansion for normalized sums through n^-2.
inline std::vector<ScaledTerm> negentropy_reference_terms() {
  return {
      {-1, 6, {3, 3}, make_rational(1, 12)},
      {-2, 8, {4, 4}, make_rational(1, 48)},
      {-2, 10, {3, 3, 4}, make_rational(-1, 8)},
      {-2, 12, {3, 3, 3, 3}, make_rational(7, 48)},
  };
}

inline std::vector<ScaledTerm> rescale_closed_form() {
  std::vector<ScaledTerm> out;
  const auto form = closed_divergence_form(6);
  for (const auto& t : form.terms())
    for (const auto& [m, c] : t.monomials.terms()) {
      // n^{deg} from the cumulants, n^{-p/2} from sigma^{-p}
      const int n_power = static_cast<int>(m.size()) - t.sigma_power / 2;
      out.push_back({n_power, t.sigma_power, m, c});
    }
  return out;
}

/// Mechanical substitution into the K = 6 closed form, compared against the
/// reference terms. Discrepancies are reported, never patched.
inline ComonReport comon_consistency_check() {
  ComonReport r;
  for (auto& t : rescale_closed_form()) (t.n_power >= -2 ? r.leading : r.higher).push_back(t);

  const auto ref = negentropy_reference_terms();
  auto same = [](const ScaledTerm& a, const ScaledTerm& b) { return a == b; };
  for (const auto& t : r.leading)
    if (std::none_of(ref.begin(), ref.end(), [&](const ScaledTerm& x) { return same(t, x); }))
      r.discrepancies.push_back(format_monomial(t.factors, t.coeff, t.sigma_power, 'k') + " at n^" +
                                std::to_string(t.n_power) + " not in reference");
  for (const auto& x : ref)
    if (std::none_of(r.leading.begin(), r.leading.end(), [&](const ScaledTerm& t) { return same(t, x); }))
      r.discrepancies.push_back(format_monomial(x.factors, x.coeff, x.sigma_power, 'k') + " at n^" +
                                std::to_string(x.n_power) + " missing from rescaled form");
  for (const auto& t : r.higher)
    if (t.n_power > -3)
      r.discrepancies.push_back("term expected at O(n^-3) found at n^" + std::to_string(t.n_power));
  r.consistent = r.discrepancies.empty();
  return r;
}

/// Numeric form: for concrete cumulants, the n^-1 and n^-2 parts of the
/// rescaled closed form equal the reference expansion exactly.
inline bool comon_consistency_check(const CumulantVector<Rational>& c) {
  if (c.order() < 6) throw std::invalid_argument("cumulants through order 6 required");
  auto eval = [&](const std::vector<ScaledTerm>& terms, int n_power, int sigma_power) {
    Rational v = 0;
    for (const auto& t : terms) {
      if (t.n_power != n_power || t.sigma_power != sigma_power) continue;
      Rational m = t.coeff;
      for (int k : t.factors) m *= c(k);
      v += m;
    }
    return v;
  };
  const auto scaled = rescale_closed_form();
  const auto ref = negentropy_reference_terms();
  for (int n_power : {-1, -2})
    for (int sp = 6; sp <= 12; sp += 2)
      if (eval(scaled, n_power, sp) != eval(ref, n_power, sp)) return false;
  return true;
}

}  // namespace cumex
