#pragma once

// Earlier small-cumulant approximations, kept for side-by-side output only.
// Both agree with the corrected expansions through sigma^-8 and drop the
// cross terms from sigma^-10 on. Nothing outside this namespace uses them.

#include <stdexcept>

#include "cumex/expansion.hpp"

namespace cumex::comparison {

/// sum_{k=3}^K kappa_k^2 / (2 k! sigma^{2k}).
inline ExpansionResult cardoso_form(int K) {
  if (K < 3 || K > kMaxOrder) throw std::invalid_argument("order K out of range");
  Polynomial p;
  for (int k = 3; k <= K; ++k) p += Polynomial::monomial({k, k}, Rational(1 / (2 * factorial(k))));
  return ExpansionResult(Basis::cumulant, K, p, 2 * K + 2);
}

template <class T>
double cardoso_approximation(const CumulantVector<T>& c, double sigma, int K) {
  if (!(sigma > 0)) throw std::domain_error("sigma must be positive");
  if (c.order() < K) throw std::invalid_argument("cumulants must be given through order K");
  return cardoso_form(K).evaluate(c)(sigma);
}

/// sum_{k=3}^K E(kappa_k(Z|X) - kappa_k(Z))^2 / (2 k! sigma^{2k}).
template <class T>
SigmaSeries<T> carlet_expansion_series(const ConditionalCumulantTable<T>& t, int K) {
  if (K < 3 || K > 6) throw std::invalid_argument("order K must be in 3..6");
  t.validate();
  if (t.order() < K) throw std::invalid_argument("cumulants must be given through order K");
  SigmaSeries<T> out;
  out.remainder_power = 2 * K + 2;
  for (int k = 3; k <= K; ++k) {
    T acc = T(0);
    for (std::size_t x = 0; x < t.per_x.size(); ++x) {
      const T d = t.per_x[x](k) - t.marginal(k);
      acc = acc + t.prior[x] * d * d;
    }
    acc = acc * scalar_cast<T>(Rational(1 / (2 * factorial(k))));
    if (acc != T(0)) out.terms.emplace_back(2 * k, acc);
  }
  return out;
}

template <class T>
double carlet_expansion(const ConditionalCumulantTable<T>& t, double sigma, int K) {
  return carlet_expansion_series(t, K)(sigma);
}

/// Mutual information predicted by plugging cardoso_form into E_x D(Y|x) - D(Y).
template <class T>
SigmaSeries<T> cardoso_mi_series(const ConditionalCumulantTable<T>& t, int K) {
  return detail::expected_minus_marginal(cardoso_form(K), t);
}

}  // namespace cumex::comparison
