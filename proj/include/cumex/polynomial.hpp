#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <vector>

#include "cumex/rational.hpp"

namespace cumex {

/// Multiset of variable indices, kept sorted ascending. {3,3,4} is x3^2 x4.
using Monomial = std::vector<int>;

inline int weight(const Monomial& m) { return std::accumulate(m.begin(), m.end(), 0); }

inline Monomial multiply(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

/// Multivariate polynomial with exact rational coefficients over variables
/// x_k indexed by order k. Serves as the symbolic ring for cumulants and
/// modified moments; the weight of a monomial (sum of its indices) is the
/// power of 1/sigma it carries in every expansion.
class Polynomial {
 public:
  using TermMap = std::map<Monomial, Rational>;

  Polynomial() = default;
  Polynomial(const Rational& c) {  // NOLINT(google-explicit-constructor)
    if (c != 0) terms_.emplace(Monomial{}, c);
  }
  Polynomial(int c) : Polynomial(Rational(c)) {}  // NOLINT
  Polynomial(std::int64_t c) : Polynomial(Rational(c)) {}  // NOLINT

  static Polynomial variable(int index) {
    Polynomial p;
    p.terms_.emplace(Monomial{index}, Rational(1));
    return p;
  }

  static Polynomial monomial(Monomial m, const Rational& coeff) {
    std::sort(m.begin(), m.end());
    Polynomial p;
    if (coeff != 0) p.terms_.emplace(std::move(m), coeff);
    return p;
  }

  const TermMap& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }

  Rational coefficient(Monomial m) const {
    std::sort(m.begin(), m.end());
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  void add_term(const Monomial& m, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Polynomial& operator+=(const Polynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  Polynomial& operator*=(const Polynomial& o) {
    *this = *this * o;
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator-(const Polynomial& a) {
    Polynomial out;
    for (const auto& [m, c] : a.terms_) out.terms_.emplace(m, -c);
    return out;
  }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial out;
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) out.add_term(multiply(ma, mb), ca * cb);
    return out;
  }
  friend bool operator==(const Polynomial&, const Polynomial&) = default;

  /// Terms whose monomial weight equals `w`.
  Polynomial homogeneous_part(int w) const {
    Polynomial out;
    for (const auto& [m, c] : terms_)
      if (weight(m) == w) out.terms_.emplace(m, c);
    return out;
  }

  /// Distinct monomial weights present, ascending.
  std::vector<int> weights() const {
    std::vector<int> w;
    for (const auto& [m, c] : terms_) w.push_back(weight(m));
    std::sort(w.begin(), w.end());
    w.erase(std::unique(w.begin(), w.end()), w.end());
    return w;
  }

  /// Replace every variable x_k by `value(k)` in the ring T.
  template <class T, class F>
  T evaluate(F&& value) const {
    T total = T(0);
    for (const auto& [m, c] : terms_) {
      T term = scalar_cast<T>(c);
      for (int k : m) term = term * value(k);
      total = total + term;
    }
    return total;
  }

  Polynomial substitute(const std::function<Polynomial(int)>& value) const {
    return evaluate<Polynomial>(value);
  }

 private:
  TermMap terms_;
};

}  // namespace cumex
