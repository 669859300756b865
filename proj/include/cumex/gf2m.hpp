#pragma once

// Binary extension fields GF(2^4) and GF(2^8) in polynomial basis.

#include <array>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cumex::gf2m {

/// Carry-less product of two polynomials over GF(2), no reduction.
inline std::uint32_t clmul(std::uint32_t a, std::uint32_t b) {
  std::uint32_t r = 0;
  while (b) {
    if (b & 1u) r ^= a;
    a <<= 1;
    b >>= 1;
  }
  return r;
}

inline int poly_degree(std::uint32_t p) { return p ? 31 - std::countl_zero(p) : -1; }

/// Remainder of a modulo m over GF(2).
inline std::uint32_t poly_mod(std::uint32_t a, std::uint32_t m) {
  const int dm = poly_degree(m);
  for (int d = poly_degree(a); d >= dm; d = poly_degree(a)) a ^= m << (d - dm);
  return a;
}

/// Irreducible iff no polynomial of degree 1..deg/2 divides it.
inline bool is_irreducible(std::uint32_t p) {
  const int n = poly_degree(p);
  if (n < 1) return false;
  for (std::uint32_t d = 2; poly_degree(d) <= n / 2; ++d)
    if (poly_mod(p, d) == 0) return false;
  return true;
}

class FieldSpec {
 public:
  FieldSpec(int degree, std::uint32_t reduction_poly) : degree_(degree), poly_(reduction_poly) {
    if (degree != 4 && degree != 8) throw std::invalid_argument("field degree must be 4 or 8");
    if (poly_degree(reduction_poly) != degree)
      throw std::invalid_argument("reduction polynomial degree does not match field degree");
    if (!is_irreducible(reduction_poly))
      throw std::invalid_argument("reduction polynomial is reducible over GF(2)");
  }

  /// x^4 + x + 1
  static FieldSpec f16() { return {4, 0x13}; }
  /// x^8 + x^4 + x^3 + x^2 + 1
  static FieldSpec f256() { return {8, 0x11D}; }
  /// x^8 + x^4 + x^3 + x + 1, for sensitivity runs only
  static FieldSpec aes() { return {8, 0x11B}; }

  /// "f16" or "f256", optionally with a reduction polynomial override.
  static FieldSpec by_name(const std::string& name, std::uint32_t poly = 0) {
    if (name == "f16") return {4, poly ? poly : 0x13u};
    if (name == "f256") return {8, poly ? poly : 0x11Du};
    throw std::invalid_argument("unknown field '" + name + "' (expected f16 or f256)");
  }

  int degree() const noexcept { return degree_; }
  std::uint32_t reduction_poly() const noexcept { return poly_; }
  std::uint32_t order() const noexcept { return 1u << degree_; }
  std::string name() const { return degree_ == 4 ? "f16" : "f256"; }

  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;

 private:
  int degree_;
  std::uint32_t poly_;
};

class FieldElement {
 public:
  FieldElement(const FieldSpec& field, std::uint32_t value) : field_(field), value_(value) {
    if (value >= field.order())
      throw std::out_of_range("value " + std::to_string(value) + " outside field of order " +
                              std::to_string(field.order()));
  }

  std::uint32_t value() const noexcept { return value_; }
  const FieldSpec& field() const noexcept { return field_; }

  friend bool operator==(const FieldElement&, const FieldElement&) = default;

 private:
  FieldSpec field_;
  std::uint32_t value_;
};

namespace detail {
inline void same_field(const FieldElement& a, const FieldElement& b) {
  if (!(a.field() == b.field())) throw std::invalid_argument("field mismatch");
}
}  // namespace detail

/// Shift-and-reduce product on raw values; the reference path.
inline std::uint32_t mul_raw(const FieldSpec& f, std::uint32_t a, std::uint32_t b) {
  const std::uint32_t top = f.order();
  std::uint32_t r = 0;
  while (b) {
    if (b & 1u) r ^= a;
    b >>= 1;
    a <<= 1;
    if (a & top) a ^= f.reduction_poly();
  }
  return r;
}

inline FieldElement add(const FieldElement& a, const FieldElement& b) {
  detail::same_field(a, b);
  return {a.field(), a.value() ^ b.value()};
}

inline FieldElement mul(const FieldElement& a, const FieldElement& b) {
  detail::same_field(a, b);
  return {a.field(), mul_raw(a.field(), a.value(), b.value())};
}

inline int hamming_weight(std::uint32_t v) { return std::popcount(v); }
inline int hamming_weight(const FieldElement& a) { return std::popcount(a.value()); }

inline std::uint32_t pow_raw(const FieldSpec& f, std::uint32_t a, std::uint32_t e) {
  std::uint32_t r = 1;
  while (e) {
    if (e & 1u) r = mul_raw(f, r, a);
    a = mul_raw(f, a, a);
    e >>= 1;
  }
  return r;
}

/// Exp/log tables over a generator of the multiplicative group.
class LogTables {
 public:
  explicit LogTables(const FieldSpec& f) : field_(f), exp_(2 * f.order()), log_(f.order(), 0) {
    const std::uint32_t n = f.order() - 1;
    for (std::uint32_t g = 2; g < f.order(); ++g) {
      if (multiplicative_order(g) == n) {
        generator_ = g;
        break;
      }
    }
    if (!generator_) throw std::logic_error("no generator found");
    std::uint32_t v = 1;
    for (std::uint32_t i = 0; i < n; ++i) {
      exp_[i] = exp_[i + n] = v;
      log_[v] = i;
      v = mul_raw(f, v, generator_);
    }
  }

  std::uint32_t generator() const noexcept { return generator_; }

  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    if (a == 0 || b == 0) return 0;
    return exp_[log_[a] + log_[b]];
  }

  std::uint32_t inverse(std::uint32_t a) const {
    if (a == 0) throw std::domain_error("zero has no inverse");
    const std::uint32_t n = field_.order() - 1;
    return exp_[(n - log_[a]) % n];
  }

 private:
  std::uint32_t multiplicative_order(std::uint32_t g) const {
    std::uint32_t v = g, k = 1;
    while (v != 1) {
      v = mul_raw(field_, v, g);
      ++k;
    }
    return k;
  }

  FieldSpec field_;
  std::uint32_t generator_ = 0;
  std::vector<std::uint32_t> exp_;
  std::vector<std::uint32_t> log_;
};

}  // namespace cumex::gf2m
