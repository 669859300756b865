#pragma once

#include <cstdint>
#include <string>
#include <type_traits>

#include <boost/multiprecision/cpp_int.hpp>

namespace cumex {

/// Exact rational number used for coefficient identities and golden values.
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  return Rational(num) / Rational(den);
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }
inline double to_double(double v) { return v; }

/// "p/q" or "p" when the denominator is one.
inline std::string to_string(const Rational& r) { return r.str(); }

/// Converts an exact rational into the scalar type of a computation.
/// Works for double, Rational, and any ring type constructible from Rational.
template <class T>
T scalar_cast(const Rational& r) {
  if constexpr (std::is_same_v<T, double>)
    return r.convert_to<double>();
  else
    return T(r);
}

template <class T>
T scalar_from_int(std::int64_t v) {
  if constexpr (std::is_same_v<T, double>)
    return static_cast<double>(v);
  else
    return T(Rational(v));
}

template <class T>
inline constexpr bool is_exact_v = std::is_same_v<T, Rational>;

}  // namespace cumex
