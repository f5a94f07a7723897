#pragma once

// Exact arbitrary-precision rationals.  All measure coefficients in the
// library are exact; nothing is ever rounded.

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace levmeas {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Canonical text form: lowest terms, positive denominator, "a/b" or "a",
// zero as "0".  boost keeps cpp_rational canonical already.
inline std::string rational_str(const Rational& r) {
  if (boost::multiprecision::denominator(r) == 1)
    return boost::multiprecision::numerator(r).str();
  return boost::multiprecision::numerator(r).str() + "/" +
         boost::multiprecision::denominator(r).str();
}

inline BigInt int_pow(BigInt base, std::uint64_t e) {
  BigInt r = 1;
  while (e) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

// q^k for possibly negative k, as an exact rational.
inline Rational rational_pow(std::uint64_t q, std::int64_t k) {
  BigInt p = int_pow(BigInt(q), static_cast<std::uint64_t>(k < 0 ? -k : k));
  if (k < 0) return Rational(1, p);
  return Rational(p);
}

}  // namespace levmeas
