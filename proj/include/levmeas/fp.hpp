#pragma once

// Prime field coefficients.  The residue field of every series field here
// is F_p with p prime; elements are stored as canonical residues in [0, p).

#include <cstdint>

#include "levmeas/expvec.hpp"

namespace levmeas {

inline bool is_prime(std::uint32_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

inline std::uint32_t fp_add(std::uint32_t a, std::uint32_t b, std::uint32_t p) {
  std::uint64_t s = std::uint64_t(a) + b;
  return std::uint32_t(s >= p ? s - p : s);
}
inline std::uint32_t fp_neg(std::uint32_t a, std::uint32_t p) {
  return a == 0 ? 0 : p - a;
}
inline std::uint32_t fp_sub(std::uint32_t a, std::uint32_t b, std::uint32_t p) {
  return fp_add(a, fp_neg(b, p), p);
}
inline std::uint32_t fp_mul(std::uint32_t a, std::uint32_t b, std::uint32_t p) {
  return std::uint32_t((std::uint64_t(a) * b) % p);
}

inline std::uint32_t fp_pow(std::uint32_t a, std::uint64_t e, std::uint32_t p) {
  std::uint32_t r = 1 % p;
  while (e) {
    if (e & 1) r = fp_mul(r, a, p);
    a = fp_mul(a, a, p);
    e >>= 1;
  }
  return r;
}

inline std::uint32_t fp_inv(std::uint32_t a, std::uint32_t p) {
  if (a == 0) throw domain_error("division by zero in F_p");
  return fp_pow(a, p - 2, p);  // p prime
}

}  // namespace levmeas
