#pragma once

// Finite-precision series arithmetic.  A PrecisionElement is a finitely
// supported value known modulo the ideal {v >= prec}; prec may be the
// infinite sentinel for exact values.  Propagation is pessimistic:
//   add:  prec = min(P, Q)
//   mul:  prec = min(P + v(y), Q + v(x))
// and stored monomials always lie strictly below prec.
//
// Inversion runs the geometric series of the unit part.  A requested
// precision can be unreachable with finite support: the series advances
// only in the direction of v of the unit-part remainder, so coordinates
// above the last one it moves are clamped to zero first.  The recorded
// precision is always the bound actually justified.

#include <cstdint>

#include "levmeas/expvec.hpp"
#include "levmeas/field_element.hpp"

namespace levmeas {

inline Valuation val_min(const Valuation& a, const Valuation& b) {
  return Valuation::cmp(a, b) <= 0 ? a : b;
}

class PrecisionElement {
 public:
  PrecisionElement(FieldElement value, Valuation prec)
      : value_(std::move(value)), prec_(std::move(prec)) {
    normalize();
  }
  static PrecisionElement exact(FieldElement value) {
    return PrecisionElement(std::move(value), Valuation::infinite());
  }

  const FieldElement& value() const { return value_; }
  const Valuation& prec() const { return prec_; }
  bool is_exact() const { return prec_.is_infinite(); }

  friend PrecisionElement operator+(const PrecisionElement& a,
                                    const PrecisionElement& b) {
    return PrecisionElement(a.value_ + b.value_, val_min(a.prec_, b.prec_));
  }
  friend PrecisionElement operator-(const PrecisionElement& a,
                                    const PrecisionElement& b) {
    return PrecisionElement(a.value_ - b.value_, val_min(a.prec_, b.prec_));
  }
  PrecisionElement operator-() const {
    return PrecisionElement(-value_, prec_);
  }
  friend PrecisionElement operator*(const PrecisionElement& a,
                                    const PrecisionElement& b) {
    Valuation prec = val_min(a.prec_ + b.value_.valuation(),
                             b.prec_ + a.value_.valuation());
    return PrecisionElement(a.value_ * b.value_, prec);
  }

  // Whether "value == other modulo {v >= bound}" is decidable and true.
  // Deciding anything finer than the recorded precision is a usage error.
  bool congruent_below(const FieldElement& other, const ExpVec& bound) const {
    if (Valuation::cmp(prec_, Valuation(bound)) < 0)
      throw usage_error("congruence test beyond recorded precision");
    return value_.truncated_below(bound) == other.truncated_below(bound);
  }

 private:
  void normalize() {
    if (!prec_.is_infinite())
      value_ = value_.truncated_below(prec_.finite());
  }
  FieldElement value_;
  Valuation prec_;
};

// Largest reachable precision bound: zero out the coordinates that the
// series step delta never advances.  delta > 0, so its rightmost nonzero
// coordinate j is positive and k*delta eventually dominates any bound
// whose coordinates above j vanish.
inline ExpVec clamp_precision_to_cone(const ExpVec& requested,
                                      const ExpVec& delta) {
  std::size_t j = 0;  // one past the last nonzero coordinate of delta
  for (std::size_t i = delta.arity(); i-- > 0;) {
    if (delta[i] != 0) {
      j = i + 1;
      break;
    }
  }
  // Suffix of the bound above j, compared right-to-left against zero.
  for (std::size_t i = requested.arity(); i-- > j;) {
    if (requested[i] != 0) {
      if (requested[i] > 0) {
        ExpVec clamped = requested;
        for (std::size_t k = j; k < clamped.arity(); ++k) clamped[k] = 0;
        return clamped;
      }
      return requested;  // suffix negative: every step already exceeds it
    }
  }
  return requested;
}

// Multiplicative inverse of x with x*y == 1 modulo {v >= prec} (after
// clamping prec into the reachable cone).  Monomials invert exactly.
inline PrecisionElement fe_invert(const FieldElement& x, const ExpVec& prec) {
  if (x.is_zero()) throw domain_error("inversion of zero");
  if (prec.arity() != x.dim())
    throw usage_error("precision arity does not match field dimension");
  const ExpVec w = x.valuation().finite();
  const std::uint32_t c = x.terms().begin()->second;
  FieldElement y0 =
      FieldElement::monomial(x.p(), fp_inv(c, x.p()), -w);
  FieldElement r = FieldElement::one(x.p(), x.dim()) - x * y0;
  if (r.is_zero()) return PrecisionElement::exact(y0);

  const ExpVec delta = r.valuation().finite();  // > 0 by construction
  const ExpVec target = clamp_precision_to_cone(prec, delta);
  FieldElement acc = FieldElement::one(x.p(), x.dim());
  FieldElement rk = r;
  while (!rk.is_zero() &&
         Valuation::cmp(rk.valuation(), Valuation(target)) < 0) {
    acc += rk;
    rk = rk * r;
  }
  return PrecisionElement(y0 * acc, Valuation(target - w));
}

}  // namespace levmeas
