#pragma once

// Values of the measure: Laurent polynomials over Q in the elevation
// indeterminates, one per coordinate of the level lattice.  The ring is
// totally ordered by treating each indeterminate as a positive
// infinitesimal relative to everything before it, so the coefficient at
// the minimal support exponent (right-to-left lex) decides the sign.

#include <cstddef>
#include <map>
#include <sstream>
#include <string>

#include "levmeas/expvec.hpp"
#include "levmeas/rational.hpp"

namespace levmeas {

class MeasureValue {
 public:
  explicit MeasureValue(std::size_t elevation) : e_(elevation) {}

  static MeasureValue zero(std::size_t elevation) {
    return MeasureValue(elevation);
  }
  static MeasureValue monomial(const Rational& coeff, const ExpVec& exp) {
    MeasureValue v(exp.arity());
    if (coeff != 0) v.terms_[exp] = coeff;
    return v;
  }
  static MeasureValue constant(std::size_t elevation, const Rational& c) {
    return monomial(c, ExpVec::zero(elevation));
  }

  std::size_t elevation() const { return e_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<ExpVec, Rational>& terms() const { return terms_; }

  // Coefficient at a given exponent (0 when absent).
  Rational coeff(const ExpVec& exp) const {
    auto it = terms_.find(exp);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  friend MeasureValue operator+(const MeasureValue& a, const MeasureValue& b) {
    a.require_same(b);
    MeasureValue r = a;
    for (const auto& [exp, c] : b.terms_) r.add_term(exp, c);
    return r;
  }
  friend MeasureValue operator-(const MeasureValue& a, const MeasureValue& b) {
    a.require_same(b);
    MeasureValue r = a;
    for (const auto& [exp, c] : b.terms_) r.add_term(exp, -c);
    return r;
  }
  MeasureValue operator-() const {
    MeasureValue r(e_);
    for (const auto& [exp, c] : terms_) r.terms_[exp] = -c;
    return r;
  }
  friend MeasureValue operator*(const MeasureValue& a, const MeasureValue& b) {
    a.require_same(b);
    MeasureValue r(a.e_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) r.add_term(ea + eb, ca * cb);
    return r;
  }
  friend MeasureValue operator*(const Rational& c, const MeasureValue& a) {
    MeasureValue r(a.e_);
    if (c == 0) return r;
    for (const auto& [exp, k] : a.terms_) r.terms_[exp] = c * k;
    return r;
  }
  MeasureValue& operator+=(const MeasureValue& b) {
    return *this = *this + b;
  }
  MeasureValue& operator-=(const MeasureValue& b) {
    return *this = *this - b;
  }

  // Sign of the value in the ordered ring: the smallest support exponent
  // dominates, so its coefficient's sign is the value's sign.
  int sign() const {
    if (terms_.empty()) return 0;
    const Rational& lead = terms_.begin()->second;
    return lead > 0 ? 1 : -1;
  }
  static int cmp(const MeasureValue& a, const MeasureValue& b) {
    return (a - b).sign();
  }
  friend bool operator==(const MeasureValue& a, const MeasureValue& b) {
    a.require_same(b);
    return a.terms_ == b.terms_;
  }
  friend bool operator!=(const MeasureValue& a, const MeasureValue& b) {
    return !(a == b);
  }
  friend bool operator<(const MeasureValue& a, const MeasureValue& b) {
    return cmp(a, b) < 0;
  }
  friend bool operator>(const MeasureValue& a, const MeasureValue& b) {
    return cmp(a, b) > 0;
  }

  // Deterministic text form, terms in ascending exponent order.  With one
  // elevation coordinate the variable prints as "Y"; with several, as
  // "Y2".."Yn" matching the coordinate positions.  scale/varbase support
  // the presentational substitution Y_k -> X_k^scale.
  std::string str(const char* varbase = "Y", std::int64_t scale = 1) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [exp, c] : terms_) {
      Rational a = c;
      if (first) {
        if (a < 0) {
          os << '-';
          a = -a;
        }
      } else {
        os << (a < 0 ? " - " : " + ");
        if (a < 0) a = -a;
      }
      first = false;
      std::string mono = monomial_str(exp, varbase, scale);
      if (mono.empty()) {
        os << rational_str(a);
      } else {
        if (a != 1) os << rational_str(a) << " * ";
        os << mono;
      }
    }
    return os.str();
  }

 private:
  static std::string monomial_str(const ExpVec& exp, const char* varbase,
                                  std::int64_t scale) {
    std::ostringstream os;
    bool any = false;
    for (std::size_t i = 0; i < exp.arity(); ++i) {
      if (exp[i] == 0) continue;
      if (any) os << " * ";
      any = true;
      os << varbase;
      if (exp.arity() > 1) os << (i + 2);
      std::int64_t k = exp[i] * scale;
      if (k != 1) os << '^' << k;
    }
    return os.str();
  }

  void require_same(const MeasureValue& b) const {
    if (e_ != b.e_)
      throw usage_error("MeasureValue arithmetic with mismatched elevation");
  }
  void add_term(const ExpVec& exp, const Rational& c) {
    auto it = terms_.find(exp);
    if (it == terms_.end()) {
      if (c != 0) terms_[exp] = c;
      return;
    }
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }

  std::size_t e_;
  std::map<ExpVec, Rational> terms_;  // nonzero coefficients only
};

}  // namespace levmeas
