#pragma once

// Elements of the n-fold iterated Laurent series field F_p((t1))...((tn)),
// restricted to finite F_p-combinations of monomials t^a, a in Z^n.  Every
// set-theoretic question the engine answers reduces to valuations of such
// differences, so finite support suffices and all arithmetic is exact.
//
// The valuation is the minimal support exponent under the right-to-left
// lex order; v(0) is the infinite sentinel.

#include <cstdint>
#include <map>
#include <sstream>
#include <string>

#include "levmeas/expvec.hpp"
#include "levmeas/fp.hpp"

namespace levmeas {

class FieldElement {
 public:
  FieldElement(std::uint32_t p, std::size_t n) : p_(p), n_(n) {
    if (!is_prime(p)) throw usage_error("coefficient characteristic not prime");
  }

  static FieldElement zero(std::uint32_t p, std::size_t n) {
    return FieldElement(p, n);
  }
  static FieldElement one(std::uint32_t p, std::size_t n) {
    return monomial(p, 1, ExpVec::zero(n));
  }
  static FieldElement monomial(std::uint32_t p, std::uint32_t coeff,
                               const ExpVec& exp) {
    FieldElement x(p, exp.arity());
    coeff %= p;
    if (coeff != 0) x.terms_[exp] = coeff;
    return x;
  }

  std::uint32_t p() const { return p_; }
  std::size_t dim() const { return n_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<ExpVec, std::uint32_t>& terms() const { return terms_; }

  Valuation valuation() const {
    if (terms_.empty()) return Valuation::infinite();
    return Valuation(terms_.begin()->first);
  }

  std::uint32_t coeff(const ExpVec& exp) const {
    auto it = terms_.find(exp);
    return it == terms_.end() ? 0 : it->second;
  }

  friend FieldElement operator+(const FieldElement& a, const FieldElement& b) {
    a.require_same(b);
    FieldElement r = a;
    for (const auto& [exp, c] : b.terms_) r.add_term(exp, c);
    return r;
  }
  friend FieldElement operator-(const FieldElement& a, const FieldElement& b) {
    a.require_same(b);
    FieldElement r = a;
    for (const auto& [exp, c] : b.terms_) r.add_term(exp, fp_neg(c, a.p_));
    return r;
  }
  FieldElement operator-() const {
    FieldElement r(p_, n_);
    for (const auto& [exp, c] : terms_) r.terms_[exp] = fp_neg(c, p_);
    return r;
  }
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b) {
    a.require_same(b);
    FieldElement r(a.p_, a.n_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_)
        r.add_term(ea + eb, fp_mul(ca, cb, a.p_));
    return r;
  }
  FieldElement& operator+=(const FieldElement& b) { return *this = *this + b; }
  FieldElement& operator-=(const FieldElement& b) { return *this = *this - b; }

  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    a.require_same(b);
    return a.terms_ == b.terms_;
  }
  friend bool operator!=(const FieldElement& a, const FieldElement& b) {
    return !(a == b);
  }

  // Keep only monomials with exponent below the bound (used both for
  // precision truncation and canonical coset shifts).
  FieldElement truncated_below(const ExpVec& bound) const {
    FieldElement r(p_, n_);
    for (const auto& [exp, c] : terms_)
      if (ExpVec::cmp(exp, bound) < 0) r.terms_[exp] = c;
    return r;
  }

  // Deterministic key for ordering; distinct elements get distinct keys.
  std::string sort_key() const {
    std::ostringstream os;
    for (const auto& [exp, c] : terms_) os << exp.str() << ':' << c << ';';
    return os.str();
  }

  // Text form matching the expression grammar: terms ascending, monomials
  // t1^a*t2^b with zero exponents omitted, unit coefficients omitted.
  std::string str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [exp, c] : terms_) {
      if (!first) os << " + ";
      first = false;
      std::string mono = monomial_str(exp);
      if (mono.empty())
        os << c;
      else if (c == 1)
        os << mono;
      else
        os << c << '*' << mono;
    }
    return os.str();
  }

 private:
  static std::string monomial_str(const ExpVec& exp) {
    std::ostringstream os;
    bool any = false;
    for (std::size_t i = 0; i < exp.arity(); ++i) {
      if (exp[i] == 0) continue;
      if (any) os << '*';
      any = true;
      os << 't' << (i + 1);
      if (exp[i] != 1) os << '^' << exp[i];
    }
    return os.str();
  }

  void require_same(const FieldElement& b) const {
    if (p_ != b.p_ || n_ != b.n_)
      throw usage_error("FieldElement arithmetic across different fields");
  }
  void add_term(const ExpVec& exp, std::uint32_t c) {
    if (c == 0) return;
    auto it = terms_.find(exp);
    if (it == terms_.end()) {
      terms_[exp] = c;
      return;
    }
    it->second = fp_add(it->second, c, p_);
    if (it->second == 0) terms_.erase(it);
  }

  std::uint32_t p_;
  std::size_t n_;
  std::map<ExpVec, std::uint32_t> terms_;  // nonzero coefficients only
};

}  // namespace levmeas
