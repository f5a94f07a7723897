#pragma once

// Square matrices over F = F_q((t1))...((tn)) with exact finite-support
// entries.  Determinants and adjugates are computed by Laplace expansion;
// inversion to a requested precision goes through the adjugate and the
// scalar series inverse of the determinant, so the error budget is explicit.

#include <cstdint>
#include <string>
#include <vector>

#include "levmeas/expvec.hpp"
#include "levmeas/field_element.hpp"
#include "levmeas/precision.hpp"

namespace levmeas {

class FieldMatrix {
 public:
  FieldMatrix(std::uint32_t p, std::size_t dim, std::size_t m)
      : p_(p), dim_(dim), m_(m), a_(m * m, FieldElement::zero(p, dim)) {
    if (m == 0) throw usage_error("matrix size must be positive");
  }

  static FieldMatrix identity(std::uint32_t p, std::size_t dim,
                              std::size_t m) {
    FieldMatrix I(p, dim, m);
    for (std::size_t i = 0; i < m; ++i)
      I.at(i, i) = FieldElement::one(p, dim);
    return I;
  }

  std::uint32_t p() const { return p_; }
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return m_; }

  FieldElement& at(std::size_t i, std::size_t j) { return a_[i * m_ + j]; }
  const FieldElement& at(std::size_t i, std::size_t j) const {
    return a_[i * m_ + j];
  }

  friend FieldMatrix operator+(const FieldMatrix& x, const FieldMatrix& y) {
    x.require_same(y);
    FieldMatrix r = x;
    for (std::size_t k = 0; k < r.a_.size(); ++k) r.a_[k] += y.a_[k];
    return r;
  }

  friend FieldMatrix operator-(const FieldMatrix& x, const FieldMatrix& y) {
    x.require_same(y);
    FieldMatrix r = x;
    for (std::size_t k = 0; k < r.a_.size(); ++k) r.a_[k] -= y.a_[k];
    return r;
  }

  friend FieldMatrix operator*(const FieldMatrix& x, const FieldMatrix& y) {
    x.require_same(y);
    FieldMatrix r(x.p_, x.dim_, x.m_);
    for (std::size_t i = 0; i < x.m_; ++i)
      for (std::size_t k = 0; k < x.m_; ++k) {
        if (x.at(i, k).is_zero()) continue;
        for (std::size_t j = 0; j < x.m_; ++j)
          r.at(i, j) += x.at(i, k) * y.at(k, j);
      }
    return r;
  }

  friend FieldMatrix operator*(const FieldElement& c, const FieldMatrix& y) {
    FieldMatrix r = y;
    for (auto& e : r.a_) e = c * e;
    return r;
  }

  friend bool operator==(const FieldMatrix& x, const FieldMatrix& y) {
    x.require_same(y);
    return x.a_ == y.a_;
  }
  friend bool operator!=(const FieldMatrix& x, const FieldMatrix& y) {
    return !(x == y);
  }

  FieldElement det() const {
    if (m_ == 1) return at(0, 0);
    FieldElement d = FieldElement::zero(p_, dim_);
    for (std::size_t j = 0; j < m_; ++j) {
      if (at(0, j).is_zero()) continue;
      FieldElement term = at(0, j) * minor_at(0, j).det();
      d = (j % 2 == 0) ? d + term : d - term;
    }
    return d;
  }

  // adj(g) with g * adj(g) = det(g) * I, by transposed cofactors.
  FieldMatrix adjugate() const {
    FieldMatrix r(p_, dim_, m_);
    if (m_ == 1) {
      r.at(0, 0) = FieldElement::one(p_, dim_);
      return r;
    }
    for (std::size_t i = 0; i < m_; ++i)
      for (std::size_t j = 0; j < m_; ++j) {
        FieldElement c = minor_at(j, i).det();
        r.at(i, j) = ((i + j) % 2 == 0) ? c : -c;
      }
    return r;
  }

  // Smallest valuation over all entries; infinite for the zero matrix.
  Valuation min_valuation() const {
    Valuation v = Valuation::infinite();
    for (const auto& e : a_) v = val_min(v, e.valuation());
    return v;
  }

  FieldMatrix truncated_below(const ExpVec& bound) const {
    FieldMatrix r = *this;
    for (auto& e : r.a_) e = e.truncated_below(bound);
    return r;
  }

  std::string str() const {
    std::string s = "[";
    for (std::size_t i = 0; i < m_; ++i) {
      if (i) s += ", ";
      s += "[";
      for (std::size_t j = 0; j < m_; ++j) {
        if (j) s += ", ";
        s += at(i, j).str();
      }
      s += "]";
    }
    return s + "]";
  }

  std::string sort_key() const {
    std::string s;
    for (const auto& e : a_) {
      s += e.sort_key();
      s += "#";
    }
    return s;
  }

 private:
  FieldMatrix minor_at(std::size_t row, std::size_t col) const {
    FieldMatrix r(p_, dim_, m_ - 1);
    std::size_t ri = 0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == row) continue;
      std::size_t rj = 0;
      for (std::size_t j = 0; j < m_; ++j) {
        if (j == col) continue;
        r.at(ri, rj) = at(i, j);
        ++rj;
      }
      ++ri;
    }
    return r;
  }

  void require_same(const FieldMatrix& y) const {
    if (p_ != y.p_ || dim_ != y.dim_ || m_ != y.m_)
      throw usage_error("matrix shapes or fields differ");
  }

  std::uint32_t p_;
  std::size_t dim_;
  std::size_t m_;
  std::vector<FieldElement> a_;
};

struct PrecisionMatrix {
  FieldMatrix value;
  Valuation prec;  // entry error valuations are >= prec; infinite = exact
  bool is_exact() const { return prec.is_infinite(); }
};

// Inverse of g with every entry correct below `prec`.  Exact when the
// determinant inverts exactly (a monomial).  When the requested precision
// cannot be met by any finite-support matrix, refuses rather than degrade.
inline PrecisionMatrix mat_inverse_to_precision(const FieldMatrix& g,
                                                const ExpVec& prec) {
  FieldElement d = g.det();
  if (d.is_zero()) throw domain_error("matrix is singular");
  FieldMatrix adj = g.adjugate();
  Valuation slack = adj.min_valuation();
  if (slack.is_infinite()) throw domain_error("matrix is singular");
  ExpVec budget = prec - slack.finite();
  PrecisionElement di = fe_invert(d, budget);
  if (!di.is_exact() && Valuation::cmp(di.prec(), Valuation(budget)) < 0)
    throw domain_error(
        "matrix inverse is not representable to the requested precision");
  FieldMatrix h = di.value() * adj;
  if (di.is_exact()) return PrecisionMatrix{h, Valuation::infinite()};
  return PrecisionMatrix{h.truncated_below(prec), Valuation(prec)};
}

}  // namespace levmeas
