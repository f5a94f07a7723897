#pragma once

// Matrix coset cells over F = F_q((t1))...((tn)): sets rep * K_a (left
// variant) or K_a * rep (right variant), where K_a is the congruence
// subgroup of all h with v(h - I) >= a entrywise, for an index vector
// a > 0 in the rightmost-first order.  The special linear variant
// intersects everything with the det = 1 kernel.
//
// Coset membership is decided through the adjugate identity
//   r^-1 x = (adj(r) x) / det(r),
// so the congruence v(r^-1 x - I) >= a becomes the exact polynomial test
//   v(adj(r) x - det(r) I) >= a + v(det r),
// total on every representable input; no series inversion is involved.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "levmeas/expvec.hpp"
#include "levmeas/family.hpp"
#include "levmeas/matrix.hpp"
#include "levmeas/measure_value.hpp"
#include "levmeas/rational.hpp"

namespace levmeas {

enum class MatKind { GL, SL };
enum class MatSide { Left, Right };

struct MatCoset {
  FieldMatrix rep;  // stored exactly as given; never reduced
  ExpVec idx;       // the cell is rep * K_idx (left) or K_idx * rep (right)
};

inline BigInt gl_group_order(std::size_t m, std::uint64_t q) {
  BigInt qm = int_pow(BigInt(q), m);
  BigInt r = 1;
  for (std::size_t k = 0; k < m; ++k) r *= qm - int_pow(BigInt(q), k);
  return r;
}

inline BigInt sl_group_order(std::size_t m, std::uint64_t q) {
  return gl_group_order(m, q) / BigInt(q - 1);
}

class MatrixFamily {
 public:
  using Cell = MatCoset;
  using Elem = FieldMatrix;

  MatrixFamily(std::uint32_t p, std::size_t dim, std::size_t m, MatKind kind,
               MatSide side)
      : p_(p), dim_(dim), m_(m), kind_(kind), side_(side) {
    if (!is_prime(p)) throw usage_error("q must be prime");
    if (dim == 0) throw usage_error("field dimension must be positive");
    if (m < 2) throw usage_error("matrix size must be at least 2");
  }

  std::uint32_t p() const { return p_; }
  std::uint32_t q() const { return p_; }
  std::size_t dim() const { return dim_; }
  std::size_t elevation() const { return dim_ - 1; }
  std::size_t msize() const { return m_; }
  MatKind kind() const { return kind_; }
  MatSide side() const { return side_; }
  std::int64_t head(const Cell& c) const { return c.idx.head(); }

  // Entries of the measure normalization: one over the residue group order,
  // and the per-step index weight (the congruence quotient dimension).
  std::int64_t weight() const {
    auto mm = static_cast<std::int64_t>(m_) * static_cast<std::int64_t>(m_);
    return kind_ == MatKind::GL ? mm : mm - 1;
  }

  Cell make_cell(const FieldMatrix& rep, const ExpVec& idx) const {
    check_elem(rep);
    if (idx.arity() != dim_) throw usage_error("cell index arity mismatch");
    if (ExpVec::cmp(idx, ExpVec::zero(dim_)) <= 0)
      throw usage_error("matrix cell index must be positive");
    FieldElement d = rep.det();
    if (d.is_zero())
      throw domain_error("matrix cell representative is singular");
    if (kind_ == MatKind::SL && d != FieldElement::one(p_, dim_))
      throw domain_error("special linear representative must have det 1");
    return Cell{rep, idx};
  }

  Cell cell_at(std::int64_t h, const ExpVec& gamma) const {
    return make_cell(FieldMatrix::identity(p_, dim_, m_),
                     ExpVec::join(h, gamma));
  }

  ExpVec level(const Cell& c) const { return c.idx.tail(); }

  MeasureValue base_measure(const Cell& c) const {
    BigInt order = kind_ == MatKind::GL ? gl_group_order(m_, p_)
                                        : sl_group_order(m_, p_);
    Rational coef = Rational(1, order) *
                    rational_pow(p_, -weight() * (c.idx.head() - 1));
    return MeasureValue::monomial(coef, c.idx.tail());
  }

  bool member(const Elem& x, const Cell& c) const {
    check_elem(x);
    FieldElement dx = x.det();
    if (dx.is_zero()) return false;
    if (kind_ == MatKind::SL && dx != FieldElement::one(p_, dim_))
      return false;
    return congruent(c.rep, x, c.idx);
  }

  Trichotomy compare(const Cell& a, const Cell& b) const {
    int ci = ExpVec::cmp(a.idx, b.idx);
    if (ci == 0)
      return congruent(a.rep, b.rep, a.idx) ? Trichotomy::Equal
                                            : Trichotomy::Disjoint;
    const Cell& small = ci > 0 ? a : b;  // higher index, smaller subgroup
    const Cell& big = ci > 0 ? b : a;
    if (!congruent(big.rep, small.rep, big.idx)) return Trichotomy::Disjoint;
    return ci > 0 ? Trichotomy::FirstInsideSecond
                  : Trichotomy::SecondInsideFirst;
  }

  Elem rep(const Cell& c) const { return c.rep; }

  std::int64_t index_exponent(const Cell& inner, const Cell& outer) const {
    if (ExpVec::cmp(level(inner), level(outer)) != 0)
      throw usage_error("index exponent requires equal levels");
    return (inner.idx.head() - outer.idx.head()) * weight();
  }

  std::optional<Cell> enlarge(const Cell& c) const {
    ExpVec up = ExpVec::join(c.idx.head() - 1, c.idx.tail());
    if (ExpVec::cmp(up, ExpVec::zero(dim_)) <= 0) return std::nullopt;
    return Cell{c.rep, up};
  }

  // Tile c by all its subcells of head target_head (same level).
  std::vector<Cell> split(const Cell& c, std::int64_t target_head) const {
    std::int64_t lo = c.idx.head();
    if (target_head < lo) throw usage_error("split target above cell head");
    std::size_t layers = static_cast<std::size_t>(target_head - lo);
    double bits = static_cast<double>(layers) *
                  static_cast<double>(weight()) * std::log2(double(p_));
    if (bits > 21.0) throw usage_error("split too wide to enumerate");
    ExpVec tail = c.idx.tail();
    ExpVec sub_idx = ExpVec::join(target_head, tail);
    std::size_t per_layer = static_cast<std::size_t>(weight());
    std::vector<std::uint32_t> digits(layers * per_layer, 0);
    std::vector<Cell> out;
    for (;;) {
      FieldMatrix w = FieldMatrix::identity(p_, dim_, m_);
      for (std::size_t d = 0; d < layers; ++d) {
        ExpVec layer_exp =
            ExpVec::join(lo + static_cast<std::int64_t>(d), tail);
        const std::uint32_t* ld = digits.data() + d * per_layer;
        if (kind_ == MatKind::GL)
          w = w * gl_layer(ld, layer_exp);
        else
          w = w * sl_layer(ld, layer_exp);
      }
      FieldMatrix r = side_ == MatSide::Left ? c.rep * w : w * c.rep;
      out.push_back(Cell{r, sub_idx});
      std::size_t k = 0;
      while (k < digits.size() && ++digits[k] == p_) digits[k++] = 0;
      if (k == digits.size()) break;
    }
    return out;
  }

  Cell translate(const Elem& g, const Cell& c) const {
    check_elem(g);
    FieldElement d = g.det();
    if (d.is_zero()) throw domain_error("translation matrix is singular");
    if (kind_ == MatKind::SL && d != FieldElement::one(p_, dim_))
      throw domain_error("special linear translation must have det 1");
    return Cell{side_ == MatSide::Left ? g * c.rep : c.rep * g, c.idx};
  }

  // Deterministic but representative-dependent: coset equality must always
  // go through compare, never through key equality.
  std::string sort_key(const Cell& c) const {
    return c.idx.str() + "|" + c.rep.sort_key();
  }

  // Points hugging c from outside: rep times a transvection one or more
  // head steps shallower than the cell index.
  Elem tangent_candidate(const Cell& c, std::uint64_t attempt) const {
    std::uint64_t units = p_ - 1;
    std::int64_t h =
        c.idx.head() - 1 - static_cast<std::int64_t>(attempt / units);
    std::uint32_t u = 1 + static_cast<std::uint32_t>(attempt % units);
    FieldMatrix t = FieldMatrix::identity(p_, dim_, m_);
    t.at(0, 1) = FieldElement::monomial(p_, u, ExpVec::join(h, c.idx.tail()));
    return side_ == MatSide::Left ? c.rep * t : t * c.rep;
  }

  std::string cell_str(const Cell& c) const {
    std::string s = "K(" + c.rep.str() + "; ";
    for (std::size_t i = 0; i < dim_; ++i) {
      if (i) s += ", ";
      s += std::to_string(c.idx[i]);
    }
    return s + ")";
  }

  std::string elem_str(const Elem& x) const { return x.str(); }

 private:
  void check_elem(const FieldMatrix& x) const {
    if (x.p() != p_ || x.dim() != dim_ || x.size() != m_)
      throw usage_error("matrix belongs to a different group");
  }

  // v(r^-1 x - I) >= bound, decided through adjugates: the left variant
  // tests adj(r) x, the right variant x adj(r).
  bool congruent(const FieldMatrix& r, const FieldMatrix& x,
                 const ExpVec& bound) const {
    FieldElement d = r.det();
    FieldMatrix y =
        side_ == MatSide::Left ? r.adjugate() * x : x * r.adjugate();
    FieldMatrix delta = y - d * FieldMatrix::identity(p_, dim_, m_);
    Valuation need = Valuation(bound) + d.valuation();
    return Valuation::cmp(delta.min_valuation(), need) >= 0;
  }

  // One window layer for the general linear family: I plus an arbitrary
  // coefficient matrix at the layer exponent.
  FieldMatrix gl_layer(const std::uint32_t* digits,
                       const ExpVec& layer_exp) const {
    FieldMatrix w = FieldMatrix::identity(p_, dim_, m_);
    std::size_t k = 0;
    for (std::size_t i = 0; i < m_; ++i)
      for (std::size_t j = 0; j < m_; ++j) {
        if (digits[k] != 0)
          w.at(i, j) += FieldElement::monomial(p_, digits[k], layer_exp);
        ++k;
      }
    return w;
  }

  // One window layer for the special linear family: a product of embedded
  // det-1 blocks B(w) = [[1+w, w], [-w, 1-w]] on the diagonal positions and
  // transvections off the diagonal.  Exactly q^(m^2 - 1) distinct layers,
  // each with determinant exactly 1.
  FieldMatrix sl_layer(const std::uint32_t* digits,
                       const ExpVec& layer_exp) const {
    FieldMatrix w = FieldMatrix::identity(p_, dim_, m_);
    std::size_t k = 0;
    for (std::size_t d = 0; d + 1 < m_; ++d, ++k) {
      if (digits[k] == 0) continue;
      FieldElement v = FieldElement::monomial(p_, digits[k], layer_exp);
      FieldMatrix b = FieldMatrix::identity(p_, dim_, m_);
      b.at(d, d) += v;
      b.at(d, d + 1) = v;
      b.at(d + 1, d) = -v;
      b.at(d + 1, d + 1) -= v;
      w = w * b;
    }
    for (std::size_t i = 0; i < m_; ++i)
      for (std::size_t j = 0; j < m_; ++j) {
        if (i == j) continue;
        if (digits[k] != 0) {
          FieldMatrix e = FieldMatrix::identity(p_, dim_, m_);
          e.at(i, j) = FieldElement::monomial(p_, digits[k], layer_exp);
          w = w * e;
        }
        ++k;
      }
    return w;
  }

  std::uint32_t p_;
  std::size_t dim_;
  std::size_t m_;
  MatKind kind_;
  MatSide side_;
};

}  // namespace levmeas
