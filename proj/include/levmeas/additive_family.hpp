#pragma once

// Additive cells of F = F_q((t1))...((tn)): sets  s + t^a O_F  where O_F is
// the ring of integers for the rightmost-first valuation.  A cell is stored
// with its canonical shift (all exponents below a), so equality of cells is
// literal equality of the representation.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "levmeas/expvec.hpp"
#include "levmeas/family.hpp"
#include "levmeas/field_element.hpp"
#include "levmeas/measure_value.hpp"

namespace levmeas {

struct AdditiveCell {
  FieldElement shift;  // canonical: every exponent of shift is < idx
  ExpVec idx;          // the cell is shift + t^idx * O_F
};

class AdditiveFamily {
 public:
  using Cell = AdditiveCell;
  using Elem = FieldElement;

  AdditiveFamily(std::uint32_t p, std::size_t dim) : p_(p), dim_(dim) {
    if (dim == 0) throw usage_error("field dimension must be positive");
    if (!is_prime(p)) throw usage_error("q must be prime");
  }

  std::uint32_t p() const { return p_; }
  std::uint32_t q() const { return p_; }
  std::size_t dim() const { return dim_; }
  std::size_t elevation() const { return dim_ - 1; }
  std::int64_t head(const Cell& c) const { return c.idx.head(); }

  // The shiftless cell of given head over level gamma: t1^h t^gamma O_F.
  Cell cell_at(std::int64_t h, const ExpVec& gamma) const {
    return make_cell(FieldElement::zero(p_, dim_), ExpVec::join(h, gamma));
  }

  Cell make_cell(const FieldElement& shift, const ExpVec& idx) const {
    check_elem(shift);
    if (idx.arity() != dim_) throw usage_error("cell index arity mismatch");
    return Cell{shift.truncated_below(idx), idx};
  }

  ExpVec level(const Cell& c) const { return c.idx.tail(); }

  MeasureValue base_measure(const Cell& c) const {
    return MeasureValue::monomial(rational_pow(p_, -c.idx.head()),
                                  c.idx.tail());
  }

  Trichotomy compare(const Cell& a, const Cell& b) const {
    int ci = ExpVec::cmp(a.idx, b.idx);
    if (ci == 0) {
      return a.shift == b.shift ? Trichotomy::Equal : Trichotomy::Disjoint;
    }
    // The groups are nested: t^a O contains t^b O exactly when a <= b.
    const Cell& small = ci > 0 ? a : b;  // higher index, smaller group
    const Cell& big = ci > 0 ? b : a;
    bool inside = (small.shift - big.shift).valuation() >= Valuation(big.idx);
    if (!inside) return Trichotomy::Disjoint;
    return ci > 0 ? Trichotomy::FirstInsideSecond
                  : Trichotomy::SecondInsideFirst;
  }

  bool member(const Elem& x, const Cell& c) const {
    check_elem(x);
    return (x - c.shift).valuation() >= Valuation(c.idx);
  }

  Elem rep(const Cell& c) const { return c.shift; }

  std::int64_t index_exponent(const Cell& inner, const Cell& outer) const {
    if (ExpVec::cmp(level(inner), level(outer)) != 0)
      throw usage_error("index exponent requires equal levels");
    return inner.idx.head() - outer.idx.head();
  }

  std::optional<Cell> enlarge(const Cell& c) const {
    ExpVec up = ExpVec::join(c.idx.head() - 1, c.idx.tail());
    return make_cell(c.shift, up);
  }

  // Tile c by all its subcells of head target_head (same level).
  std::vector<Cell> split(const Cell& c, std::int64_t target_head) const {
    std::int64_t lo = c.idx.head();
    if (target_head < lo) throw usage_error("split target above cell head");
    std::size_t width = static_cast<std::size_t>(target_head - lo);
    double bits = static_cast<double>(width) * std::log2(double(p_));
    if (bits > 21.0) throw usage_error("split too wide to enumerate");
    ExpVec tail = c.idx.tail();
    ExpVec sub_idx = ExpVec::join(target_head, tail);
    std::vector<Cell> out;
    std::vector<std::uint32_t> digits(width, 0);
    for (;;) {
      FieldElement s = c.shift;
      for (std::size_t i = 0; i < width; ++i) {
        if (digits[i] == 0) continue;
        s += FieldElement::monomial(
            p_, digits[i], ExpVec::join(lo + static_cast<std::int64_t>(i),
                                        tail));
      }
      out.push_back(Cell{s, sub_idx});
      std::size_t k = 0;
      while (k < width && ++digits[k] == p_) digits[k++] = 0;
      if (k == width) break;
    }
    return out;
  }

  Cell translate(const Elem& g, const Cell& c) const {
    check_elem(g);
    return make_cell(c.shift + g, c.idx);
  }

  std::string sort_key(const Cell& c) const {
    return c.idx.str() + "|" + c.shift.sort_key();
  }

  // Elements just outside c that every same-level cell through them would
  // have to engulf c to contain: rep + u*t1^h*t^level with h < head.
  Elem tangent_candidate(const Cell& c, std::uint64_t attempt) const {
    std::uint64_t units = p_ - 1;
    std::int64_t h = c.idx.head() - 1 - static_cast<std::int64_t>(attempt / units);
    std::uint32_t u = 1 + static_cast<std::uint32_t>(attempt % units);
    return c.shift +
           FieldElement::monomial(p_, u, ExpVec::join(h, c.idx.tail()));
  }

  std::string cell_str(const Cell& c) const {
    std::string s = "D(" + c.shift.str() + "; ";
    for (std::size_t i = 0; i < dim_; ++i) {
      if (i) s += ", ";
      s += std::to_string(c.idx[i]);
    }
    return s + ")";
  }

  std::string elem_str(const Elem& x) const { return x.str(); }

  // Small perturbations of x used by randomized compatibility checks.
  Elem sample_near(const Elem& x, const ExpVec& idx,
                   std::uint64_t seed) const {
    std::uint64_t units = p_;
    std::uint32_t u = static_cast<std::uint32_t>(seed % units);
    std::int64_t off = static_cast<std::int64_t>((seed / units) % 3);
    if (u == 0) return x;
    return x + FieldElement::monomial(
                   p_, u, ExpVec::join(idx.head() + off, idx.tail()));
  }

 private:
  void check_elem(const FieldElement& x) const {
    if (x.p() != p_ || x.dim() != dim_)
      throw usage_error("element belongs to a different field");
  }

  std::uint32_t p_;
  std::size_t dim_;
};

}  // namespace levmeas
