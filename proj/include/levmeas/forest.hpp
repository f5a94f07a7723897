#pragma once

// Laminar-forest representation of the ring of sets generated by a
// distinguished family.  A set is stored as disjoint rooted trees of cells
// with alternating include/exclude flags; the canonical form additionally
// merges every sibling group that tiles a one-step-larger cell, so two
// presentations of the same set normalize to comparable forests and the
// measure is a signed sum of base measures.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "levmeas/expvec.hpp"
#include "levmeas/family.hpp"
#include "levmeas/measure_value.hpp"

namespace levmeas {

// Classification of a set: TypeS = contains no distinguished set (only the
// empty set here); Leveled = has a minimal level.  TypeL and TypeE are
// reserved variants no operation produces for these families.
enum class SetType { TypeS, TypeL, TypeE, Leveled };

template <class Family>
class SetForest {
 public:
  using Cell = typename Family::Cell;
  using Elem = typename Family::Elem;

  struct Node {
    Cell cell;
    bool included = true;
    std::vector<Node> children;
  };

  struct UniformResult {
    enum class Kind { Empty, Uniform, NotUniform };
    Kind kind = Kind::Empty;
    std::optional<ExpVec> level;  // the set's level; absent when empty
    std::optional<Elem> witness;  // a point with no level-matching
                                  // distinguished neighbourhood in the set
  };

  struct Classification {
    SetType type = SetType::TypeS;
    std::optional<ExpVec> level;
    bool uniform = false;
    std::optional<Elem> witness;
  };

  explicit SetForest(Family fam) : fam_(std::move(fam)) {}

  static SetForest from_cell(const Family& fam, const Cell& c) {
    return union_of_cells(fam, {c});
  }

  static SetForest union_of_cells(const Family& fam,
                                  const std::vector<Cell>& cells) {
    SetForest f(fam);
    std::vector<Node> raw = build_containment(fam, cells);
    set_all_flags(raw, true);
    f.roots_ = canon_list(fam, std::move(raw), false);
    return f;
  }

  // The set (union of big) minus (union of small).  Every small shell must
  // lie inside some big shell.
  static SetForest from_shells(const Family& fam, const std::vector<Cell>& big,
                               const std::vector<Cell>& small) {
    for (const Cell& s : small) {
      bool inside = false;
      for (const Cell& b : big) {
        Trichotomy t = fam.compare(s, b);
        if (t == Trichotomy::Equal || t == Trichotomy::FirstInsideSecond) {
          inside = true;
          break;
        }
      }
      if (!inside)
        throw domain_error("small shell not contained in any big shell");
    }
    return binary_op(union_of_cells(fam, big), union_of_cells(fam, small),
                     true, false, false);
  }

  const Family& family() const { return fam_; }
  const std::vector<Node>& roots() const { return roots_; }
  bool empty() const { return roots_.empty(); }

  bool member(const Elem& x) const {
    const std::vector<Node>* cur = &roots_;
    bool flag = false;
    for (;;) {
      const Node* hit = nullptr;
      for (const Node& n : *cur) {
        if (fam_.member(x, n.cell)) {
          hit = &n;
          break;
        }
      }
      if (!hit) return flag;
      flag = hit->included;
      cur = &hit->children;
    }
  }

  // Valid for canonical forests and for refinement presentations alike:
  // each node contributes its fringe (cell minus children) when included.
  MeasureValue measure() const {
    MeasureValue total = MeasureValue::zero(fam_.elevation());
    for (const Node& r : roots_) total += node_measure(r);
    return total;
  }

  std::optional<ExpVec> level_of() const {
    if (roots_.empty()) return std::nullopt;
    ExpVec best = fam_.level(roots_.front().cell);
    for (const Node& r : roots_) {
      ExpVec l = fam_.level(r.cell);
      if (ExpVec::cmp(l, best) < 0) best = l;
    }
    return best;
  }

  // A set has uniform level gamma when every point has a level-gamma
  // distinguished neighbourhood inside the set.  For a canonical forest this
  // holds exactly when every cell in the forest has level gamma; the first
  // offending node yields an explicit witness point.
  UniformResult uniform_level() const {
    UniformResult res;
    if (roots_.empty()) return res;
    ExpVec g = *level_of();
    res.level = g;
    std::optional<Offender> off = find_offender(roots_, nullptr, g);
    if (!off) {
      res.kind = UniformResult::Kind::Uniform;
      return res;
    }
    res.kind = UniformResult::Kind::NotUniform;
    if (off->node->included) {
      res.witness = point_in_fringe(off->node->cell, cells_of(off->node->children));
      return res;
    }
    // Excluded offender: its parent holds level g; points of the parent
    // fringe hugging the offender deeper than g witness the failure.
    const Node* parent = off->parent;
    std::uint64_t units = fam_.q() - 1 == 0 ? 1 : fam_.q() - 1;
    std::uint64_t limit = (parent->children.size() + 2) * units + 4;
    for (std::uint64_t attempt = 0; attempt < limit; ++attempt) {
      Elem s = fam_.tangent_candidate(off->node->cell, attempt);
      if (!fam_.member(s, parent->cell)) continue;
      bool clean = true;
      for (const Node& sib : parent->children) {
        if (fam_.member(s, sib.cell)) {
          clean = false;
          break;
        }
      }
      if (clean) {
        res.witness = s;
        return res;
      }
    }
    throw std::logic_error("tangent witness search exhausted");
  }

  Classification classify() const {
    Classification c;
    if (roots_.empty()) {
      c.type = SetType::TypeS;
      return c;
    }
    c.type = SetType::Leveled;
    UniformResult u = uniform_level();
    c.level = u.level;
    c.uniform = u.kind == UniformResult::Kind::Uniform;
    c.witness = u.witness;
    return c;
  }

  SetForest translated(const Elem& g) const {
    SetForest out(fam_);
    std::vector<Node> raw;
    raw.reserve(roots_.size());
    for (const Node& r : roots_) raw.push_back(translate_node(g, r));
    out.roots_ = canon_list(fam_, std::move(raw), false);
    return out;
  }

  std::vector<Cell> all_cells() const {
    std::vector<Cell> out;
    for (const Node& r : roots_) collect_cells(r, out);
    return out;
  }

  // Common refinement of two presentations of the same set: a forest whose
  // cells include every cell of A and of B.  Throws when A and B differ as
  // point sets.  The result is a presentation (flags need not alternate);
  // measure() and member() remain exact on it.
  static SetForest refine_common(const SetForest& A, const SetForest& B) {
    if (!binary_op(A, B, true, false, false).empty() ||
        !binary_op(B, A, true, false, false).empty())
      throw domain_error("refine_common: inputs differ as point sets");
    const Family& fam = A.fam_;
    std::vector<Cell> cells = A.all_cells();
    for (Cell& c : B.all_cells()) cells.push_back(std::move(c));
    SetForest R(fam);
    R.roots_ = build_containment(fam, cells);
    for (Node& r : R.roots_) assign_refined_flags(A, r);
    return R;
  }

  friend SetForest forest_union(const SetForest& a, const SetForest& b) {
    return binary_op(a, b, true, true, true);
  }
  friend SetForest forest_intersect(const SetForest& a, const SetForest& b) {
    return binary_op(a, b, false, false, true);
  }
  friend SetForest forest_difference(const SetForest& a, const SetForest& b) {
    return binary_op(a, b, true, false, false);
  }
  friend bool set_equal(const SetForest& a, const SetForest& b) {
    return binary_op(a, b, true, false, false).empty() &&
           binary_op(b, a, true, false, false).empty();
  }

  // Re-parseable expression for the canonical forest: a union over included
  // nodes of (cell minus its children).
  std::string canonical_expression() const {
    if (roots_.empty()) return "empty";
    std::vector<std::string> terms;
    for (const Node& r : roots_) expression_terms(r, terms);
    std::string out;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      if (i) out += " | ";
      out += terms[i];
    }
    return out;
  }

  std::string str() const {
    std::string out;
    for (const Node& r : roots_) debug_node(r, 0, out);
    if (out.empty()) out = "(empty)\n";
    return out;
  }

  // A point of cell \ (union of kids); kids must be cells nested inside or
  // disjoint from every split of cell, which the laminar property grants.
  Elem point_in_fringe(const Cell& cell, const std::vector<Cell>& kids) const {
    Cell cur = cell;
    std::int64_t maxh = fam_.head(cell);
    for (const Cell& k : kids) maxh = std::max(maxh, fam_.head(k));
    std::uint64_t limit =
        static_cast<std::uint64_t>(maxh - fam_.head(cell)) + kids.size() + 16;
    for (std::uint64_t iter = 0; iter < limit; ++iter) {
      Elem r = fam_.rep(cur);
      if (!in_any(r, kids)) return r;
      std::vector<Cell> subs = fam_.split(cur, fam_.head(cur) + 1);
      for (const Cell& s : subs) {
        Elem rs = fam_.rep(s);
        if (!in_any(rs, kids)) return rs;
      }
      bool descended = false;
      for (const Cell& s : subs) {
        bool inside_kid = false;
        for (const Cell& k : kids) {
          Trichotomy t = fam_.compare(s, k);
          if (t == Trichotomy::Equal || t == Trichotomy::FirstInsideSecond) {
            inside_kid = true;
            break;
          }
        }
        if (inside_kid) continue;
        MeasureValue room = fam_.base_measure(s);
        for (const Cell& k : kids) {
          Trichotomy t = fam_.compare(k, s);
          if (t == Trichotomy::FirstInsideSecond)
            room -= fam_.base_measure(k);
        }
        if (room.sign() > 0) {
          cur = s;
          descended = true;
          break;
        }
      }
      if (!descended) throw std::logic_error("fringe region is empty");
    }
    throw std::logic_error("fringe point search exhausted");
  }

 private:
  struct Offender {
    const Node* node;
    const Node* parent;
  };

  bool in_any(const Elem& x, const std::vector<Cell>& kids) const {
    for (const Cell& k : kids)
      if (fam_.member(x, k)) return true;
    return false;
  }

  static std::vector<Cell> cells_of(const std::vector<Node>& nodes) {
    std::vector<Cell> out;
    out.reserve(nodes.size());
    for (const Node& n : nodes) out.push_back(n.cell);
    return out;
  }

  MeasureValue node_measure(const Node& n) const {
    MeasureValue inner = MeasureValue::zero(fam_.elevation());
    for (const Node& c : n.children) inner += node_measure(c);
    if (!n.included) return inner;
    MeasureValue v = fam_.base_measure(n.cell);
    for (const Node& c : n.children) v -= fam_.base_measure(c.cell);
    return v + inner;
  }

  std::optional<Offender> find_offender(const std::vector<Node>& list,
                                        const Node* parent,
                                        const ExpVec& g) const {
    for (const Node& n : list) {
      if (ExpVec::cmp(fam_.level(n.cell), g) != 0) return Offender{&n, parent};
      if (auto r = find_offender(n.children, &n, g)) return r;
    }
    return std::nullopt;
  }

  Node translate_node(const Elem& g, const Node& n) const {
    Node out{fam_.translate(g, n.cell), n.included, {}};
    out.children.reserve(n.children.size());
    for (const Node& c : n.children)
      out.children.push_back(translate_node(g, c));
    return out;
  }

  static void collect_cells(const Node& n, std::vector<Cell>& out) {
    out.push_back(n.cell);
    for (const Node& c : n.children) collect_cells(c, out);
  }

  void expression_terms(const Node& n, std::vector<std::string>& terms) const {
    if (n.included) {
      if (n.children.empty()) {
        terms.push_back(fam_.cell_str(n.cell));
      } else {
        std::string t = "(" + fam_.cell_str(n.cell) + " \\ (";
        for (std::size_t i = 0; i < n.children.size(); ++i) {
          if (i) t += " | ";
          t += fam_.cell_str(n.children[i].cell);
        }
        t += "))";
        terms.push_back(std::move(t));
      }
    }
    for (const Node& c : n.children) expression_terms(c, terms);
  }

  void debug_node(const Node& n, int depth, std::string& out) const {
    out.append(static_cast<std::size_t>(depth) * 2, ' ');
    out += n.included ? "+ " : "- ";
    out += fam_.cell_str(n.cell);
    out += "\n";
    for (const Node& c : n.children) debug_node(c, depth + 1, out);
  }

  static void set_all_flags(std::vector<Node>& nodes, bool v) {
    for (Node& n : nodes) {
      n.included = v;
      set_all_flags(n.children, v);
    }
  }

  // Insert cells one at a time; any two cells are equal, nested, or
  // disjoint, so a containment forest always exists.  Duplicates collapse.
  static std::vector<Node> build_containment(const Family& fam,
                                             const std::vector<Cell>& cells) {
    std::vector<Node> roots;
    for (const Cell& c : cells) insert_cell(fam, roots, Node{c, true, {}});
    return roots;
  }

  static void insert_cell(const Family& fam, std::vector<Node>& list, Node n) {
    for (Node& r : list) {
      Trichotomy t = fam.compare(n.cell, r.cell);
      if (t == Trichotomy::Equal) return;
      if (t == Trichotomy::FirstInsideSecond) {
        insert_cell(fam, r.children, std::move(n));
        return;
      }
    }
    std::vector<Node> keep;
    keep.reserve(list.size() + 1);
    for (Node& r : list) {
      if (fam.compare(r.cell, n.cell) == Trichotomy::FirstInsideSecond)
        n.children.push_back(std::move(r));
      else
        keep.push_back(std::move(r));
    }
    keep.push_back(std::move(n));
    list = std::move(keep);
  }

  // Flag of the fringe of `cell` within this set: the deepest node whose
  // cell contains `cell` decides, because every cell of this forest either
  // contains `cell` or lies inside one of the containment children.
  bool fringe_flag(const Cell& cell) const {
    const std::vector<Node>* cur = &roots_;
    bool flag = false;
    for (;;) {
      const Node* hit = nullptr;
      for (const Node& n : *cur) {
        Trichotomy t = fam_.compare(cell, n.cell);
        if (t == Trichotomy::Equal || t == Trichotomy::FirstInsideSecond) {
          hit = &n;
          break;
        }
      }
      if (!hit) return flag;
      flag = hit->included;
      cur = &hit->children;
    }
  }

  // Generic boolean combination driven by the fringe truth table:
  // f(in A only) = fa, f(in B only) = fb, f(in both) = fab, f(neither) = 0.
  static SetForest binary_op(const SetForest& A, const SetForest& B, bool fa,
                             bool fb, bool fab) {
    const Family& fam = A.fam_;
    std::vector<Cell> cells = A.all_cells();
    for (Cell& c : B.all_cells()) cells.push_back(std::move(c));
    std::vector<Node> T = build_containment(fam, cells);
    for (Node& r : T) assign_op_flags(A, B, fa, fb, fab, r);
    SetForest out(fam);
    out.roots_ = canon_list(fam, std::move(T), false);
    return out;
  }

  static void assign_op_flags(const SetForest& A, const SetForest& B, bool fa,
                              bool fb, bool fab, Node& n) {
    bool a = A.fringe_flag(n.cell);
    bool b = B.fringe_flag(n.cell);
    n.included = (a && b) ? fab : a ? fa : b ? fb : false;
    for (Node& c : n.children) assign_op_flags(A, B, fa, fb, fab, c);
  }

  static void assign_refined_flags(const SetForest& A, Node& n) {
    for (Node& c : n.children) assign_refined_flags(A, c);
    const Family& fam = A.fam_;
    MeasureValue room = fam.base_measure(n.cell);
    for (const Node& c : n.children) room -= fam.base_measure(c.cell);
    if (room.sign() == 0) {
      n.included = true;  // children tile the cell; the flag is immaterial
      return;
    }
    n.included = A.member(A.point_in_fringe(n.cell, cells_of(n.children)));
  }

  // Canonicalization: returns the canonical sibling list for the given raw
  // list under a surrounding region whose flag is `ambient`.  Children are
  // canonicalized first; nodes whose flag equals the ambient flag dissolve
  // into their children; chains cell == child-cell collapse; sibling groups
  // tiling a one-step-larger cell merge to a fixed point; siblings sort by
  // the family key.
  static std::vector<Node> canon_list(const Family& fam,
                                      std::vector<Node> nodes, bool ambient) {
    std::vector<Node> out;
    for (Node& n : nodes) {
      n.children = canon_list(fam, std::move(n.children), n.included);
      Node cur = std::move(n);
      while (cur.children.size() == 1 &&
             fam.compare(cur.children.front().cell, cur.cell) ==
                 Trichotomy::Equal) {
        Node inner = std::move(cur.children.front());
        cur = std::move(inner);
      }
      if (cur.included == ambient) {
        for (Node& g : cur.children) out.push_back(std::move(g));
      } else {
        out.push_back(std::move(cur));
      }
    }
    while (merge_pass(fam, out)) {
    }
    std::sort(out.begin(), out.end(), [&fam](const Node& x, const Node& y) {
      return fam.sort_key(x.cell) < fam.sort_key(y.cell);
    });
    return out;
  }

  // One merge of a full sibling group tiling its one-step enlargement.
  // Grouping tests enlarged cells for equality through compare, never
  // through keys: representatives need not be canonical data.
  static bool merge_pass(const Family& fam, std::vector<Node>& out) {
    for (std::size_t i = 0; i < out.size(); ++i) {
      std::optional<Cell> up = fam.enlarge(out[i].cell);
      if (!up) continue;
      std::vector<std::size_t> idxs;
      for (std::size_t j = 0; j < out.size(); ++j) {
        if (j == i) {
          idxs.push_back(j);
          continue;
        }
        std::optional<Cell> upj = fam.enlarge(out[j].cell);
        if (upj && fam.compare(*upj, *up) == Trichotomy::Equal)
          idxs.push_back(j);
      }
      std::int64_t k = fam.index_exponent(out[i].cell, *up);
      if (k < 0) throw std::logic_error("enlarge produced a smaller cell");
      BigInt expect = int_pow(BigInt(fam.q()), static_cast<std::uint64_t>(k));
      if (BigInt(static_cast<std::uint64_t>(idxs.size())) != expect) continue;
      bool flag = out[idxs.front()].included;
      bool uniform_flags = true;
      for (std::size_t j : idxs)
        if (out[j].included != flag) uniform_flags = false;
      if (!uniform_flags) continue;
      Node merged{*up, flag, {}};
      for (std::size_t j : idxs)
        for (Node& c : out[j].children) merged.children.push_back(std::move(c));
      merged.children = canon_list(fam, std::move(merged.children), flag);
      std::vector<Node> next;
      next.reserve(out.size() - idxs.size() + 1);
      for (std::size_t j = 0; j < out.size(); ++j) {
        if (std::find(idxs.begin(), idxs.end(), j) == idxs.end())
          next.push_back(std::move(out[j]));
      }
      next.push_back(std::move(merged));
      out = std::move(next);
      return true;
    }
    return false;
  }

  Family fam_;
  std::vector<Node> roots_;
};

// Index of one distinguished set inside another: finite exactly when the
// levels agree; requires containment.
template <class Family>
IndexResult cell_index(const Family& fam, const typename Family::Cell& inner,
                       const typename Family::Cell& outer) {
  Trichotomy t = fam.compare(inner, outer);
  if (t == Trichotomy::Equal) return finite_index(fam.q(), 0);
  if (t != Trichotomy::FirstInsideSecond)
    throw domain_error("index: first set is not contained in the second");
  if (ExpVec::cmp(fam.level(inner), fam.level(outer)) != 0)
    return infinite_index();
  return finite_index(fam.q(), fam.index_exponent(inner, outer));
}

// Verifies that index exponents between matched cells are independent of
// the level coordinate and agree with base-measure ratios.
struct CompatSample {
  std::int64_t inner_head = 0;
  std::int64_t outer_head = 0;
  std::vector<ExpVec> gammas;
};

struct CompatReport {
  bool ok = true;
  std::string text;
};

template <class Family>
CompatReport check_compatible(const Family& fam,
                              const std::vector<CompatSample>& samples) {
  CompatReport rep;
  for (const CompatSample& s : samples) {
    std::optional<std::int64_t> seen;
    bool ratios_ok = true;
    for (const ExpVec& g : s.gammas) {
      auto inner = fam.cell_at(s.inner_head, g);
      auto outer = fam.cell_at(s.outer_head, g);
      std::int64_t k = fam.index_exponent(inner, outer);
      if (seen && *seen != k) {
        rep.ok = false;
        rep.text += "exponent varies with level for heads " +
                    std::to_string(s.inner_head) + " in " +
                    std::to_string(s.outer_head) + "\n";
      }
      seen = k;
      MeasureValue lhs = fam.base_measure(outer);
      MeasureValue rhs = (k >= 0 ? Rational(int_pow(BigInt(fam.q()),
                                                    static_cast<std::uint64_t>(k)))
                                 : rational_pow(fam.q(), k)) *
                         fam.base_measure(inner);
      if (!(lhs == rhs)) ratios_ok = false;
    }
    if (!ratios_ok) {
      rep.ok = false;
      rep.text += "measure ratio mismatch for heads " +
                  std::to_string(s.inner_head) + " in " +
                  std::to_string(s.outer_head) + "\n";
    } else if (seen) {
      rep.text += "heads " + std::to_string(s.inner_head) + " in " +
                  std::to_string(s.outer_head) + ": exponent " +
                  std::to_string(*seen) + " constant, ratio q^" +
                  std::to_string(*seen) + " confirmed\n";
    }
  }
  return rep;
}

}  // namespace levmeas
