#pragma once

// Brute-force cross-check for measures of single-level sets: tile the
// ambient shells into cells of one common head, then count the cells whose
// representative lies in the set.  This path exercises only split and
// membership, independently of canonicalization and signed summation.

#include <string>
#include <vector>

#include "levmeas/expvec.hpp"
#include "levmeas/forest.hpp"
#include "levmeas/measure_value.hpp"

namespace levmeas {

namespace detail {

template <class Family>
void require_level(const Family& fam, const typename Family::Cell& c,
                   const ExpVec& gamma) {
  if (ExpVec::cmp(fam.level(c), gamma) != 0)
    throw usage_error("oracle requires every cell at the given level");
}

}  // namespace detail

// Raw-shell form: the set is (union of big) minus (union of small), read as
// a flat predicate on points.
template <class Family>
MeasureValue oracle_single_level_measure(
    const Family& fam, const std::vector<typename Family::Cell>& big,
    const std::vector<typename Family::Cell>& small, const ExpVec& gamma) {
  using Cell = typename Family::Cell;
  for (const Cell& c : big) detail::require_level(fam, c, gamma);
  for (const Cell& c : small) detail::require_level(fam, c, gamma);
  if (big.empty()) return MeasureValue::zero(gamma.arity());
  std::int64_t hi = fam.head(big.front());
  for (const Cell& c : big) hi = std::max(hi, fam.head(c));
  for (const Cell& c : small) hi = std::max(hi, fam.head(c));
  // Only maximal big shells need tiling; they are pairwise disjoint, so the
  // candidate cells below are distinct.
  std::vector<Cell> maximal;
  for (std::size_t i = 0; i < big.size(); ++i) {
    bool covered = false;
    for (std::size_t j = 0; j < big.size() && !covered; ++j) {
      if (i == j) continue;
      Trichotomy t = fam.compare(big[i], big[j]);
      if (t == Trichotomy::FirstInsideSecond) covered = true;
      if (t == Trichotomy::Equal && j < i) covered = true;
    }
    if (!covered) maximal.push_back(big[i]);
  }
  BigInt count = 0;
  MeasureValue unit = MeasureValue::zero(gamma.arity());
  bool have_unit = false;
  for (const Cell& b : maximal) {
    for (const Cell& cand : fam.split(b, hi)) {
      if (!have_unit) {
        unit = fam.base_measure(cand);
        have_unit = true;
      }
      auto rep = fam.rep(cand);
      bool in_big = false;
      for (const Cell& c : big) {
        if (fam.member(rep, c)) {
          in_big = true;
          break;
        }
      }
      if (!in_big) continue;
      bool in_small = false;
      for (const Cell& c : small) {
        if (fam.member(rep, c)) {
          in_small = true;
          break;
        }
      }
      if (!in_small) ++count;
    }
  }
  return Rational(count) * unit;
}

// Forest form: membership is the forest's own deepest-node rule, so nested
// presentations are handled; counting still bypasses signed summation.
template <class Family>
MeasureValue oracle_single_level_measure(const Family& fam,
                                         const SetForest<Family>& A,
                                         const ExpVec& gamma) {
  using Cell = typename Family::Cell;
  std::vector<Cell> cells = A.all_cells();
  for (const Cell& c : cells) detail::require_level(fam, c, gamma);
  if (cells.empty()) return MeasureValue::zero(gamma.arity());
  std::int64_t hi = fam.head(cells.front());
  for (const Cell& c : cells) hi = std::max(hi, fam.head(c));
  BigInt count = 0;
  MeasureValue unit = MeasureValue::zero(gamma.arity());
  bool have_unit = false;
  for (const auto& root : A.roots()) {
    for (const Cell& cand : fam.split(root.cell, hi)) {
      if (!have_unit) {
        unit = fam.base_measure(cand);
        have_unit = true;
      }
      if (A.member(fam.rep(cand))) ++count;
    }
  }
  return Rational(count) * unit;
}

}  // namespace levmeas
