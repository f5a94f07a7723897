#pragma once

// Shared vocabulary for families of distinguished sets.  A family supplies
// cells (cosets of a filtered chain of subgroups) on which the set algebra
// is built.  Any two cells are equal, disjoint, or nested; mutual
// containment with equal levels always has finite index a power of q.
//
// A family F exposes, with Cell and Elem value types:
//   elevation()                         arity of levels
//   compare(a, b)        -> Trichotomy
//   level(c)             -> ExpVec      elevation-arity level vector
//   base_measure(c)      -> MeasureValue
//   index_exponent(i, o) -> int64       |o : i| = q^k, equal levels only
//   enlarge(c)           -> optional<Cell>  same-level superset, one step
//   split(c, head)       -> vector<Cell>    same-level tiling partition
//   translate(g, c), member(x, c), rep(c), sort_key(c)
//   tangent_candidate(c, attempt) -> Elem   points hugging c from outside

#include <cstdint>
#include <string>

#include "levmeas/expvec.hpp"
#include "levmeas/rational.hpp"

namespace levmeas {

enum class Trichotomy {
  Equal,
  Disjoint,
  FirstInsideSecond,
  SecondInsideFirst,
};

inline const char* trichotomy_str(Trichotomy t) {
  switch (t) {
    case Trichotomy::Equal: return "equal";
    case Trichotomy::Disjoint: return "disjoint";
    case Trichotomy::FirstInsideSecond: return "first-inside-second";
    case Trichotomy::SecondInsideFirst: return "second-inside-first";
  }
  return "";
}

// Index of a cell pair: finite q^exponent, or infinite when the levels
// differ.  Infinity is an explicit state, never a number.
struct IndexResult {
  bool finite = false;
  std::int64_t exponent = 0;  // meaningful iff finite
  BigInt value;               // q^exponent, meaningful iff finite
  std::string str() const {
    if (!finite) return "infinite";
    return "q^" + std::to_string(exponent) + " = " + value.str();
  }
};

inline IndexResult finite_index(std::uint64_t q, std::int64_t exponent) {
  IndexResult r;
  r.finite = true;
  r.exponent = exponent;
  r.value = int_pow(BigInt(q), static_cast<std::uint64_t>(exponent));
  return r;
}

inline IndexResult infinite_index() { return IndexResult{}; }

}  // namespace levmeas
