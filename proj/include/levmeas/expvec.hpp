#pragma once

// Integer exponent vectors ordered lexicographically from the right:
// the rightmost differing coordinate decides every comparison.  This is
// the value group of the rank-k valuation used throughout the library.

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace levmeas {

struct usage_error : std::logic_error {
  using std::logic_error::logic_error;
};

struct domain_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class ExpVec {
 public:
  ExpVec() = default;
  explicit ExpVec(std::vector<std::int64_t> coords) : c_(std::move(coords)) {}
  ExpVec(std::initializer_list<std::int64_t> coords) : c_(coords) {}

  static ExpVec zero(std::size_t arity) {
    return ExpVec(std::vector<std::int64_t>(arity, 0));
  }

  std::size_t arity() const { return c_.size(); }
  std::int64_t operator[](std::size_t i) const { return c_[i]; }
  std::int64_t& operator[](std::size_t i) { return c_[i]; }
  const std::vector<std::int64_t>& coords() const { return c_; }

  // head = first coordinate, tail = the remaining coordinates.  Under the
  // right-to-left order the tail is the dominant part.
  std::int64_t head() const {
    require_nonempty();
    return c_[0];
  }
  ExpVec tail() const {
    require_nonempty();
    return ExpVec(std::vector<std::int64_t>(c_.begin() + 1, c_.end()));
  }
  static ExpVec join(std::int64_t head, const ExpVec& tail) {
    std::vector<std::int64_t> v;
    v.reserve(tail.arity() + 1);
    v.push_back(head);
    v.insert(v.end(), tail.c_.begin(), tail.c_.end());
    return ExpVec(std::move(v));
  }

  // Rightmost differing coordinate decides; total order.
  static int cmp(const ExpVec& a, const ExpVec& b) {
    if (a.arity() != b.arity())
      throw usage_error("ExpVec comparison with mismatched arity");
    for (std::size_t i = a.arity(); i-- > 0;) {
      if (a.c_[i] != b.c_[i]) return a.c_[i] < b.c_[i] ? -1 : 1;
    }
    return 0;
  }

  friend bool operator==(const ExpVec& a, const ExpVec& b) {
    return cmp(a, b) == 0;
  }
  friend bool operator!=(const ExpVec& a, const ExpVec& b) {
    return cmp(a, b) != 0;
  }
  friend bool operator<(const ExpVec& a, const ExpVec& b) {
    return cmp(a, b) < 0;
  }
  friend bool operator<=(const ExpVec& a, const ExpVec& b) {
    return cmp(a, b) <= 0;
  }
  friend bool operator>(const ExpVec& a, const ExpVec& b) {
    return cmp(a, b) > 0;
  }
  friend bool operator>=(const ExpVec& a, const ExpVec& b) {
    return cmp(a, b) >= 0;
  }

  friend ExpVec operator+(const ExpVec& a, const ExpVec& b) {
    if (a.arity() != b.arity())
      throw usage_error("ExpVec addition with mismatched arity");
    ExpVec r = a;
    for (std::size_t i = 0; i < r.arity(); ++i) r.c_[i] += b.c_[i];
    return r;
  }
  friend ExpVec operator-(const ExpVec& a, const ExpVec& b) {
    if (a.arity() != b.arity())
      throw usage_error("ExpVec subtraction with mismatched arity");
    ExpVec r = a;
    for (std::size_t i = 0; i < r.arity(); ++i) r.c_[i] -= b.c_[i];
    return r;
  }
  ExpVec operator-() const {
    ExpVec r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
  }

  bool is_zero() const {
    for (auto x : c_)
      if (x != 0) return false;
    return true;
  }

  std::string str() const {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (i) os << ", ";
      os << c_[i];
    }
    os << ')';
    return os.str();
  }

 private:
  void require_nonempty() const {
    if (c_.empty()) throw usage_error("ExpVec head/tail on arity 0");
  }
  std::vector<std::int64_t> c_;
};

// Valuation value: a finite exponent vector or the infinite sentinel
// attached to 0.  The sentinel compares greater than every finite value;
// arithmetic with it is rejected.
class Valuation {
 public:
  Valuation() : v_(std::nullopt) {}
  explicit Valuation(ExpVec v) : v_(std::move(v)) {}
  static Valuation infinite() { return Valuation(); }

  bool is_infinite() const { return !v_.has_value(); }
  const ExpVec& finite() const {
    if (!v_) throw usage_error("finite() on infinite valuation");
    return *v_;
  }

  static int cmp(const Valuation& a, const Valuation& b) {
    if (a.is_infinite() && b.is_infinite()) return 0;
    if (a.is_infinite()) return 1;
    if (b.is_infinite()) return -1;
    return ExpVec::cmp(*a.v_, *b.v_);
  }
  friend bool operator==(const Valuation& a, const Valuation& b) {
    return cmp(a, b) == 0;
  }
  friend bool operator<(const Valuation& a, const Valuation& b) {
    return cmp(a, b) < 0;
  }
  friend bool operator<=(const Valuation& a, const Valuation& b) {
    return cmp(a, b) <= 0;
  }
  friend bool operator>(const Valuation& a, const Valuation& b) {
    return cmp(a, b) > 0;
  }
  friend bool operator>=(const Valuation& a, const Valuation& b) {
    return cmp(a, b) >= 0;
  }

  // v(xy) = v(x) + v(y) needs sums where either side may be infinite.
  friend Valuation operator+(const Valuation& a, const Valuation& b) {
    if (a.is_infinite() || b.is_infinite()) return infinite();
    return Valuation(*a.v_ + *b.v_);
  }

  std::string str() const { return v_ ? v_->str() : std::string("inf"); }

 private:
  std::optional<ExpVec> v_;
};

}  // namespace levmeas
