#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "levmeas/field_element.hpp"

using namespace levmeas;

namespace {

FieldElement rnd_elem(std::mt19937_64& rng, std::uint32_t p, std::size_t n) {
  std::uniform_int_distribution<std::int64_t> exp(-3, 3);
  std::uniform_int_distribution<std::uint32_t> coeff(0, p - 1);
  std::uniform_int_distribution<int> nterms(0, 4);
  FieldElement x = FieldElement::zero(p, n);
  int k = nterms(rng);
  for (int i = 0; i < k; ++i) {
    std::vector<std::int64_t> ev;
    for (std::size_t j = 0; j < n; ++j) ev.push_back(exp(rng));
    x += FieldElement::monomial(p, coeff(rng), ExpVec(ev));
  }
  return x;
}

}  // namespace

TEST_CASE("construction and basic arithmetic") {
  FieldElement t1 = FieldElement::monomial(2, 1, {1, 0});
  FieldElement t2 = FieldElement::monomial(2, 1, {0, 1});
  CHECK((t1 + t1).is_zero());
  CHECK(t1 * t2 == FieldElement::monomial(2, 1, {1, 1}));
  FieldElement u = FieldElement::one(2, 2) + t1;
  CHECK(u * u == FieldElement::one(2, 2) + FieldElement::monomial(2, 1, {2, 0}));
  CHECK_THROWS_AS(FieldElement(4, 2), usage_error);
  CHECK_THROWS_AS(FieldElement::one(2, 2) + FieldElement::one(3, 2),
                  usage_error);
  CHECK_THROWS_AS(FieldElement::one(2, 2) + FieldElement::one(2, 3),
                  usage_error);
}

TEST_CASE("valuation") {
  CHECK(FieldElement::monomial(3, 1, {2, -1}).valuation() ==
        Valuation(ExpVec{2, -1}));
  FieldElement x = FieldElement::monomial(3, 1, {-3, 1}) +
                   FieldElement::monomial(3, 1, {1, 0});
  CHECK(x.valuation() == Valuation(ExpVec{1, 0}));
  CHECK(FieldElement::zero(3, 2).valuation().is_infinite());
}

TEST_CASE("valuation laws on random pairs") {
  std::mt19937_64 rng(99173);
  for (std::uint32_t p : {2u, 3u, 5u}) {
    for (int trial = 0; trial < 4000; ++trial) {
      FieldElement x = rnd_elem(rng, p, 2), y = rnd_elem(rng, p, 2);
      CHECK((x * y).valuation() == x.valuation() + y.valuation());
      Valuation vx = x.valuation(), vy = y.valuation();
      Valuation lo = Valuation::cmp(vx, vy) <= 0 ? vx : vy;
      CHECK((x + y).valuation() >= lo);
      if (Valuation::cmp(x.valuation(), y.valuation()) != 0)
        CHECK((x + y).valuation() == lo);
      CHECK(x + y == y + x);
      CHECK((x - y) + y == x);
      CHECK(x * (y + y) == x * y + x * y);
    }
  }
}

TEST_CASE("canonical truncation") {
  FieldElement x = FieldElement::monomial(5, 2, {-1, 0}) +
                   FieldElement::monomial(5, 3, {0, 0}) +
                   FieldElement::monomial(5, 4, {2, 1});
  FieldElement t = x.truncated_below(ExpVec{1, 1});
  // keeps exponents strictly below (1,1): (-1,0) and (0,0) stay
  CHECK(t == FieldElement::monomial(5, 2, {-1, 0}) +
                 FieldElement::monomial(5, 3, {0, 0}));
  CHECK(x.truncated_below(ExpVec{-5, -5}).is_zero());
}

TEST_CASE("text form matches the expression grammar") {
  CHECK(FieldElement::zero(2, 2).str() == "0");
  CHECK(FieldElement::one(2, 2).str() == "1");
  CHECK(FieldElement::monomial(2, 1, {0, -1}).str() == "t2^-1");
  CHECK(FieldElement::monomial(3, 2, {2, -1}).str() == "2*t1^2*t2^-1");
  FieldElement u = FieldElement::one(3, 2) + FieldElement::monomial(3, 1, {1, 0});
  CHECK(u.str() == "1 + t1");
  FieldElement w = FieldElement::monomial(2, 1, {-1, 1});
  CHECK(w.str() == "t1^-1*t2");
  // deterministic sort keys distinguish distinct elements
  CHECK(u.sort_key() != w.sort_key());
  CHECK(u.sort_key() == (FieldElement::one(3, 2) +
                         FieldElement::monomial(3, 1, {1, 0}))
                            .sort_key());
}
