#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdint>
#include <string>
#include <vector>

#include "grammar_corpus.hpp"
#include "levmeas/additive_family.hpp"
#include "levmeas/expr.hpp"
#include "levmeas/forest.hpp"
#include "levmeas/matrix_family.hpp"

using namespace levmeas;

namespace {

ExpVec ev(std::vector<std::int64_t> e) { return ExpVec(std::move(e)); }

FieldElement mono(std::uint32_t p, std::uint32_t c,
                  std::vector<std::int64_t> e) {
  return FieldElement::monomial(p, c, ExpVec(std::move(e)));
}

ExprConfig add_cfg(std::uint32_t p = 3, std::size_t dim = 2) {
  ExprConfig c;
  c.p = p;
  c.dim = dim;
  c.additive = true;
  return c;
}

ExprConfig mat_cfg(MatKind kind = MatKind::GL, std::uint32_t p = 2,
                   std::size_t dim = 2, std::size_t m = 2) {
  ExprConfig c;
  c.p = p;
  c.dim = dim;
  c.additive = false;
  c.mat_kind = kind;
  c.msize = m;
  return c;
}

std::string roundtrip(const std::string& text, const ExprConfig& cfg) {
  return print_expression(parse_expression(text, cfg));
}

void expect_parse_error(const std::string& text, const ExprConfig& cfg,
                        const std::string& msg, std::size_t line,
                        std::size_t col) {
  try {
    parse_expression(text, cfg);
    FAIL_CHECK("no diagnostic for: " << text);
  } catch (const parse_error& e) {
    CHECK(std::string(e.what()) == msg);
    CHECK(e.line() == line);
    CHECK(e.col() == col);
  }
}

}  // namespace

TEST_CASE("atoms parse to the expected tree") {
  ExprNode d = parse_expression("D(1 + t1; 2, 1)", add_cfg());
  CHECK(d.kind == ExprNode::Kind::Atom);
  CHECK_FALSE(d.matrix);
  CHECK(d.shift->str() == "1 + t1");
  CHECK(d.idx == std::vector<std::int64_t>{2, 1});
  CHECK(print_expression(d) == "D(1 + t1; 2, 1)");

  ExprNode diff = parse_expression("D(0;0,0) \\ D(0;0,1)", add_cfg());
  CHECK(diff.kind == ExprNode::Kind::Difference);
  CHECK(diff.kids[0].kind == ExprNode::Kind::Atom);
  CHECK(diff.kids[1].idx == std::vector<std::int64_t>{0, 1});
  CHECK(print_expression(diff) == "D(0; 0, 0) \\ D(0; 0, 1)");

  ExprNode k = parse_expression("K([[1,0],[t1,1]]; 1, 1)", mat_cfg());
  CHECK(k.kind == ExprNode::Kind::Atom);
  CHECK(k.matrix);
  CHECK(k.rep->str() == "[[1, 0], [t1, 1]]");
  CHECK(k.idx == std::vector<std::int64_t>{1, 1});
  CHECK(print_expression(k) == "K([[1, 0], [t1, 1]]; 1, 1)");

  // A positive index only needs a positive rightmost-significant entry.
  CHECK(roundtrip("K([[1, 0], [0, 1]]; -1, 1)", mat_cfg()) ==
        "K([[1, 0], [0, 1]]; -1, 1)");
  CHECK(roundtrip("K([[1, 0], [0, 1]]; 0, 1)", mat_cfg()) ==
        "K([[1, 0], [0, 1]]; 0, 1)");
}

TEST_CASE("printer canonicalizes spacing, parentheses, and coefficients") {
  const ExprConfig a = add_cfg();

  // whitespace and redundant parentheses
  CHECK(roundtrip("((D(0; 0, 0)))", a) == "D(0; 0, 0)");
  CHECK(roundtrip("D(0;0,0)|D(0;1,0)\\D(0;0,1)", a) ==
        "D(0; 0, 0) | D(0; 1, 0) \\ D(0; 0, 1)");
  CHECK(roundtrip("D(0; 0, 0) \\ (D(0; 1, 0) & D(0; 0, 1))", a) ==
        "D(0; 0, 0) \\ D(0; 1, 0) & D(0; 0, 1)");
  CHECK(roundtrip("(D(0; 0, 0) \\ D(0; 1, 0)) \\ D(0; 0, 1)", a) ==
        "D(0; 0, 0) \\ D(0; 1, 0) \\ D(0; 0, 1)");
  CHECK(roundtrip("(D(0; 0, 0) & D(0; 1, 0)) | D(0; 0, 1)", a) ==
        "D(0; 0, 0) & D(0; 1, 0) | D(0; 0, 1)");

  // structural parentheses survive
  CHECK(roundtrip("(D(0; 0, 0) | D(1; 0, 0)) \\ D(0; 1, 0)", a) ==
        "(D(0; 0, 0) | D(1; 0, 0)) \\ D(0; 1, 0)");
  CHECK(roundtrip("D(0; 0, 0) \\ (D(0; 1, 0) \\ D(0; 2, 0))", a) ==
        "D(0; 0, 0) \\ (D(0; 1, 0) \\ D(0; 2, 0))");

  // shift polynomials are reduced and reordered
  CHECK(roundtrip("D(t1 + 1; 2, 1)", a) == "D(1 + t1; 2, 1)");
  CHECK(roundtrip("D(2*t1 + 2*t1; 1, 0)", a) == "D(t1; 1, 0)");
  CHECK(roundtrip("D(1 + 2; 0, 0)", a) == "D(0; 0, 0)");
  CHECK(roundtrip("D(t1*t1; 0, 0)", a) == "D(t1^2; 0, 0)");
  CHECK(roundtrip("D(t2^-1 + t1^-1; 0, 0)", a) == "D(t2^-1 + t1^-1; 0, 0)");
}

TEST_CASE("translation polynomials stop at the final plus") {
  const ExprConfig a = add_cfg();

  CHECK(roundtrip("t2^-1 + 1 + D(0; 0, 1)", a) == "t2^-1 + 1 + D(0; 0, 1)");
  CHECK(roundtrip("t1 + (t2 + D(0; 0, 0))", a) == "t1 + (t2 + D(0; 0, 0))");
  CHECK(roundtrip("t1^-1 + (D(0; 0, 0) | D(0; 0, 1))", a) ==
        "t1^-1 + (D(0; 0, 0) | D(0; 0, 1))");

  ExprNode t = parse_expression("t2^-1 + 1 + D(0; 0, 1)", a);
  CHECK(t.kind == ExprNode::Kind::Translate);
  CHECK(t.shift->str() == "t2^-1 + 1");
  CHECK(t.kids[0].kind == ExprNode::Kind::Atom);

  // reduction mod p inside translations
  CHECK(roundtrip("1 + 1 + D(0; 0, 0)", a) == "2 + D(0; 0, 0)");
  CHECK(roundtrip("5*t1 + D(0; 0, 0)", a) == "2*t1 + D(0; 0, 0)");
  CHECK(roundtrip("-t1 + D(0; 0, 0)", a) == "2*t1 + D(0; 0, 0)");
  CHECK(roundtrip("-2 + D(0; 0, 0)", a) == "1 + D(0; 0, 0)");
  CHECK(roundtrip("t1*t1^-1 + D(0; 0, 0)", a) == "1 + D(0; 0, 0)");
  CHECK(roundtrip("0 + D(0; 0, 0)", a) == "0 + D(0; 0, 0)");
  CHECK(roundtrip("1 + 1 + D(0; 0, 0)", add_cfg(2)) == "0 + D(0; 0, 0)");

  // a translation binds one primary, so operators stay outside
  ExprNode u = parse_expression("t1 + D(0; 1, 0) & D(0; 0, 1)", a);
  CHECK(u.kind == ExprNode::Kind::Intersect);
  CHECK(u.kids[0].kind == ExprNode::Kind::Translate);

  const ExprConfig m = mat_cfg();
  CHECK(roundtrip("[[0, 1], [1, 0]] * ([[1, t1], [0, 1]] * "
                  "K([[1, 0], [0, 1]]; 2, 0))",
                  m) ==
        "[[0, 1], [1, 0]] * ([[1, t1], [0, 1]] * K([[1, 0], [0, 1]]; 2, 0))");
  ExprNode g = parse_expression(
      "[[1, t1], [0, 1]] * K([[1, 0], [0, 1]]; 2, 0) \\ "
      "K([[1, 0], [0, 1]]; 3, 0)",
      m);
  CHECK(g.kind == ExprNode::Kind::Difference);
  CHECK(g.kids[0].kind == ExprNode::Kind::Translate);
}

TEST_CASE("diagnostics carry message, line, and column") {
  const ExprConfig a = add_cfg();
  const ExprConfig m = mat_cfg();
  const ExprConfig s = mat_cfg(MatKind::SL);

  expect_parse_error("D(0; 0, 1) |", a, "expected a set expression", 1, 13);
  expect_parse_error("D(0; 0, 0) \\", a, "expected a set expression", 1, 13);
  expect_parse_error("", a, "expected a set expression", 1, 1);
  expect_parse_error("D(0; 0)", a, "index vector must have 2 entries", 1, 1);
  expect_parse_error("D(0; 0, 0, 0)", a, "index vector must have 2 entries", 1,
                     1);
  expect_parse_error("D(0; 0, 0) D(0; 0, 1)", a, "unexpected trailing input",
                     1, 12);
  expect_parse_error("D(0; 0, 0) @", a, "unexpected character '@'", 1, 12);
  expect_parse_error("1234567890123456 + D(0; 0, 0)", a,
                     "integer literal too large", 1, 1);
  expect_parse_error("t1 + t2", a, "expected '+' and a set to translate", 1,
                     8);
  expect_parse_error("D(x; 0, 0)", a, "expected a polynomial term", 1, 3);
  expect_parse_error("D(t3; 0, 0)", a, "variable t3 is outside t1..t2", 1, 3);
  expect_parse_error("D(t1^; 0, 0)", a, "expected an exponent", 1, 6);
  expect_parse_error("D(0; 0, 0) |\n  @", a, "unexpected character '@'", 2, 3);

  // family mismatches
  expect_parse_error("K([[1, 0], [0, 1]]; 1, 0)", a,
                     "K atoms require a matrix family", 1, 1);
  expect_parse_error("[[1, 0], [0, 1]] * D(0; 0, 0)", a,
                     "matrix literals require a matrix family", 1, 1);
  expect_parse_error("D(0; 0, 0)", m, "D atoms require the additive family",
                     1, 1);
  expect_parse_error("t1 + K([[1, 0], [0, 1]]; 1, 0)", m,
                     "polynomial translation requires the additive family", 1,
                     1);

  // matrix literal validation
  expect_parse_error("K([[1, 0], [0, 1]]; 0, 0)", m,
                     "matrix cell index must be positive", 1, 1);
  expect_parse_error("K([[1, 0], [0, 1]]; 1, -1)", m,
                     "matrix cell index must be positive", 1, 1);
  expect_parse_error("K([[1, 1], [1, 1]]; 1, 0)", m,
                     "matrix literal is singular", 1, 1);
  expect_parse_error("K([[1, 0, 0], [0, 1]]; 1, 0)", m,
                     "matrix literal must have 2 rows of 2 entries", 1, 3);
  expect_parse_error("K([[t1, 0], [0, 1]]; 1, 0)", s,
                     "determinant must be 1 in the special linear family", 1,
                     1);
  expect_parse_error("[[t1, 0], [0, 1]] * K([[1, 0], [0, 1]]; 1, 0)", s,
                     "determinant must be 1 in the special linear family", 1,
                     1);
  expect_parse_error("[[1, 1], [1, 1]] * K([[1, 0], [0, 1]]; 1, 0)", m,
                     "translation matrix is singular", 1, 1);
  expect_parse_error("[[1, 0], [0, 1]] + K([[1, 0], [0, 1]]; 1, 0)", m,
                     "expected '*'", 1, 18);
}

TEST_CASE("round trip on the additive corpus") {
  const ExprConfig cfg = add_cfg();
  const AdditiveFamily fam(3, 2);
  CHECK(grammar_corpus::additive_count == 120);
  for (std::size_t i = 0; i < grammar_corpus::additive_count; ++i) {
    const std::string text = grammar_corpus::additive[i];
    CAPTURE(text);
    ExprNode node = parse_expression(text, cfg);
    CHECK(print_expression(node) == text);

    auto f = to_forest(node, fam);
    MeasureValue mu = f.measure();
    CHECK_FALSE(mu < MeasureValue::zero(1));
    std::string canon = f.canonical_expression();
    if (canon != "empty") {
      auto again = to_forest(parse_expression(canon, cfg), fam);
      CHECK(set_equal(f, again));
      CHECK(again.measure() == mu);
    } else {
      CHECK(mu == MeasureValue::zero(1));
    }
  }
}

TEST_CASE("round trip on the matrix corpus") {
  const ExprConfig cfg = mat_cfg();
  const MatrixFamily fam(2, 2, 2, MatKind::GL, MatSide::Left);
  CHECK(grammar_corpus::matrix_count == 80);
  CHECK(grammar_corpus::additive_count + grammar_corpus::matrix_count == 200);
  for (std::size_t i = 0; i < grammar_corpus::matrix_count; ++i) {
    const std::string text = grammar_corpus::matrix[i];
    CAPTURE(text);
    ExprNode node = parse_expression(text, cfg);
    CHECK(print_expression(node) == text);

    auto f = to_forest(node, fam);
    MeasureValue mu = f.measure();
    CHECK_FALSE(mu < MeasureValue::zero(1));
    std::string canon = f.canonical_expression();
    if (canon != "empty") {
      auto again = to_forest(parse_expression(canon, cfg), fam);
      CHECK(set_equal(f, again));
      CHECK(again.measure() == mu);
    } else {
      CHECK(mu == MeasureValue::zero(1));
    }
  }
}

TEST_CASE("evaluation matches direct forest construction") {
  {
    const AdditiveFamily fam(2, 2);
    const ExprConfig cfg = add_cfg(2);
    auto f = to_forest(parse_expression("D(0; 2, 3)", cfg), fam);
    CHECK(f.measure().str() == "1/4 * Y^3");
    auto whole = to_forest(parse_expression("D(0; 0, 0)", cfg), fam);
    CHECK(whole.measure().str() == "1");

    auto hole = to_forest(parse_expression("D(0; 0, 0) \\ D(0; 0, 1)", cfg),
                          fam);
    auto direct = forest_difference(
        SetForest<AdditiveFamily>::from_cell(
            fam, fam.make_cell(FieldElement::zero(2, 2), ev({0, 0}))),
        SetForest<AdditiveFamily>::from_cell(
            fam, fam.make_cell(FieldElement::zero(2, 2), ev({0, 1}))));
    CHECK(set_equal(hole, direct));

    auto shifted = to_forest(parse_expression("t1^-1 + D(0; 1, 0)", cfg), fam);
    auto shifted_direct = SetForest<AdditiveFamily>::from_cell(
        fam, fam.make_cell(mono(2, 1, {-1, 0}), ev({1, 0})));
    CHECK(set_equal(shifted, shifted_direct));
    CHECK_FALSE(set_equal(
        shifted, SetForest<AdditiveFamily>::from_cell(
                     fam, fam.make_cell(FieldElement::zero(2, 2),
                                        ev({1, 0})))));
  }
  {
    const MatrixFamily fam(2, 2, 2, MatKind::GL, MatSide::Left);
    const ExprConfig cfg = mat_cfg();
    auto f = to_forest(parse_expression("K([[1, 0], [0, 1]]; 1, 0)", cfg),
                       fam);
    CHECK(f.measure().str() == "1/6");

    FieldMatrix g(2, 2, 2);
    g.at(0, 0) = FieldElement::one(2, 2);
    g.at(1, 1) = FieldElement::one(2, 2);
    g.at(0, 1) = mono(2, 1, {1, 0});
    auto moved = to_forest(
        parse_expression("[[1, t1], [0, 1]] * K([[1, 0], [0, 1]]; 2, 0)",
                         cfg),
        fam);
    auto moved_direct = SetForest<MatrixFamily>::from_cell(
        fam, fam.make_cell(g, ev({2, 0})));
    CHECK(set_equal(moved, moved_direct));
    CHECK_FALSE(set_equal(
        moved, to_forest(parse_expression("K([[1, 0], [0, 1]]; 2, 0)", cfg),
                         fam)));
  }
}

TEST_CASE("family mismatch is rejected at evaluation") {
  const AdditiveFamily add_fam(2, 2);
  const MatrixFamily mat_fam(2, 2, 2, MatKind::GL, MatSide::Left);
  ExprNode d = parse_expression("D(0; 0, 0)", add_cfg(2));
  ExprNode k = parse_expression("K([[1, 0], [0, 1]]; 1, 0)", mat_cfg());
  CHECK_THROWS_AS(to_forest(d, mat_fam), usage_error);
  CHECK_THROWS_AS(to_forest(k, add_fam), usage_error);
}
