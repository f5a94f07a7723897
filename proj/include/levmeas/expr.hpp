#pragma once

// Text expressions over distinguished-set atoms.  The grammar (see
// docs/grammar.ebnf) has three left-associative binary operators with
// union `|` binding loosest, then difference `\`, then intersection `&`,
// plus polynomial translation `g + E` for additive families and matrix
// translation `g * E` for matrix families.  Parsing is configured with the
// field parameters and the family, so literals are validated immediately;
// the printer emits the canonical spelling that parses back to the same
// tree.

#include <cctype>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "levmeas/additive_family.hpp"
#include "levmeas/forest.hpp"
#include "levmeas/matrix_family.hpp"

namespace levmeas {

struct ExprConfig {
  std::uint32_t p = 2;
  std::size_t dim = 2;
  bool additive = true;
  MatKind mat_kind = MatKind::GL;  // used when additive is false
  std::size_t msize = 2;           // used when additive is false
};

class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& msg, std::size_t line, std::size_t col)
      : std::runtime_error(msg), line_(line), col_(col) {}
  std::size_t line() const { return line_; }
  std::size_t col() const { return col_; }

 private:
  std::size_t line_;
  std::size_t col_;
};

struct ExprNode {
  enum class Kind { Atom, Union, Intersect, Difference, Translate };
  Kind kind = Kind::Atom;
  bool matrix = false;                // atom flavour / translation flavour
  std::optional<FieldElement> shift;  // D shift or additive translation
  std::optional<FieldMatrix> rep;     // K representative or matrix translation
  std::vector<std::int64_t> idx;      // atom index vector
  std::vector<ExprNode> kids;         // 2 for binary nodes, 1 for translation
};

namespace expr_detail {

enum class Tok {
  End,
  Int,
  Word,
  LParen,
  RParen,
  LBrack,
  RBrack,
  Semi,
  Comma,
  Pipe,
  Amp,
  Diff,
  Plus,
  Star,
  Caret,
  Minus,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::int64_t num = 0;
  std::size_t line = 1;
  std::size_t col = 1;
};

inline std::vector<Token> lex(const std::string& s) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  while (i < s.size()) {
    char ch = s[i];
    if (ch == '\n') {
      ++i;
      ++line;
      col = 1;
      continue;
    }
    if (ch == ' ' || ch == '\t' || ch == '\r') {
      ++i;
      ++col;
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
        t.text += s[i];
        ++i;
        ++col;
      }
      if (t.text.size() > 15)
        throw parse_error("integer literal too large", t.line, t.col);
      t.kind = Tok::Int;
      t.num = std::stoll(t.text);
      out.push_back(std::move(t));
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(ch))) {
      while (i < s.size() && std::isalnum(static_cast<unsigned char>(s[i]))) {
        t.text += s[i];
        ++i;
        ++col;
      }
      t.kind = Tok::Word;
      out.push_back(std::move(t));
      continue;
    }
    switch (ch) {
      case '(': t.kind = Tok::LParen; break;
      case ')': t.kind = Tok::RParen; break;
      case '[': t.kind = Tok::LBrack; break;
      case ']': t.kind = Tok::RBrack; break;
      case ';': t.kind = Tok::Semi; break;
      case ',': t.kind = Tok::Comma; break;
      case '|': t.kind = Tok::Pipe; break;
      case '&': t.kind = Tok::Amp; break;
      case '\\': t.kind = Tok::Diff; break;
      case '+': t.kind = Tok::Plus; break;
      case '*': t.kind = Tok::Star; break;
      case '^': t.kind = Tok::Caret; break;
      case '-': t.kind = Tok::Minus; break;
      default:
        throw parse_error(std::string("unexpected character '") + ch + "'",
                          t.line, t.col);
    }
    t.text = std::string(1, ch);
    out.push_back(std::move(t));
    ++i;
    ++col;
  }
  Token end;
  end.kind = Tok::End;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

class Parser {
 public:
  Parser(const std::string& text, const ExprConfig& cfg)
      : toks_(lex(text)), cfg_(cfg) {}

  ExprNode parse() {
    ExprNode e = parse_union();
    if (!at(Tok::End))
      throw parse_error("unexpected trailing input", peek().line, peek().col);
    return e;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    std::size_t k = pos_ + ahead;
    if (k >= toks_.size()) k = toks_.size() - 1;
    return toks_[k];
  }
  bool at(Tok k) const { return peek().kind == k; }
  void advance() {
    if (pos_ + 1 < toks_.size()) ++pos_;
  }
  void expect(Tok k, const char* what) {
    if (!at(k))
      throw parse_error(std::string("expected ") + what, peek().line,
                        peek().col);
    advance();
  }

  static ExprNode binary(ExprNode::Kind k, ExprNode a, ExprNode b) {
    ExprNode n;
    n.kind = k;
    n.kids.push_back(std::move(a));
    n.kids.push_back(std::move(b));
    return n;
  }

  ExprNode parse_union() {
    ExprNode a = parse_diff();
    while (at(Tok::Pipe)) {
      advance();
      a = binary(ExprNode::Kind::Union, std::move(a), parse_diff());
    }
    return a;
  }

  ExprNode parse_diff() {
    ExprNode a = parse_inter();
    while (at(Tok::Diff)) {
      advance();
      a = binary(ExprNode::Kind::Difference, std::move(a), parse_inter());
    }
    return a;
  }

  ExprNode parse_inter() {
    ExprNode a = parse_primary();
    while (at(Tok::Amp)) {
      advance();
      a = binary(ExprNode::Kind::Intersect, std::move(a), parse_primary());
    }
    return a;
  }

  ExprNode parse_primary() {
    const Token t = peek();
    if (t.kind == Tok::Word && t.text == "D") return parse_atom_d();
    if (t.kind == Tok::Word && t.text == "K") return parse_atom_k();
    if (t.kind == Tok::LParen) {
      advance();
      ExprNode e = parse_union();
      expect(Tok::RParen, "')'");
      return e;
    }
    if (t.kind == Tok::LBrack) {
      if (cfg_.additive)
        throw parse_error("matrix literals require a matrix family", t.line,
                          t.col);
      FieldMatrix g = parse_matrix_literal();
      FieldElement d = g.det();
      if (d.is_zero())
        throw parse_error("translation matrix is singular", t.line, t.col);
      if (cfg_.mat_kind == MatKind::SL &&
          d != FieldElement::one(cfg_.p, cfg_.dim))
        throw parse_error(
            "determinant must be 1 in the special linear family", t.line,
            t.col);
      expect(Tok::Star, "'*'");
      ExprNode n;
      n.kind = ExprNode::Kind::Translate;
      n.matrix = true;
      n.rep = std::move(g);
      n.kids.push_back(parse_primary());
      return n;
    }
    if (starts_poly(t)) {
      if (!cfg_.additive)
        throw parse_error("polynomial translation requires the additive family",
                          t.line, t.col);
      FieldElement g = parse_translation_poly();
      ExprNode n;
      n.kind = ExprNode::Kind::Translate;
      n.matrix = false;
      n.shift = std::move(g);
      n.kids.push_back(parse_primary());
      return n;
    }
    throw parse_error("expected a set expression", t.line, t.col);
  }

  static bool is_var_token(const Token& t) {
    if (t.kind != Tok::Word || t.text.size() < 2 || t.text[0] != 't')
      return false;
    for (std::size_t i = 1; i < t.text.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(t.text[i]))) return false;
    return true;
  }

  static bool starts_poly(const Token& t) {
    return t.kind == Tok::Int || t.kind == Tok::Minus || is_var_token(t);
  }

  // A polynomial whose final '+' hands over to a set expression.
  FieldElement parse_translation_poly() {
    FieldElement acc = parse_poly_term();
    for (;;) {
      if (!at(Tok::Plus))
        throw parse_error("expected '+' and a set to translate", peek().line,
                          peek().col);
      const Token& nxt = peek(1);
      bool set_next = nxt.kind == Tok::LParen ||
                      (nxt.kind == Tok::Word &&
                       (nxt.text == "D" || nxt.text == "K"));
      advance();  // the '+'
      if (set_next) return acc;
      acc = acc + parse_poly_term();
    }
  }

  FieldElement parse_poly() {
    FieldElement acc = parse_poly_term();
    while (at(Tok::Plus)) {
      advance();
      acc = acc + parse_poly_term();
    }
    return acc;
  }

  FieldElement parse_poly_term() {
    bool neg = false;
    if (at(Tok::Minus)) {
      advance();
      neg = true;
    }
    const Token t = peek();
    std::uint32_t coeff = 0;
    ExpVec exp = ExpVec::zero(cfg_.dim);
    if (t.kind == Tok::Int) {
      advance();
      coeff = static_cast<std::uint32_t>(t.num % cfg_.p);
      if (at(Tok::Star)) {
        advance();
        exp = parse_monomial();
      }
    } else if (is_var_token(t)) {
      coeff = 1;
      exp = parse_monomial();
    } else {
      throw parse_error("expected a polynomial term", t.line, t.col);
    }
    if (neg && coeff != 0) coeff = cfg_.p - coeff;
    return FieldElement::monomial(cfg_.p, coeff, exp);
  }

  ExpVec parse_monomial() {
    ExpVec e = ExpVec::zero(cfg_.dim);
    for (;;) {
      apply_var(e);
      if (at(Tok::Star) && is_var_token(peek(1))) {
        advance();
        continue;
      }
      return e;
    }
  }

  void apply_var(ExpVec& e) {
    const Token t = peek();
    if (!is_var_token(t))
      throw parse_error("expected a variable like t1", t.line, t.col);
    if (t.text.size() > 7)
      throw parse_error("variable subscript too large", t.line, t.col);
    std::size_t k = static_cast<std::size_t>(std::stoll(t.text.substr(1)));
    if (k < 1 || k > cfg_.dim)
      throw parse_error(
          "variable " + t.text + " is outside t1..t" +
              std::to_string(cfg_.dim),
          t.line, t.col);
    advance();
    std::int64_t ex = 1;
    if (at(Tok::Caret)) {
      advance();
      ex = parse_signed_int("an exponent");
    }
    e[k - 1] += ex;
  }

  std::int64_t parse_signed_int(const char* what) {
    bool neg = false;
    if (at(Tok::Minus)) {
      advance();
      neg = true;
    }
    if (!at(Tok::Int))
      throw parse_error(std::string("expected ") + what, peek().line,
                        peek().col);
    std::int64_t v = peek().num;
    advance();
    return neg ? -v : v;
  }

  std::vector<std::int64_t> parse_indices() {
    std::vector<std::int64_t> v;
    v.push_back(parse_signed_int("an integer index"));
    while (at(Tok::Comma)) {
      advance();
      v.push_back(parse_signed_int("an integer index"));
    }
    return v;
  }

  ExprNode parse_atom_d() {
    const Token start = peek();
    if (!cfg_.additive)
      throw parse_error("D atoms require the additive family", start.line,
                        start.col);
    advance();
    expect(Tok::LParen, "'('");
    FieldElement shift = parse_poly();
    expect(Tok::Semi, "';'");
    std::vector<std::int64_t> idx = parse_indices();
    expect(Tok::RParen, "')'");
    if (idx.size() != cfg_.dim)
      throw parse_error(
          "index vector must have " + std::to_string(cfg_.dim) + " entries",
          start.line, start.col);
    ExprNode n;
    n.kind = ExprNode::Kind::Atom;
    n.matrix = false;
    n.shift = std::move(shift);
    n.idx = std::move(idx);
    return n;
  }

  ExprNode parse_atom_k() {
    const Token start = peek();
    if (cfg_.additive)
      throw parse_error("K atoms require a matrix family", start.line,
                        start.col);
    advance();
    expect(Tok::LParen, "'('");
    FieldMatrix rep = parse_matrix_literal();
    expect(Tok::Semi, "';'");
    std::vector<std::int64_t> idx = parse_indices();
    expect(Tok::RParen, "')'");
    if (idx.size() != cfg_.dim)
      throw parse_error(
          "index vector must have " + std::to_string(cfg_.dim) + " entries",
          start.line, start.col);
    if (ExpVec::cmp(ExpVec(std::vector<std::int64_t>(idx)),
                    ExpVec::zero(cfg_.dim)) <= 0)
      throw parse_error("matrix cell index must be positive", start.line,
                        start.col);
    FieldElement d = rep.det();
    if (d.is_zero())
      throw parse_error("matrix literal is singular", start.line, start.col);
    if (cfg_.mat_kind == MatKind::SL &&
        d != FieldElement::one(cfg_.p, cfg_.dim))
      throw parse_error("determinant must be 1 in the special linear family",
                        start.line, start.col);
    ExprNode n;
    n.kind = ExprNode::Kind::Atom;
    n.matrix = true;
    n.rep = std::move(rep);
    n.idx = std::move(idx);
    return n;
  }

  FieldMatrix parse_matrix_literal() {
    const Token start = peek();
    expect(Tok::LBrack, "'['");
    std::vector<std::vector<FieldElement>> rows;
    rows.push_back(parse_matrix_row());
    while (at(Tok::Comma)) {
      advance();
      rows.push_back(parse_matrix_row());
    }
    expect(Tok::RBrack, "']'");
    bool shaped = rows.size() == cfg_.msize;
    for (const auto& r : rows) shaped = shaped && r.size() == cfg_.msize;
    if (!shaped)
      throw parse_error("matrix literal must have " +
                            std::to_string(cfg_.msize) + " rows of " +
                            std::to_string(cfg_.msize) + " entries",
                        start.line, start.col);
    FieldMatrix g(cfg_.p, cfg_.dim, cfg_.msize);
    for (std::size_t i = 0; i < cfg_.msize; ++i)
      for (std::size_t j = 0; j < cfg_.msize; ++j) g.at(i, j) = rows[i][j];
    return g;
  }

  std::vector<FieldElement> parse_matrix_row() {
    expect(Tok::LBrack, "'['");
    std::vector<FieldElement> row;
    row.push_back(parse_poly());
    while (at(Tok::Comma)) {
      advance();
      row.push_back(parse_poly());
    }
    expect(Tok::RBrack, "']'");
    return row;
  }

  std::vector<Token> toks_;
  ExprConfig cfg_;
  std::size_t pos_ = 0;
};

inline int prec(ExprNode::Kind k) {
  switch (k) {
    case ExprNode::Kind::Union: return 1;
    case ExprNode::Kind::Difference: return 2;
    case ExprNode::Kind::Intersect: return 3;
    default: return 4;
  }
}

inline void print_rec(const ExprNode& n, std::string& out);

inline void print_child(const ExprNode& c, int parent, bool right,
                        std::string& out) {
  int cp = prec(c.kind);
  bool parens = cp < parent || (right && cp == parent);
  if (parens) out += "(";
  print_rec(c, out);
  if (parens) out += ")";
}

inline void print_rec(const ExprNode& n, std::string& out) {
  switch (n.kind) {
    case ExprNode::Kind::Atom: {
      out += n.matrix ? "K(" + n.rep->str() : "D(" + n.shift->str();
      out += "; ";
      for (std::size_t i = 0; i < n.idx.size(); ++i) {
        if (i) out += ", ";
        out += std::to_string(n.idx[i]);
      }
      out += ")";
      return;
    }
    case ExprNode::Kind::Union:
      print_child(n.kids[0], 1, false, out);
      out += " | ";
      print_child(n.kids[1], 1, true, out);
      return;
    case ExprNode::Kind::Difference:
      print_child(n.kids[0], 2, false, out);
      out += " \\ ";
      print_child(n.kids[1], 2, true, out);
      return;
    case ExprNode::Kind::Intersect:
      print_child(n.kids[0], 3, false, out);
      out += " & ";
      print_child(n.kids[1], 3, true, out);
      return;
    case ExprNode::Kind::Translate:
      out += n.matrix ? n.rep->str() + " * " : n.shift->str() + " + ";
      if (n.kids[0].kind == ExprNode::Kind::Atom) {
        print_rec(n.kids[0], out);
      } else {
        out += "(";
        print_rec(n.kids[0], out);
        out += ")";
      }
      return;
  }
}

}  // namespace expr_detail

inline ExprNode parse_expression(const std::string& text,
                                 const ExprConfig& cfg) {
  return expr_detail::Parser(text, cfg).parse();
}

inline std::string print_expression(const ExprNode& n) {
  std::string out;
  expr_detail::print_rec(n, out);
  return out;
}

inline AdditiveFamily::Cell expr_atom_cell(const AdditiveFamily& fam,
                                           const ExprNode& n) {
  if (n.matrix)
    throw usage_error("expression was parsed for a different family");
  return fam.make_cell(*n.shift, ExpVec(std::vector<std::int64_t>(n.idx)));
}

inline MatrixFamily::Cell expr_atom_cell(const MatrixFamily& fam,
                                         const ExprNode& n) {
  if (!n.matrix)
    throw usage_error("expression was parsed for a different family");
  return fam.make_cell(*n.rep, ExpVec(std::vector<std::int64_t>(n.idx)));
}

inline FieldElement expr_translation(const AdditiveFamily&,
                                     const ExprNode& n) {
  if (n.matrix)
    throw usage_error("expression was parsed for a different family");
  return *n.shift;
}

inline FieldMatrix expr_translation(const MatrixFamily&, const ExprNode& n) {
  if (!n.matrix)
    throw usage_error("expression was parsed for a different family");
  return *n.rep;
}

template <class Family>
SetForest<Family> to_forest(const ExprNode& n, const Family& fam) {
  using Forest = SetForest<Family>;
  switch (n.kind) {
    case ExprNode::Kind::Atom:
      return Forest::from_cell(fam, expr_atom_cell(fam, n));
    case ExprNode::Kind::Union:
      return forest_union(to_forest(n.kids[0], fam),
                          to_forest(n.kids[1], fam));
    case ExprNode::Kind::Intersect:
      return forest_intersect(to_forest(n.kids[0], fam),
                              to_forest(n.kids[1], fam));
    case ExprNode::Kind::Difference:
      return forest_difference(to_forest(n.kids[0], fam),
                               to_forest(n.kids[1], fam));
    case ExprNode::Kind::Translate:
      return to_forest(n.kids[0], fam).translated(expr_translation(fam, n));
  }
  throw usage_error("unreachable expression node");
}

}  // namespace levmeas
