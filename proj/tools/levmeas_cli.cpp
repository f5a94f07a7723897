// levmeas: exact measures of distinguished-set expressions over
// F_p((t1))...((tn)) and its matrix groups.  Results go to stdout,
// diagnostics to stderr; the exit code is 0 exactly when no diagnostic
// was emitted.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "levmeas/additive_family.hpp"
#include "levmeas/expr.hpp"
#include "levmeas/forest.hpp"
#include "levmeas/matrix_family.hpp"
#include "levmeas/oracle.hpp"

using namespace levmeas;
using nlohmann::json;

namespace {

struct Options {
  std::uint32_t p = 2;
  std::size_t dim = 2;
  std::string family = "additive";
  bool paper_scaling = false;
  bool json_out = false;
  std::string command;
  std::vector<std::string> exprs;
};

struct FamilySpec {
  bool additive = true;
  MatKind kind = MatKind::GL;
  std::size_t msize = 2;
};

FamilySpec parse_family(const std::string& s) {
  FamilySpec f;
  if (s == "additive") return f;
  f.additive = false;
  if (s.rfind("gl:", 0) == 0)
    f.kind = MatKind::GL;
  else if (s.rfind("sl:", 0) == 0)
    f.kind = MatKind::SL;
  else
    throw usage_error("family must be additive, gl:M, or sl:M");
  const std::string num = s.substr(3);
  if (num.empty() || num.size() > 2)
    throw usage_error("family must be additive, gl:M, or sl:M");
  std::size_t m = 0;
  for (char ch : num) {
    if (ch < '0' || ch > '9')
      throw usage_error("family must be additive, gl:M, or sl:M");
    m = m * 10 + static_cast<std::size_t>(ch - '0');
  }
  f.msize = m;
  return f;
}

std::size_t command_arity(const std::string& cmd) {
  if (cmd == "index" || cmd == "compare") return 2;
  if (cmd == "measure" || cmd == "canon" || cmd == "level" ||
      cmd == "uniform-level" || cmd == "classify" || cmd == "oracle-check")
    return 1;
  throw usage_error("unknown command '" + cmd + "'");
}

json measure_json(const MeasureValue& mv, const std::string& var,
                  std::int64_t scale) {
  json terms = json::array();
  for (const auto& [exp, coeff] : mv.terms()) {
    json exps = json::array();
    for (std::size_t i = 0; i < exp.arity(); ++i) exps.push_back(exp[i] * scale);
    terms.push_back({{"coeff", rational_str(coeff)}, {"exp", exps}});
  }
  return json{{"var", var}, {"terms", terms}};
}

template <class Family>
int run(const Family& fam, const ExprConfig& cfg, const Options& opt,
        std::int64_t scale) {
  const std::string var = opt.paper_scaling ? "X" : "Y";
  auto eval = [&](const std::string& text) {
    return to_forest(parse_expression(text, cfg), fam);
  };

  std::string text;
  json result;

  if (opt.command == "measure") {
    MeasureValue mv = eval(opt.exprs[0]).measure();
    text = mv.str(var.c_str(), scale) + "\n";
    result = measure_json(mv, var, scale);
  } else if (opt.command == "canon") {
    text = eval(opt.exprs[0]).canonical_expression() + "\n";
    result = text.substr(0, text.size() - 1);
  } else if (opt.command == "level") {
    auto lv = eval(opt.exprs[0]).level_of();
    text = (lv ? lv->str() : std::string("empty")) + "\n";
    result = text.substr(0, text.size() - 1);
  } else if (opt.command == "uniform-level") {
    auto u = eval(opt.exprs[0]).uniform_level();
    using Kind = typename SetForest<Family>::UniformResult::Kind;
    if (u.kind == Kind::Empty)
      text = "empty\n";
    else if (u.kind == Kind::Uniform)
      text = u.level->str() + "\n";
    else
      text = "not uniform; witness: " + u.witness->str() + "\n";
    result = text.substr(0, text.size() - 1);
  } else if (opt.command == "classify") {
    auto c = eval(opt.exprs[0]).classify();
    if (c.type == SetType::TypeS) {
      text = "type S (empty)\n";
    } else {
      text = "level " + c.level->str() +
             (c.uniform ? "; uniform"
                        : "; not uniform; witness: " + c.witness->str()) +
             "\n";
    }
    result = text.substr(0, text.size() - 1);
  } else if (opt.command == "index") {
    auto inner = eval(opt.exprs[0]);
    auto outer = eval(opt.exprs[1]);
    auto ic = inner.all_cells();
    auto oc = outer.all_cells();
    if (ic.size() != 1 || oc.size() != 1)
      throw usage_error("index requires single distinguished sets");
    IndexResult r = cell_index(fam, ic[0], oc[0]);
    text = r.str() + "\n";
    result = json{{"finite", r.finite}};
    if (r.finite) {
      result["exponent"] = r.exponent;
      result["value"] = r.value.str();
    }
  } else if (opt.command == "compare") {
    auto a = eval(opt.exprs[0]);
    auto b = eval(opt.exprs[1]);
    std::string verdict;
    if (set_equal(a, b))
      verdict = "equal";
    else if (forest_difference(a, b).all_cells().empty())
      verdict = "first-inside-second";
    else if (forest_difference(b, a).all_cells().empty())
      verdict = "second-inside-first";
    else if (forest_intersect(a, b).all_cells().empty())
      verdict = "disjoint";
    else
      verdict = "overlap";
    text = verdict + "\n";
    result = verdict;
  } else {  // oracle-check
    auto f = eval(opt.exprs[0]);
    MeasureValue mv = f.measure();
    MeasureValue ov = f.level_of()
                          ? oracle_single_level_measure(fam, f, *f.level_of())
                          : MeasureValue::zero(fam.elevation());
    if (!(mv == ov))
      throw std::logic_error("oracle disagrees with the measure");
    text = "measure: " + mv.str(var.c_str(), scale) + "\noracle: " +
           ov.str(var.c_str(), scale) + "\nexact agreement\n";
    result = json{{"measure", measure_json(mv, var, scale)},
                  {"oracle", measure_json(ov, var, scale)},
                  {"agreement", "exact"}};
  }

  if (opt.json_out) {
    json out{{"command", opt.command}, {"input", opt.exprs},
             {"result", result},      {"family", opt.family},
             {"p", opt.p},            {"dim", opt.dim}};
    std::cout << out.dump() << "\n";
  } else {
    std::cout << text;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  CLI::App app{
      "Exact finitely additive measures on higher-dimensional local fields"};
  app.add_option("--p", opt.p, "residue characteristic (prime)")
      ->capture_default_str();
  app.add_option("--dim", opt.dim, "number of local parameters t1..tn")
      ->capture_default_str();
  app.add_option("--family", opt.family, "additive, gl:M, or sl:M")
      ->capture_default_str();
  app.add_flag("--paper-scaling", opt.paper_scaling,
               "print matrix measures in X with exponents scaled by the "
               "congruence weight");
  app.add_flag("--json", opt.json_out, "emit a JSON object instead of text");
  app.add_option("command", opt.command,
                 "measure|canon|level|uniform-level|index|compare|classify|"
                 "oracle-check")
      ->required();
  app.add_option("expr", opt.exprs, "set expression(s)")->expected(-1);

  CLI11_PARSE(app, argc, argv);

  try {
    std::size_t need = command_arity(opt.command);
    if (opt.exprs.size() != need)
      throw usage_error("command '" + opt.command + "' takes exactly " +
                        (need == 1 ? std::string("one expression")
                                   : std::string("two expressions")));
    FamilySpec fs = parse_family(opt.family);
    ExprConfig cfg;
    cfg.p = opt.p;
    cfg.dim = opt.dim;
    cfg.additive = fs.additive;
    cfg.mat_kind = fs.kind;
    cfg.msize = fs.msize;
    if (fs.additive) {
      if (opt.paper_scaling)
        throw usage_error("the scaling flag requires a matrix family");
      AdditiveFamily fam(opt.p, opt.dim);
      return run(fam, cfg, opt, 1);
    }
    MatrixFamily fam(opt.p, opt.dim, fs.msize, fs.kind, MatSide::Left);
    return run(fam, cfg, opt, fam.weight());
  } catch (const parse_error& e) {
    std::cerr << "error at line " << e.line() << ", column " << e.col() << ": "
              << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
