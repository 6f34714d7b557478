#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "holant/classify.hpp"
#include "holant/evaluation.hpp"
#include "holant/io.hpp"
#include "holant/reductions.hpp"
#include "holant/suites.hpp"
#include "holant/synthesis.hpp"

using namespace holant;

namespace {

struct Config {
  std::string backend = "exact";
  double tol = 1e-9;
  std::string order = "greedy";
  unsigned long seed = 0;
  int budget_edges = -1;
  std::string force;
  bool pretty = false;
};

Order order_of(const Config& c) { return c.order == "exhaustive" ? Order::Exhaustive : Order::Greedy; }

SignatureGrid to_backend(SignatureGrid g, const Config& c) {
  if (c.backend == "float")
    for (auto& [id, f] : g.vertices) f = f.to_approx();
  return g;
}

void emit(const json& j, const Config& c, const std::string& human = "") {
  if (c.pretty && !human.empty())
    std::cout << human;
  else
    std::cout << j.dump(2) << "\n";
}

json z_json(const Scalar& z) {
  json out;
  if (z.is_exact())
    out["Z"] = z.to_string();
  else
    out["Z"] = {z.to_complex().real(), z.to_complex().imag()};
  double arg = z.abs() == 0 ? 0.0 : std::arg(z.to_complex());
  if (arg < 0) arg += 2 * M_PI;
  out["abs"] = z.abs();
  out["arg"] = arg;
  return out;
}

std::vector<Signature> vertex_signatures(const SignatureGrid& g) {
  std::vector<Signature> fs;
  for (auto& [id, f] : g.vertices) fs.push_back(f);
  return fs;
}

// Family evaluators in preference order, guided by the dichotomy report.
std::optional<std::pair<Scalar, std::string>> try_family(const SignatureGrid& g) {
  DichotomyReport rep;
  try {
    rep = classify_set(vertex_signatures(g));
  } catch (const Error&) {
    return std::nullopt;
  }
  auto attempt = [&](auto fn, const std::string& name) -> std::optional<std::pair<Scalar, std::string>> {
    try {
      return std::make_pair(fn(), name);
    } catch (const FamilyViolation&) {
      return std::nullopt;
    } catch (const PreconditionViolated&) {
      return std::nullopt;
    }
  };
  std::optional<std::pair<Scalar, std::string>> r;
  if (rep.cond_T && (r = attempt([&] { return holant_T(g); }, "T"))) return r;
  if (rep.cond_OE == OEStatus::Holds && rep.oe_witness) {
    Mat2 o = *rep.oe_witness;
    if ((r = attempt([&] { return holant_E(g, EStrip::Orthogonal, o); }, "E"))) return r;
  }
  if (rep.cond_KE && (r = attempt([&] { return holant_E(g, EStrip::K1); }, "E-K1"))) return r;
  for (auto& k : rep.cond_KM) {
    Mat2 K = k == "K1" ? Mat2::K1() : Mat2::K2();
    if ((r = attempt([&] { return holant_KM(g, K); }, "KM-" + k))) return r;
  }
  return std::nullopt;
}

int cmd_eval(const std::string& path, const Config& c) {
  SignatureGrid g = to_backend(load_grid(path), c);
  require_valid(g);
  if (!g.closed()) throw ValidationError("eval needs a closed grid; use realize for gadgets");
  Scalar z;
  std::string used;
  const std::string& f = c.force;
  if (f == "brute") {
    z = holant_brute(g, c.budget_edges), used = "brute";
  } else if (f == "contract") {
    z = holant_contract(g, std::nullopt, order_of(c)), used = "contract";
  } else if (f == "T") {
    z = holant_T(g), used = "T";
  } else if (f == "E") {
    z = holant_E(g, EStrip::None), used = "E";
  } else if (f == "E-K1") {
    z = holant_E(g, EStrip::K1), used = "E-K1";
  } else if (f == "KM-K1" || f == "KM-K2") {
    z = holant_KM(g, f == "KM-K1" ? Mat2::K1() : Mat2::K2()), used = f;
  } else if (!f.empty()) {
    throw ValidationError("unknown evaluator '" + f + "'");
  } else if (auto fam = try_family(g)) {
    z = fam->first, used = fam->second;
  } else {
    try {
      z = holant_contract(g, std::nullopt, order_of(c)), used = "contract";
    } catch (const CapExceeded&) {
      z = holant_brute(g, c.budget_edges), used = "brute";
    }
  }
  json out = z_json(z);
  out["evaluator"] = used;
  out["backend"] = c.backend;
  char human[512];
  std::snprintf(human, sizeof human, "Z = %s\n|Z| = %.12g\nArg(Z) = %.12g\nevaluator: %s\n",
                z.to_string().c_str(), out["abs"].get<double>(), out["arg"].get<double>(), used.c_str());
  emit(out, c, human);
  return 0;
}

int cmd_realize(const std::string& path, const Config& c) {
  SignatureGrid g = to_backend(load_grid(path), c);
  Signature f = c.force == "brute" ? realize_gadget(g, c.budget_edges) : contract_grid(g, std::nullopt, order_of(c));
  emit({{"function", signature_to_json(f)}}, c);
  return 0;
}

std::vector<Signature> load_functions(const std::string& path) {
  json j = read_json_file(path);
  const json& list = j.is_object() ? j.at("functions") : j;
  if (!list.is_array()) throw ValidationError("functions file must hold an array");
  std::vector<Signature> fs;
  for (auto& e : list) fs.push_back(signature_from_json(e));
  return fs;
}

int cmd_classify(const std::string& path, const Config& c) {
  auto fs = load_functions(path);
  if (c.backend == "float")
    for (auto& f : fs) f = f.to_approx();
  DichotomyReport r = classify_set(fs);
  json out{{"cond_T", r.cond_T},
           {"cond_OE", oe_name(r.cond_OE)},
           {"cond_KE", r.cond_KE},
           {"cond_KM", r.cond_KM},
           {"verdict", verdict_name(r.verdict)},
           {"reasons", r.reasons},
           {"approximate", r.approximate}};
  if (r.oe_witness) out["oe_witness"] = matrix_to_json(*r.oe_witness);
  std::string human = std::string("verdict: ") + verdict_name(r.verdict) + "\n";
  for (auto& s : r.reasons) human += "  " + s + "\n";
  emit(out, c, human);
  return 0;
}

int cmd_synth(const std::string& kind, const std::string& path, const Config& c) {
  json in = read_json_file(path);
  auto sig = [&](const char* key) { return signature_from_json(in.at(key)); };
  GadgetRecipe r;
  if (kind == "binary-from-ghz")
    r = binary_from_ghz(sig("f"), sig("target"));
  else if (kind == "tractable-pair")
    r = binary_from_tractable_pair(sig("f"), sig("g"), sig("target"));
  else if (kind == "ghz-from-w")
    r = ghz_from_w(sig("f"), sig("s1"), sig("s2"));
  else if (kind == "express-E")
    r = express_E(sig("f"), matrix_from_json(in.at("m")));
  else if (kind == "express-M")
    r = express_M(sig("f"));
  else
    throw ValidationError("unknown synthesis kind '" + kind + "'");
  json params = json::object();
  for (auto& [k, v] : r.params) params[k] = v;
  double res = recipe_residual(r);
  json out{{"formula", formula_to_json(r.formula)},
           {"claimed", signature_to_json(r.claimed)},
           {"provenance", {{"lemma", r.lemma}, {"params", params}}},
           {"residual", res}};
  emit(out, c);
  return res < 1e-6 ? 0 : 3;
}

int cmd_reduce_is(const std::string& path, const std::string& lambda, const std::string& out_path, bool check,
                  const Config& c) {
  SimpleGraph G = graph_from_json(read_json_file(path));
  Scalar lam = parse_scalar(lambda);
  SignatureGrid g = independent_set_grid(G, lam);
  json out{{"grid", grid_to_json(g)}};
  if (!out_path.empty()) {
    save_grid(g, out_path);
    out = {{"written", out_path}};
  }
  if (check) {
    Scalar z = holant_contract(to_backend(g, c), std::nullopt, order_of(c));
    Scalar p = independent_set_poly_brute(G, lam);
    out["Z"] = z.to_string();
    out["independent_set_polynomial"] = p.to_string();
    out["match"] = z.is_exact() ? z == p : approx_eq(z, p, c.tol);
  }
  emit(out, c);
  return 0;
}

int cmd_csp2holant(const std::string& path, const std::string& out_path, const Config& c) {
  SignatureGrid g = csp_to_grid(csp_from_json(read_json_file(path)));
  if (!out_path.empty()) {
    save_grid(g, out_path);
    emit({{"written", out_path}}, c);
  } else {
    emit(grid_to_json(g), c);
  }
  return 0;
}

int cmd_transform(const std::string& path, const std::string& matrix, const std::string& rule,
                  const std::string& out_path, const Config& c) {
  SignatureGrid g = load_grid(path);
  SignatureGrid h;
  if (!matrix.empty()) {
    json mj = matrix.front() == '[' ? json::parse(matrix) : json(matrix);
    h = valiant_transform(g, matrix_from_json(mj));
  } else if (rule == "subdivide") {
    h = rewrite_subdivide(g);
  } else if (rule == "unsubdivide") {
    h = rewrite_unsubdivide(g);
  } else if (rule == "forget") {
    h = rewrite_forget(g);
  } else if (rule == "strip-K1" || rule == "strip-K2") {
    h = strip_K(g, rule == "strip-K1" ? Mat2::K1() : Mat2::K2());
  } else {
    throw ValidationError("transform needs --matrix or a --rule in {subdivide, unsubdivide, forget, strip-K1, strip-K2}");
  }
  if (!out_path.empty()) {
    save_grid(h, out_path);
    emit({{"written", out_path}}, c);
  } else {
    emit(grid_to_json(h), c);
  }
  return 0;
}

int report_suite(const SuiteReport& r, const Config& c) {
  emit(r.to_json(), c, r.table());
  return r.passed() ? 0 : 4;
}

int exit_code(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::Budget: return 2;
    case ErrorKind::Numeric: return 3;
    default: return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"holant: exact holant evaluation, classification and gadget synthesis"};
  app.require_subcommand(1);
  app.fallthrough();
  Config cfg;
  app.add_option("--backend", cfg.backend, "exact or float")->check(CLI::IsMember({"exact", "float"}));
  app.add_option("--tol", cfg.tol, "float comparison tolerance");
  app.add_option("--order", cfg.order, "contraction order")->check(CLI::IsMember({"greedy", "exhaustive"}));
  app.add_option("--seed", cfg.seed, "random seed for suites");
  app.add_option("--budget-edges", cfg.budget_edges, "edge budget for brute force");
  app.add_option("--force", cfg.force, "evaluator: brute, contract, T, E, E-K1, KM-K1, KM-K2");
  app.add_flag("--pretty", cfg.pretty, "human-readable output");

  std::string file, kind, lambda = "1", out_path, matrix, rule, suite_name;
  bool check = false;
  int draws = 50;

  auto* eval = app.add_subcommand("eval", "evaluate the holant of a closed grid");
  eval->add_option("grid", file)->required();
  auto* realize = app.add_subcommand("realize", "function realized by a gadget");
  realize->add_option("grid", file)->required();
  auto* classify = app.add_subcommand("classify", "dichotomy report for a function set");
  classify->add_option("functions", file)->required();
  auto* synth = app.add_subcommand("synth", "build a gadget recipe");
  synth->add_option("kind", kind, "binary-from-ghz, tractable-pair, ghz-from-w, express-E, express-M")->required();
  synth->add_option("input", file)->required();
  auto* reduce = app.add_subcommand("reduce-is", "independent-set polynomial to holant grid");
  reduce->add_option("graph", file)->required();
  reduce->add_option("--lambda", lambda, "activity");
  reduce->add_option("-o,--out", out_path);
  reduce->add_flag("--check", check, "evaluate and compare with enumeration");
  auto* csp = app.add_subcommand("csp2holant", "#CSP instance to holant grid");
  csp->add_option("csp", file)->required();
  csp->add_option("-o,--out", out_path);
  auto* transform = app.add_subcommand("transform", "holographic transformation or rewrite");
  transform->add_option("grid", file)->required();
  transform->add_option("--matrix", matrix, "[[a,b],[c,d]] or I, X, K1, K2");
  transform->add_option("--rule", rule);
  transform->add_option("-o,--out", out_path);
  auto* verify = app.add_subcommand("verify-identities", "check the algebraic identity suite");
  verify->add_option("--draws", draws);
  auto* suite = app.add_subcommand("suite", "run a named property suite");
  suite->add_option("name", suite_name, "verify-identities, oracle-equivalence, closure-laws")->required();

  CLI11_PARSE(app, argc, argv);
  default_tolerance() = cfg.tol;
  if (cfg.budget_edges >= 0) edge_budget() = cfg.budget_edges;

  try {
    if (*eval) return cmd_eval(file, cfg);
    if (*realize) return cmd_realize(file, cfg);
    if (*classify) return cmd_classify(file, cfg);
    if (*synth) return cmd_synth(kind, file, cfg);
    if (*reduce) return cmd_reduce_is(file, lambda, out_path, check, cfg);
    if (*csp) return cmd_csp2holant(file, out_path, cfg);
    if (*transform) return cmd_transform(file, matrix, rule, out_path, cfg);
    if (*verify) return report_suite(suite_verify_identities(cfg.seed, draws), cfg);
    if (*suite) return report_suite(run_suite(suite_name, cfg.seed), cfg);
  } catch (const Error& e) {
    json err{{"error", e.name()}, {"message", e.what()}};
    std::cerr << err.dump(2) << "\n";
    return exit_code(e);
  } catch (const json::exception& e) {
    std::cerr << json{{"error", "ParseError"}, {"message", e.what()}}.dump(2) << "\n";
    return 1;
  }
  return 0;
}
