#include "holant/suites.hpp"

#include <chrono>
#include <cstdio>
#include <functional>

#include "holant/evaluation.hpp"
#include "holant/random_instances.hpp"
#include "holant/synthesis.hpp"

namespace holant {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Runs `body` for each case; body returns true when the case holds.
SuiteCase run_cases(const std::string& name, int n, Rng& rng, const std::function<bool(Rng&)>& body) {
  SuiteCase c;
  c.name = name;
  auto t0 = Clock::now();
  for (int k = 0; k < n; ++k) {
    ++c.cases;
    bool ok = false;
    try {
      ok = body(rng);
    } catch (const Error&) {
      ok = false;
    }
    if (!ok) {
      ++c.failures;
      c.max_residual = 1;
    }
  }
  c.seconds = since(t0);
  return c;
}

Signature random_member(Rng& rng, int arity, bool gaussian) { return random_signature(rng, arity, gaussian); }

}  // namespace

bool SuiteReport::passed() const {
  for (auto& p : parts)
    if (!p.passed()) return false;
  return !parts.empty();
}

nlohmann::json SuiteReport::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (auto& p : parts)
    rows.push_back({{"name", p.name},
                    {"cases", p.cases},
                    {"failures", p.failures},
                    {"max_residual", p.max_residual},
                    {"passed", p.passed()}});
  return {{"suite", name}, {"passed", passed()}, {"parts", rows}};
}

std::string SuiteReport::table() const {
  std::string out = "suite " + name + ": " + (passed() ? "PASS" : "FAIL") + "\n";
  char line[256];
  for (auto& p : parts) {
    std::snprintf(line, sizeof line, "  %-34s %5d cases %4d failures  max residual %.3e  %s\n", p.name.c_str(),
                  p.cases, p.failures, p.max_residual, p.passed() ? "ok" : "FAIL");
    out += line;
  }
  return out;
}

SuiteReport suite_verify_identities(unsigned long seed, int draws) {
  SuiteReport rep;
  rep.name = "verify-identities";
  auto t0 = Clock::now();
  for (auto& r : verify_appendix(draws, seed)) {
    SuiteCase c;
    c.name = r.name;
    c.cases = r.draws;
    c.max_residual = r.max_residual;
    c.failures = r.passed ? 0 : 1;
    rep.parts.push_back(c);
  }
  rep.seconds = since(t0);
  return rep;
}

SuiteReport suite_oracle_equivalence(unsigned long seed, int grids) {
  SuiteReport rep;
  rep.name = "oracle-equivalence";
  Rng rng(seed);
  auto t0 = Clock::now();
  rep.parts.push_back(run_cases("contract == brute", grids, rng, [](Rng& r) {
    SignatureGrid g = random_closed_grid(r);
    return holant_contract(g) == holant_brute(g);
  }));
  rep.seconds = since(t0);
  return rep;
}

SuiteReport suite_closure_laws(unsigned long seed, int cases) {
  SuiteReport rep;
  rep.name = "closure-laws";
  Rng rng(seed);
  auto t0 = Clock::now();

  // Gadgets over even-arity signatures realize even-arity functions.
  rep.parts.push_back(run_cases("arity parity", cases, rng, [](Rng& r) {
    std::uniform_int_distribution<int> nv(1, 5), ar(1, 2), pick(0, 1);
    std::vector<Signature> fs;
    int n = nv(r);
    for (int k = 0; k < n; ++k) {
      int a = 2 * ar(r);
      fs.push_back(random_member(r, a, pick(r)));
    }
    SignatureGrid g = wire_randomly(r, fs);
    // cut a random subset of edges into dangling pairs
    std::vector<std::pair<Port, Port>> keep;
    for (auto& e : g.edges) {
      if (pick(r)) {
        g.dangling.push_back(e.first);
        g.dangling.push_back(e.second);
      } else {
        keep.push_back(e);
      }
    }
    g.edges = keep;
    if (g.dangling.size() > 10) return true;
    Signature f = realize_gadget(g);
    return f.arity() % 2 == 0 && contract_grid(g) == f;
  }));

  rep.parts.push_back(run_cases("holo composition", cases, rng, [](Rng& r) {
    std::uniform_int_distribution<int> ar(0, 4);
    Mat2 A = random_invertible(r), B = random_invertible(r);
    Signature f = random_member(r, ar(r), true);
    return holo(A, holo(B, f)) == holo(A * B, f);
  }));

  rep.parts.push_back(run_cases("Z-contraction identity", cases, rng, [](Rng& r) {
    std::uniform_int_distribution<int> ar(1, 3), pick(0, 1);
    Mat2 K = pick(r) ? Mat2::K1() : Mat2::K2();
    Signature f = random_member(r, ar(r), true), g = random_member(r, ar(r), true);
    const int k = f.arity(), l = g.arity();
    // h(x) = sum f(y1, x..) g(.., y2) NEQ(y1, y2)
    Signature h = contract_pair(contract_pair(f, 1, NEQ(), 1), k, g, l);
    Signature lhs = contract_pair(holo(K, f), 1, holo(K, g), l);
    bool ok = lhs == holo(K, h);
    if (k >= 2) {
      Signature h2 = contract(contract_pair(f, k, NEQ(), 1), k - 1, k);
      ok = ok && contract(holo(K, f), k - 1, k) == holo(K, h2);
    }
    return ok;
  }));

  rep.parts.push_back(run_cases("E contraction closure", cases, rng, [](Rng& r) {
    std::uniform_int_distribution<int> ar(1, 4);
    Signature f = random_E_member(r, ar(r)), g = random_E_member(r, ar(r));
    std::uniform_int_distribution<int> i(1, f.arity()), j(1, g.arity());
    int pi = i(r), pj = j(r);
    Signature h = contract_pair(f, pi, g, pj);
    return h.arity() == 0 || family_test(h, Family::E);
  }));

  rep.parts.push_back(run_cases("M contraction closure", cases, rng, [](Rng& r) {
    std::uniform_int_distribution<int> ar(1, 4);
    Signature f = random_M_member(r, ar(r)), g = random_M_member(r, ar(r));
    std::uniform_int_distribution<int> i(1, f.arity()), j(1, g.arity());
    int pi = i(r), pj = j(r);
    Signature fn = contract_pair(f, pi, NEQ(), 1);
    Signature h = contract_pair(fn, fn.arity(), g, pj);
    return h.arity() == 0 || family_test(h, Family::M);
  }));

  rep.seconds = since(t0);
  return rep;
}

SuiteReport run_suite(const std::string& name, unsigned long seed) {
  if (name == "verify-identities") return suite_verify_identities(seed);
  if (name == "oracle-equivalence") return suite_oracle_equivalence(seed);
  if (name == "closure-laws") return suite_closure_laws(seed);
  throw ValidationError("unknown suite '" + name + "'");
}

}  // namespace holant
