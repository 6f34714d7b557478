#include <doctest.h>

#include "holant/evaluation.hpp"
#include "holant/formula.hpp"
#include "holant/random_instances.hpp"

using namespace holant;

namespace {

PpsHFormula with_free(std::initializer_list<const char*> free, std::initializer_list<const char*> bound) {
  PpsHFormula psi;
  for (auto n : free) psi.free_vars.push_back(psi.var(n));
  for (auto n : bound) psi.bound_vars.push_back(psi.var(n));
  return psi;
}

// Random gadget: closed random grid with a random subset of edges cut open.
SignatureGrid random_gadget(Rng& rng) {
  SignatureGrid g = random_closed_grid(rng, 5, 7, 3);
  std::vector<std::pair<Port, Port>> keep;
  std::uniform_int_distribution<int> coin(0, 2);
  for (auto& e : g.edges) {
    if (coin(rng) == 0) {
      g.dangling.push_back(e.first);
      g.dangling.push_back(e.second);
    } else {
      keep.push_back(e);
    }
  }
  g.edges = keep;
  return g;
}

}  // namespace

TEST_CASE("evaluating small formulas") {
  auto a = with_free({"u", "v"}, {});
  a.add_atom(EQ(2), {a.find("u"), a.find("v")});
  CHECK(eval_formula(a) == EQ(2));

  auto b = with_free({"x1", "x2"}, {"y"});
  b.add_atom(EQ(3), {b.find("x1"), b.find("x2"), b.find("y")});
  b.add_atom(EQ(1), {b.find("y")});
  CHECK(eval_formula(b) == EQ(2));

  auto c = with_free({"x1", "x2"}, {"y", "z"});
  c.add_atom(EQ(3), {c.find("x1"), c.find("x2"), c.find("y")});
  c.add_atom(EQ(3), {c.find("y"), c.find("z"), c.find("z")});
  CHECK(check_discipline(c) == Discipline::PpsH);
  CHECK(eval_formula(c) == EQ(2));
  CHECK(eval_formula_brute(c) == EQ(2));
}

TEST_CASE("discipline checks") {
  auto bad = with_free({"x"}, {"y"});
  bad.add_atom(EQ(3), {bad.find("x"), bad.find("x"), bad.find("y")});
  bad.add_atom(EQ(1), {bad.find("y")});
  std::string why;
  CHECK(check_discipline(bad, &why) == Discipline::General);
  CHECK_FALSE(why.empty());
  CHECK_THROWS(require_pps_h(bad));
  CHECK_THROWS(eval_formula(bad));
}

TEST_CASE("gadget and formula conversions agree") {
  Rng rng(3);
  for (int k = 0; k < 60; ++k) {
    SignatureGrid g = random_gadget(rng);
    Signature f = realize_gadget(g);
    PpsHFormula psi = gadget_to_formula(g);
    CHECK(eval_formula(psi) == f);
    CHECK(eval_formula_brute(psi) == f);
    CHECK(realize_gadget(formula_to_gadget(psi)) == f);
  }
  auto one = atomic_formula(EQ(3));
  SignatureGrid g1 = formula_to_gadget(one);
  CHECK(g1.vertices.size() == 1);
  CHECK(g1.dangling.size() == 3);
}

TEST_CASE("closure steps commute with signature operations") {
  Rng rng(4);
  for (int k = 0; k < 40; ++k) {
    Signature f = random_signature(rng, 1 + k % 3), g = random_signature(rng, 1 + (k / 3) % 3);
    auto pf = atomic_formula(f), pg = atomic_formula(g);
    auto t = closure_tensor(pf, pg);
    CHECK(eval_formula(t) == tensor(f, g));
    std::vector<int> pi(t.arity());
    for (int j = 0; j < t.arity(); ++j) pi[j] = (j + 1) % t.arity();
    CHECK(eval_formula(closure_permute(t, pi)) == permute(tensor(f, g), pi));
    if (t.arity() >= 2) CHECK(eval_formula(closure_contract(t, 1, t.arity())) == contract(tensor(f, g), 1, t.arity()));
  }
  auto ee = closure_tensor(atomic_formula(EQ(2)), atomic_formula(EQ(2)));
  CHECK(eval_formula(closure_contract(ee, 3, 4)) == EQ(2).scaled(2));
  CHECK(eval_formula(closure_contract(ee, 2, 3)) == EQ(2));
}

TEST_CASE("labelled contraction respects the restriction") {
  PpsHFormula a = atomic_formula(EQ(2));
  a.labelled = true;
  a.atoms[0].labels = {Label::L, Label::L};
  a.restriction = {{Label::L, Label::R}};
  CHECK_THROWS_AS(closure_contract(a, 1, 2, true), LabelViolation);
  a.atoms[0].labels = {Label::L, Label::R};
  CHECK(eval_formula(closure_contract(a, 1, 2, true))[0] == Scalar(2));
}

TEST_CASE("even generators give even arity") {
  Rng rng(5);
  std::uniform_int_distribution<int> pick(0, 3);
  for (int k = 0; k < 100; ++k) {
    std::vector<PpsHFormula> pool{atomic_formula(EQ(2)), atomic_formula(random_signature(rng, 4))};
    PpsHFormula cur = pool[k % 2];
    for (int step = 0; step < 4; ++step) {
      int op = pick(rng);
      if (op <= 1 && cur.arity() <= 6) cur = closure_tensor(cur, pool[op]);
      if (op == 2 && cur.arity() >= 2) cur = closure_contract(cur, 1, cur.arity());
    }
    CHECK(cur.arity() % 2 == 0);
    CHECK(eval_formula(cur).arity() % 2 == 0);
  }
}
