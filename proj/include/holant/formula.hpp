#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "holant/grid.hpp"
#include "holant/network.hpp"
#include "holant/signature.hpp"

namespace holant {

enum class Label { L, R };

struct Atom {
  Signature fn;
  std::vector<int> scope;
  std::vector<Label> labels;  // empty when the formula is unlabelled
};

struct PpsHFormula {
  std::vector<std::string> names;  // variable id -> name
  std::vector<int> free_vars;      // argument order
  std::vector<int> bound_vars;
  std::vector<Atom> atoms;
  bool labelled = false;
  std::set<std::pair<Label, Label>> restriction;  // N, pairs stored with first <= second

  int var(const std::string& name);  // interns
  int fresh(const std::string& prefix);
  int find(const std::string& name) const;  // -1 if absent
  int arity() const { return static_cast<int>(free_vars.size()); }
  void add_atom(const Signature& fn, std::vector<int> scope, std::vector<Label> labels = {});
  bool allows(Label a, Label b) const;
};

enum class Discipline { PpsH, General };

Discipline check_discipline(const PpsHFormula& psi, std::string* why = nullptr);
// Throws ValidationError / LabelViolation when psi is not a well-formed (labelled) pps_h-formula.
void require_pps_h(const PpsHFormula& psi);

int& bound_budget();

Signature eval_formula(const PpsHFormula& psi, int budget = -1, Order order = Order::Greedy);
// Direct enumeration of all bound assignments.
Signature eval_formula_brute(const PpsHFormula& psi, int budget = -1);

SignatureGrid formula_to_gadget(const PpsHFormula& psi);
PpsHFormula gadget_to_formula(const SignatureGrid& g);

PpsHFormula atomic_formula(const Signature& f);

enum class ClosureOp { Tensor, Permute, Contract, LabelledContract };

struct ClosureArgs {
  std::vector<int> perm;  // Permute, 0-based
  int i = 1, j = 2;       // Contract, 1-based free positions
};

PpsHFormula closure_step(ClosureOp op, const std::vector<PpsHFormula>& operands, const ClosureArgs& args = {});
PpsHFormula closure_tensor(const PpsHFormula& a, const PpsHFormula& b);
PpsHFormula closure_permute(const PpsHFormula& a, const std::vector<int>& perm);
PpsHFormula closure_contract(const PpsHFormula& a, int i, int j, bool check_labels = false);

}  // namespace holant
