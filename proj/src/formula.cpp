#include "holant/formula.hpp"

#include <algorithm>
#include <map>

namespace holant {

int& bound_budget() {
  static int budget = 24;
  return budget;
}

int PpsHFormula::var(const std::string& name) {
  int id = find(name);
  if (id >= 0) return id;
  names.push_back(name);
  return static_cast<int>(names.size()) - 1;
}

int PpsHFormula::fresh(const std::string& prefix) {
  for (std::size_t n = names.size();; ++n) {
    std::string cand = prefix + std::to_string(n);
    if (find(cand) < 0) return var(cand);
  }
}

int PpsHFormula::find(const std::string& name) const {
  auto it = std::find(names.begin(), names.end(), name);
  return it == names.end() ? -1 : static_cast<int>(it - names.begin());
}

void PpsHFormula::add_atom(const Signature& fn, std::vector<int> scope, std::vector<Label> labels) {
  if (static_cast<int>(scope.size()) != fn.arity()) throw ArityMismatch("atom scope length differs from arity");
  if (!labels.empty() && labels.size() != scope.size()) throw ArityMismatch("atom label count differs from arity");
  atoms.push_back({fn, std::move(scope), std::move(labels)});
}

bool PpsHFormula::allows(Label a, Label b) const {
  if (b < a) std::swap(a, b);
  return restriction.count({a, b}) > 0;
}

Discipline check_discipline(const PpsHFormula& psi, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return Discipline::General;
  };
  std::map<int, int> mult;
  for (auto& a : psi.atoms)
    for (int v : a.scope) ++mult[v];
  std::set<int> fr(psi.free_vars.begin(), psi.free_vars.end());
  std::set<int> bd(psi.bound_vars.begin(), psi.bound_vars.end());
  if (fr.size() != psi.free_vars.size()) return fail("free variable listed twice");
  for (int v : psi.free_vars) {
    if (bd.count(v)) return fail("variable " + psi.names[v] + " is both free and bound");
    if (mult[v] != 1) return fail("free variable " + psi.names[v] + " has multiplicity " + std::to_string(mult[v]));
  }
  for (int v : psi.bound_vars)
    if (mult[v] != 2)
      return fail("bound variable " + psi.names[v] + " has multiplicity " + std::to_string(mult[v]));
  for (auto& [v, m] : mult)
    if (!fr.count(v) && !bd.count(v)) return fail("variable " + psi.names[v] + " is undeclared");
  return Discipline::PpsH;
}

void require_pps_h(const PpsHFormula& psi) {
  std::string why;
  if (check_discipline(psi, &why) != Discipline::PpsH) throw ValidationError("not a pps_h-formula: " + why);
  if (!psi.labelled) return;
  std::map<int, std::vector<Label>> occ;
  for (auto& a : psi.atoms) {
    if (a.labels.size() != a.scope.size()) throw ValidationError("labelled formula has an unlabelled atom");
    for (std::size_t p = 0; p < a.scope.size(); ++p) occ[a.scope[p]].push_back(a.labels[p]);
  }
  for (int v : psi.bound_vars) {
    auto& ls = occ[v];
    if (!psi.allows(ls[0], ls[1])) throw LabelViolation("bound variable " + psi.names[v] + " joins a disallowed label pair");
  }
}

Signature eval_formula(const PpsHFormula& psi, int budget, Order order) {
  require_pps_h(psi);
  if (budget < 0) budget = bound_budget();
  if (static_cast<int>(psi.bound_vars.size()) > budget)
    throw BudgetExceeded(std::to_string(psi.bound_vars.size()) + " bound variables exceed budget " +
                         std::to_string(budget));
  Network net;
  for (auto& a : psi.atoms) net.add_factor(a.scope, a.fn.values());
  return Signature(psi.arity(), net.contract(psi.free_vars, order));
}

Signature eval_formula_brute(const PpsHFormula& psi, int budget) {
  require_pps_h(psi);
  if (budget < 0) budget = bound_budget();
  const int nb = static_cast<int>(psi.bound_vars.size());
  if (nb > budget) throw BudgetExceeded("bound variables exceed budget");
  const int k = psi.arity();
  std::vector<int> pos(psi.names.size(), -1);
  for (int t = 0; t < k; ++t) pos[psi.free_vars[t]] = t;
  for (int t = 0; t < nb; ++t) pos[psi.bound_vars[t]] = k + t;
  const int total = k + nb;
  std::vector<Scalar> out(std::size_t(1) << k, Scalar(0));
  for (std::size_t x = 0; x < (std::size_t(1) << total); ++x) {
    Scalar p(1);
    bool zero = false;
    for (auto& a : psi.atoms) {
      std::size_t idx = 0;
      for (int v : a.scope) idx = (idx << 1) | ((x >> (total - 1 - pos[v])) & 1);
      if (a.fn[idx].is_exact_zero()) {
        zero = true;
        break;
      }
      p *= a.fn[idx];
    }
    if (!zero) out[x >> nb] += p;
  }
  return Signature(k, std::move(out));
}

SignatureGrid formula_to_gadget(const PpsHFormula& psi) {
  require_pps_h(psi);
  SignatureGrid g;
  std::map<int, std::vector<Port>> occ;
  bool uniform = psi.labelled;
  for (std::size_t a = 0; a < psi.atoms.size(); ++a) {
    const auto& at = psi.atoms[a];
    int id = static_cast<int>(a);
    g.vertices.emplace(id, at.fn);
    for (std::size_t p = 0; p < at.scope.size(); ++p) occ[at.scope[p]].push_back({id, static_cast<int>(p) + 1});
    if (psi.labelled && !at.labels.empty() &&
        std::any_of(at.labels.begin(), at.labels.end(), [&](Label l) { return l != at.labels[0]; }))
      uniform = false;
  }
  for (int v : psi.bound_vars) g.edges.push_back({occ[v][0], occ[v][1]});
  for (int v : psi.free_vars) g.dangling.push_back(occ[v][0]);
  if (uniform) {
    g.bipartition.emplace();
    for (std::size_t a = 0; a < psi.atoms.size(); ++a) {
      const auto& ls = psi.atoms[a].labels;
      (*g.bipartition)[static_cast<int>(a)] = (!ls.empty() && ls[0] == Label::R) ? Side::Right : Side::Left;
    }
  }
  return g;
}

PpsHFormula gadget_to_formula(const SignatureGrid& g) {
  require_valid(g);
  PpsHFormula psi;
  std::map<Port, int> var_of;
  for (std::size_t d = 0; d < g.dangling.size(); ++d) {
    int v = psi.var("x" + std::to_string(d + 1));
    psi.free_vars.push_back(v);
    var_of[g.dangling[d]] = v;
  }
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    int v = psi.var("e" + std::to_string(e));
    psi.bound_vars.push_back(v);
    var_of[g.edges[e].first] = v;
    var_of[g.edges[e].second] = v;
  }
  if (g.bipartition) {
    psi.labelled = true;
    psi.restriction.insert({Label::L, Label::R});
  }
  for (auto& [id, f] : g.vertices) {
    std::vector<int> scope;
    for (int s = 1; s <= f.arity(); ++s) scope.push_back(var_of.at({id, s}));
    std::vector<Label> labels;
    if (g.bipartition) labels.assign(f.arity(), g.bipartition->at(id) == Side::Left ? Label::L : Label::R);
    psi.add_atom(f, std::move(scope), std::move(labels));
  }
  return psi;
}

PpsHFormula atomic_formula(const Signature& f) {
  PpsHFormula psi;
  std::vector<int> scope;
  for (int t = 1; t <= f.arity(); ++t) {
    int v = psi.var("x" + std::to_string(t));
    psi.free_vars.push_back(v);
    scope.push_back(v);
  }
  psi.add_atom(f, scope);
  return psi;
}

PpsHFormula closure_tensor(const PpsHFormula& a, const PpsHFormula& b) {
  PpsHFormula out = a;
  std::vector<int> remap(b.names.size());
  for (std::size_t v = 0; v < b.names.size(); ++v) {
    std::string name = b.names[v];
    while (out.find(name) >= 0) name += "'";
    remap[v] = out.var(name);
  }
  for (int v : b.free_vars) out.free_vars.push_back(remap[v]);
  for (int v : b.bound_vars) out.bound_vars.push_back(remap[v]);
  for (auto& at : b.atoms) {
    std::vector<int> scope;
    for (int v : at.scope) scope.push_back(remap[v]);
    out.atoms.push_back({at.fn, scope, at.labels});
  }
  out.labelled = a.labelled || b.labelled;
  out.restriction.insert(b.restriction.begin(), b.restriction.end());
  return out;
}

PpsHFormula closure_permute(const PpsHFormula& a, const std::vector<int>& perm) {
  const int k = a.arity();
  if (static_cast<int>(perm.size()) != k) throw InvalidPermutation("length does not match arity");
  std::vector<bool> seen(k, false);
  for (int p : perm) {
    if (p < 0 || p >= k || seen[p]) throw InvalidPermutation("not a bijection");
    seen[p] = true;
  }
  PpsHFormula out = a;
  for (int m = 0; m < k; ++m) out.free_vars[perm[m]] = a.free_vars[m];
  return out;
}

PpsHFormula closure_contract(const PpsHFormula& a, int i, int j, bool check_labels) {
  const int k = a.arity();
  if (k < 2 || i < 1 || j > k || i >= j) throw IndexOutOfRange("contract positions out of range");
  int vi = a.free_vars[i - 1], vj = a.free_vars[j - 1];
  PpsHFormula out = a;
  if (check_labels) {
    Label li = Label::L, lj = Label::L;
    bool fi = false, fj = false;
    for (auto& at : a.atoms)
      for (std::size_t p = 0; p < at.scope.size(); ++p) {
        if (at.labels.empty()) continue;
        if (at.scope[p] == vi) li = at.labels[p], fi = true;
        if (at.scope[p] == vj) lj = at.labels[p], fj = true;
      }
    if (!fi || !fj) throw LabelViolation("labelled contraction on unlabelled arguments");
    if (!a.allows(li, lj)) throw LabelViolation("labels of the contracted arguments are not a pair in N");
  }
  for (auto& at : out.atoms)
    for (int& v : at.scope)
      if (v == vj) v = vi;
  out.free_vars.erase(out.free_vars.begin() + (j - 1));
  out.free_vars.erase(out.free_vars.begin() + (i - 1));
  out.bound_vars.push_back(vi);
  return out;
}

PpsHFormula closure_step(ClosureOp op, const std::vector<PpsHFormula>& operands, const ClosureArgs& args) {
  switch (op) {
    case ClosureOp::Tensor:
      if (operands.size() != 2) throw ArityMismatch("tensor needs two operands");
      return closure_tensor(operands[0], operands[1]);
    case ClosureOp::Permute:
      if (operands.size() != 1) throw ArityMismatch("permute needs one operand");
      return closure_permute(operands[0], args.perm);
    case ClosureOp::Contract:
      if (operands.size() != 1) throw ArityMismatch("contract needs one operand");
      return closure_contract(operands[0], args.i, args.j, false);
    case ClosureOp::LabelledContract:
      if (operands.size() != 1) throw ArityMismatch("contract needs one operand");
      return closure_contract(operands[0], args.i, args.j, true);
  }
  throw ValidationError("unknown closure operation");
}

}  // namespace holant
