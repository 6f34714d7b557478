#include "holant/network.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>
#include <tuple>

namespace holant {

int& contraction_cap() {
  static int cap = 18;
  return cap;
}

int ContractionPlan::max_arity() const {
  int m = 0;
  for (auto& s : steps) m = std::max(m, s.predicted_arity);
  return m;
}

void Network::add_factor(std::vector<int> vars, std::vector<Scalar> table) {
  const int k = static_cast<int>(vars.size());
  if (table.size() != (std::size_t(1) << k)) throw ArityMismatch("factor table size does not match scope");
  std::vector<int> uniq;
  for (int v : vars)
    if (std::find(uniq.begin(), uniq.end(), v) == uniq.end()) uniq.push_back(v);
  if (static_cast<int>(uniq.size()) == k) {
    factors_.push_back({std::move(vars), std::move(table)});
    return;
  }
  const int u = static_cast<int>(uniq.size());
  std::vector<Scalar> t(std::size_t(1) << u);
  for (std::size_t r = 0; r < t.size(); ++r) {
    std::size_t idx = 0;
    for (int p = 0; p < k; ++p) {
      int q = static_cast<int>(std::find(uniq.begin(), uniq.end(), vars[p]) - uniq.begin());
      idx = (idx << 1) | ((r >> (u - 1 - q)) & 1);
    }
    t[r] = table[idx];
  }
  factors_.push_back({std::move(uniq), std::move(t)});
}

std::vector<int> Network::bound_vars(const std::vector<int>& free_vars) const {
  std::set<int> fr(free_vars.begin(), free_vars.end()), all;
  for (auto& f : factors_)
    for (int v : f.vars)
      if (!fr.count(v)) all.insert(v);
  return {all.begin(), all.end()};
}

namespace {

ContractionPlan plan_greedy(const std::vector<Factor>& factors, const std::vector<int>& bound,
                            const std::map<int, std::vector<long>>& keys, int cap) {
  std::vector<std::set<int>> scopes;
  std::vector<bool> alive;
  std::map<int, std::set<int>> occ;  // var -> alive factor ids
  for (std::size_t i = 0; i < factors.size(); ++i) {
    scopes.emplace_back(factors[i].vars.begin(), factors[i].vars.end());
    alive.push_back(true);
    for (int v : factors[i].vars) occ[v].insert(static_cast<int>(i));
  }
  std::set<int> remaining(bound.begin(), bound.end());
  ContractionPlan plan;
  plan.cap = cap;
  auto key_of = [&](int v) {
    auto it = keys.find(v);
    return it == keys.end() ? std::vector<long>{v} : it->second;
  };
  auto score = [&](int v) {
    std::set<int> u;
    for (int f : occ[v]) u.insert(scopes[f].begin(), scopes[f].end());
    return std::make_tuple(u.size() - 1, key_of(v), v);
  };
  using Entry = std::tuple<std::size_t, std::vector<long>, int>;
  std::set<Entry> queue;
  std::map<int, Entry> current;
  for (int v : remaining) {
    current[v] = score(v);
    queue.insert(current[v]);
  }
  while (!queue.empty()) {
    int best = std::get<2>(*queue.begin());
    queue.erase(queue.begin());
    std::set<int> u;
    for (int f : occ[best]) u.insert(scopes[f].begin(), scopes[f].end());
    u.erase(best);
    if (static_cast<int>(u.size()) > cap)
      throw CapExceeded("intermediate arity " + std::to_string(u.size()) + " exceeds cap " +
                        std::to_string(cap) + "; raise the cap or use the brute-force evaluator");
    std::vector<int> dead(occ[best].begin(), occ[best].end());
    for (int f : dead) {
      alive[f] = false;
      for (int v : scopes[f]) occ[v].erase(f);
    }
    int nid = static_cast<int>(scopes.size());
    scopes.push_back(u);
    alive.push_back(true);
    for (int v : u) occ[v].insert(nid);
    remaining.erase(best);
    plan.steps.push_back({StepKind::ContractEdge, best, static_cast<int>(u.size())});
    for (int v : u) {
      if (!remaining.count(v)) continue;
      queue.erase(current[v]);
      current[v] = score(v);
      queue.insert(current[v]);
    }
  }
  return plan;
}

// Dynamic program over elimination subsets minimising (max arity, total table size).
ContractionPlan plan_exhaustive(const std::vector<Factor>& factors, const std::vector<int>& bound, int cap) {
  const int n = static_cast<int>(bound.size());
  std::map<int, int> bidx;
  for (int i = 0; i < n; ++i) bidx[bound[i]] = i;
  // adjacency of bound vars to bound vars, and to free vars (as a set of ids)
  std::vector<unsigned> adjb(n, 0);
  std::vector<std::set<int>> adjf(n);
  for (auto& f : factors)
    for (int a : f.vars) {
      auto ia = bidx.find(a);
      if (ia == bidx.end()) continue;
      for (int b : f.vars) {
        if (a == b) continue;
        auto ib = bidx.find(b);
        if (ib != bidx.end())
          adjb[ia->second] |= 1u << ib->second;
        else
          adjf[ia->second].insert(b);
      }
    }
  auto arity_after = [&](unsigned S, int v) {
    // component of v in S + v
    unsigned comp = 1u << v, frontier = comp;
    unsigned allowed = S | (1u << v);
    while (frontier) {
      unsigned next = 0;
      for (int i = 0; i < n; ++i)
        if (frontier >> i & 1) next |= adjb[i] & allowed & ~comp;
      comp |= next;
      frontier = next;
    }
    unsigned nb = 0;
    std::set<int> fr;
    for (int i = 0; i < n; ++i)
      if (comp >> i & 1) {
        nb |= adjb[i];
        fr.insert(adjf[i].begin(), adjf[i].end());
      }
    nb &= ~allowed;
    return std::popcount(nb) + static_cast<int>(fr.size());
  };
  const unsigned full = (n == 32) ? ~0u : ((1u << n) - 1);
  struct Cost {
    int maxa;
    double total;
    int prev_var;
  };
  std::vector<Cost> best(std::size_t(1) << n, {1 << 30, 0, -1});
  best[0] = {0, 0, -1};
  for (unsigned S = 0; S <= full; ++S) {
    if (best[S].maxa == (1 << 30)) continue;
    for (int v = 0; v < n; ++v) {
      if (S >> v & 1) continue;
      int a = arity_after(S, v);
      Cost c{std::max(best[S].maxa, a), best[S].total + double(std::size_t(1) << std::min(a, 60)), v};
      Cost& t = best[S | (1u << v)];
      if (c.maxa < t.maxa || (c.maxa == t.maxa && c.total < t.total)) t = c;
    }
    if (S == full) break;
  }
  std::vector<int> order;
  unsigned S = full;
  while (S) {
    int v = best[S].prev_var;
    order.push_back(v);
    S &= ~(1u << v);
  }
  std::reverse(order.begin(), order.end());
  ContractionPlan plan;
  plan.cap = cap;
  unsigned done = 0;
  for (int v : order) {
    int a = arity_after(done, v);
    if (a > cap)
      throw CapExceeded("intermediate arity " + std::to_string(a) + " exceeds cap " + std::to_string(cap));
    plan.steps.push_back({StepKind::ContractEdge, bound[v], a});
    done |= 1u << v;
  }
  return plan;
}

Factor multiply_out(const std::vector<const Factor*>& fs, int eliminate) {
  std::vector<int> scope;
  for (auto* f : fs)
    for (int v : f->vars)
      if (std::find(scope.begin(), scope.end(), v) == scope.end()) scope.push_back(v);
  std::sort(scope.begin(), scope.end());
  const int u = static_cast<int>(scope.size());
  std::vector<std::vector<int>> shift(fs.size());
  for (std::size_t i = 0; i < fs.size(); ++i)
    for (int v : fs[i]->vars) {
      int q = static_cast<int>(std::lower_bound(scope.begin(), scope.end(), v) - scope.begin());
      shift[i].push_back(u - 1 - q);
    }
  int epos = -1;
  if (eliminate >= 0)
    epos = u - 1 - static_cast<int>(std::lower_bound(scope.begin(), scope.end(), eliminate) - scope.begin());
  std::vector<int> out_scope;
  for (int v : scope)
    if (v != eliminate) out_scope.push_back(v);
  std::vector<Scalar> out(std::size_t(1) << out_scope.size(), Scalar(0));
  for (std::size_t a = 0; a < (std::size_t(1) << u); ++a) {
    Scalar p(1);
    bool zero = false;
    for (std::size_t i = 0; i < fs.size() && !zero; ++i) {
      std::size_t idx = 0;
      for (int sh : shift[i]) idx = (idx << 1) | ((a >> sh) & 1);
      const Scalar& x = fs[i]->table[idx];
      if (x.is_exact_zero()) {
        zero = true;
        break;
      }
      p *= x;
    }
    if (zero) continue;
    std::size_t r = a;
    if (epos >= 0) {
      std::size_t low = a & ((std::size_t(1) << epos) - 1);
      r = ((a >> (epos + 1)) << epos) | low;
    }
    out[r] += p;
  }
  return {out_scope, std::move(out)};
}

}  // namespace

ContractionPlan Network::plan(const std::vector<int>& free_vars, Order order, int cap) const {
  if (cap < 0) cap = contraction_cap();
  auto bound = bound_vars(free_vars);
  if (order == Order::Exhaustive && bound.size() <= 16) return plan_exhaustive(factors_, bound, cap);
  return plan_greedy(factors_, bound, keys_, cap);
}

std::vector<Scalar> Network::contract(const std::vector<int>& free_vars, Order order, int cap) const {
  return contract(free_vars, plan(free_vars, order, cap));
}

std::vector<Scalar> Network::contract(const std::vector<int>& free_vars, const ContractionPlan& plan) const {
  std::vector<Factor> pool = factors_;
  std::vector<bool> alive(pool.size(), true);
  std::map<int, std::set<int>> occ;
  for (std::size_t i = 0; i < pool.size(); ++i)
    for (int v : pool[i].vars) occ[v].insert(static_cast<int>(i));
  std::set<int> fr(free_vars.begin(), free_vars.end());
  std::set<int> eliminated;
  for (auto& st : plan.steps) {
    if (st.kind != StepKind::ContractEdge) continue;
    int v = st.id;
    if (fr.count(v)) throw ValidationError("plan eliminates a free variable");
    std::vector<int> ids(occ[v].begin(), occ[v].end());
    if (ids.empty()) continue;
    std::vector<const Factor*> fs;
    for (int i : ids) fs.push_back(&pool[i]);
    Factor nf = multiply_out(fs, v);
    if (static_cast<int>(nf.vars.size()) > plan.cap)
      throw CapExceeded("intermediate arity " + std::to_string(nf.vars.size()) + " exceeds cap");
    for (int i : ids) {
      alive[i] = false;
      for (int w : pool[i].vars) occ[w].erase(i);
    }
    int nid = static_cast<int>(pool.size());
    for (int w : nf.vars) occ[w].insert(nid);
    pool.push_back(std::move(nf));
    alive.push_back(true);
    eliminated.insert(v);
  }
  std::vector<const Factor*> rest;
  for (std::size_t i = 0; i < pool.size(); ++i)
    if (alive[i]) {
      for (int v : pool[i].vars)
        if (!fr.count(v)) throw ValidationError("plan leaves variable " + std::to_string(v) + " uncontracted");
      rest.push_back(&pool[i]);
    }
  // Product of the remaining factors, laid out over free_vars.
  const int k = static_cast<int>(free_vars.size());
  std::vector<Scalar> out(std::size_t(1) << k);
  std::vector<std::vector<int>> shift(rest.size());
  for (std::size_t i = 0; i < rest.size(); ++i)
    for (int v : rest[i]->vars) {
      int q = static_cast<int>(std::find(free_vars.begin(), free_vars.end(), v) - free_vars.begin());
      shift[i].push_back(k - 1 - q);
    }
  for (std::size_t a = 0; a < out.size(); ++a) {
    Scalar p(1);
    for (std::size_t i = 0; i < rest.size(); ++i) {
      std::size_t idx = 0;
      for (int sh : shift[i]) idx = (idx << 1) | ((a >> sh) & 1);
      p *= rest[i]->table[idx];
    }
    out[a] = p;
  }
  return out;
}

}  // namespace holant
