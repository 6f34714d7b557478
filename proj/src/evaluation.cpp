#include "holant/evaluation.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <unordered_map>

namespace holant {

int& edge_budget() {
  static int budget = 24;
  return budget;
}

namespace {

struct Wiring {
  // per vertex (in map order): signature pointer and the variable on each slot
  std::vector<const Signature*> fns;
  std::vector<std::vector<int>> vars;
  std::vector<int> ids;
};

// Variables: edges 0..E-1, dangling E..E+D-1.
Wiring wire(const SignatureGrid& g) {
  Wiring w;
  std::map<Port, int> var_of;
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    var_of[g.edges[e].first] = static_cast<int>(e);
    var_of[g.edges[e].second] = static_cast<int>(e);
  }
  for (std::size_t d = 0; d < g.dangling.size(); ++d) var_of[g.dangling[d]] = static_cast<int>(g.edges.size() + d);
  for (auto& [id, f] : g.vertices) {
    w.ids.push_back(id);
    w.fns.push_back(&f);
    std::vector<int> vs;
    for (int s = 1; s <= f.arity(); ++s) vs.push_back(var_of.at({id, s}));
    w.vars.push_back(vs);
  }
  return w;
}

Scalar one_like(const SignatureGrid& g) {
  for (auto& [id, f] : g.vertices)
    if (!f.is_exact()) return Scalar::approx(1);
  return Scalar(1);
}

}  // namespace

Signature realize_gadget(const SignatureGrid& g, int budget) {
  require_valid(g);
  if (budget < 0) budget = edge_budget();
  const int E = static_cast<int>(g.edges.size());
  const int D = static_cast<int>(g.dangling.size());
  if (E > budget) throw BudgetExceeded(std::to_string(E) + " internal edges exceed budget " + std::to_string(budget));
  Wiring w = wire(g);
  const Scalar zero = one_like(g) * Scalar(0);
  std::vector<Scalar> out(std::size_t(1) << D, zero);
  const int total = E + D;
  for (std::size_t d = 0; d < out.size(); ++d) {
    Scalar acc = zero;
    for (std::size_t x = 0; x < (std::size_t(1) << E); ++x) {
      std::size_t full = (x << D) | d;  // var v has bit (total-1-v)
      Scalar p(1);
      bool z = false;
      for (std::size_t v = 0; v < w.fns.size(); ++v) {
        std::size_t idx = 0;
        for (int var : w.vars[v]) idx = (idx << 1) | ((full >> (total - 1 - var)) & 1);
        const Scalar& val = (*w.fns[v])[idx];
        if (val.is_exact_zero()) {
          z = true;
          break;
        }
        p *= val;
      }
      if (!z) acc += p;
    }
    out[d] = acc;
  }
  return Signature(D, std::move(out));
}

Scalar holant_brute(const SignatureGrid& g, int budget) {
  if (!g.closed()) throw ValidationError("holant_brute needs a closed grid");
  return realize_gadget(g, budget)[0];
}

static Network grid_network(const SignatureGrid& g, std::vector<int>& free_vars) {
  Wiring w = wire(g);
  Network net;
  for (std::size_t v = 0; v < w.fns.size(); ++v) net.add_factor(w.vars[v], w.fns[v]->values());
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    int a = g.edges[e].first.vertex, b = g.edges[e].second.vertex;
    net.set_key(static_cast<int>(e), {std::min(a, b), std::max(a, b), static_cast<long>(e)});
  }
  free_vars.clear();
  for (std::size_t d = 0; d < g.dangling.size(); ++d) free_vars.push_back(static_cast<int>(g.edges.size() + d));
  return net;
}

ContractionPlan plan_contraction(const SignatureGrid& g, Order order, int cap) {
  require_valid(g);
  std::vector<int> fv;
  Network net = grid_network(g, fv);
  return net.plan(fv, order, cap);
}

Signature contract_grid(const SignatureGrid& g, const std::optional<ContractionPlan>& plan, Order order, int cap) {
  require_valid(g);
  std::vector<int> fv;
  Network net = grid_network(g, fv);
  ContractionPlan p = plan ? *plan : net.plan(fv, order, cap);
  auto vals = net.contract(fv, p);
  Scalar one = one_like(g);
  if (!one.is_exact())
    for (auto& v : vals) v = v * one;
  return Signature(static_cast<int>(fv.size()), std::move(vals));
}

Scalar holant_contract(const SignatureGrid& g, const std::optional<ContractionPlan>& plan, Order order, int cap) {
  if (!g.closed()) throw ValidationError("holant_contract needs a closed grid; use contract_grid for gadgets");
  return contract_grid(g, plan, order, cap)[0];
}

namespace {

// Vertices split into tensor atoms after an optional inverse transform.
struct AtomGraph {
  Scalar scalar;
  std::vector<Signature> nodes;
  std::vector<std::array<std::pair<int, int>, 2>> edges;  // (node, 0-based port)
};

std::string sig_key(const Signature& f) {
  std::string k = std::to_string(f.arity());
  for (auto& v : f.values()) k += "|" + v.to_string();
  return k;
}

AtomGraph split_atoms(const SignatureGrid& g, const Mat2* strip_inv, Family fam, const char* what) {
  require_valid(g);
  if (!g.closed()) throw ValidationError(std::string(what) + " needs a closed grid");
  AtomGraph ag;
  ag.scalar = one_like(g);
  std::unordered_map<std::string, AtomDecomposition> memo;
  std::map<Port, std::pair<int, int>> where;
  for (auto& [id, f] : g.vertices) {
    std::string key = sig_key(f);
    auto it = memo.find(key);
    if (it == memo.end()) {
      Signature h = strip_inv ? holo(*strip_inv, f) : f;
      AtomDecomposition d = decompose_atoms(h);
      for (auto& a : d.atoms) {
        bool ok = fam == Family::T_atoms ? a.arity() <= 2 : family_test(a, fam);
        if (!ok)
          throw FamilyViolation(std::string(what) + ": vertex " + std::to_string(id) +
                                " has an atom outside the family");
      }
      it = memo.emplace(key, std::move(d)).first;
    }
    const AtomDecomposition& d = it->second;
    ag.scalar *= d.scalar;
    for (std::size_t a = 0; a < d.atoms.size(); ++a) {
      int node = static_cast<int>(ag.nodes.size());
      ag.nodes.push_back(d.atoms[a]);
      for (std::size_t p = 0; p < d.placement[a].size(); ++p)
        where[{id, d.placement[a][p] + 1}] = {node, static_cast<int>(p)};
    }
  }
  for (auto& [a, b] : g.edges) ag.edges.push_back({where.at(a), where.at(b)});
  return ag;
}

// partner[node][port] = (node, port) at the other end of the edge
std::vector<std::vector<std::pair<int, int>>> partners(const AtomGraph& ag) {
  std::vector<std::vector<std::pair<int, int>>> pt(ag.nodes.size());
  for (std::size_t n = 0; n < ag.nodes.size(); ++n) pt[n].assign(ag.nodes[n].arity(), {-1, -1});
  for (auto& e : ag.edges) {
    pt[e[0].first][e[0].second] = e[1];
    pt[e[1].first][e[1].second] = e[0];
  }
  return pt;
}

using M2 = std::array<Scalar, 4>;

M2 mmul(const M2& x, const M2& y) {
  return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2],
          x[2] * y[1] + x[3] * y[3]};
}

std::size_t unit_index(int arity, int port) { return std::size_t(1) << (arity - 1 - port); }

}  // namespace

Scalar holant_T(const SignatureGrid& g) {
  AtomGraph ag = split_atoms(g, nullptr, Family::T_atoms, "holant_T");
  auto pt = partners(ag);
  std::vector<bool> done(ag.nodes.size(), false);
  Scalar z = ag.scalar;
  auto as_matrix = [&](int n, int entry_port) -> M2 {
    const Signature& f = ag.nodes[n];
    if (entry_port == 0) return {f[0], f[1], f[2], f[3]};
    return {f[0], f[2], f[1], f[3]};
  };
  // paths start at unary atoms
  for (std::size_t s = 0; s < ag.nodes.size(); ++s) {
    if (done[s] || ag.nodes[s].arity() != 1) continue;
    done[s] = true;
    std::array<Scalar, 2> v{ag.nodes[s][0], ag.nodes[s][1]};
    auto [n, p] = pt[s][0];
    while (ag.nodes[n].arity() == 2) {
      done[n] = true;
      M2 m = as_matrix(n, p);
      v = {v[0] * m[0] + v[1] * m[2], v[0] * m[1] + v[1] * m[3]};
      auto nx = pt[n][1 - p];
      n = nx.first;
      p = nx.second;
    }
    done[n] = true;
    z *= v[0] * ag.nodes[n][0] + v[1] * ag.nodes[n][1];
  }
  // remaining binary atoms form cycles
  for (std::size_t s = 0; s < ag.nodes.size(); ++s) {
    if (done[s]) continue;
    M2 m{1, 0, 0, 1};
    int n = static_cast<int>(s), p = 0;
    do {
      done[n] = true;
      m = mmul(m, as_matrix(n, p));
      auto nx = pt[n][1 - p];
      n = nx.first;
      p = nx.second;
    } while (!(n == static_cast<int>(s) && p == 0));
    z *= m[0] + m[3];
  }
  return z;
}

Scalar holant_E_with(const SignatureGrid& g, const Mat2& m) {
  Mat2 gram = m.transpose() * m;
  bool neq;
  if (approx_eq(gram, Mat2::identity()))
    neq = false;
  else if (approx_eq(gram, Mat2::X()))
    neq = true;
  else
    throw PreconditionViolated("holant_E transform must satisfy M^T M = I or M^T M = X");
  Mat2 inv = m.inverse();
  AtomGraph ag = split_atoms(g, &inv, Family::E, "holant_E");
  const std::size_t n = ag.nodes.size();
  // support representative a_n and weights for states a_n / complement
  std::vector<std::size_t> rep(n, 0);
  std::vector<std::array<Scalar, 2>> w(n);
  for (std::size_t v = 0; v < n; ++v) {
    const Signature& f = ag.nodes[v];
    std::size_t mask = f.size() - 1;
    std::size_t first = f.size();
    for (std::size_t x = 0; x < f.size(); ++x)
      if (!f[x].is_zero()) {
        first = x;
        break;
      }
    if (first == f.size()) return ag.scalar * Scalar(0);
    rep[v] = first;
    w[v] = {f[first], f[first ^ mask]};
  }
  std::vector<int> parent(n), parity(n, 0);
  std::iota(parent.begin(), parent.end(), 0);
  std::vector<int> rank(n, 0);
  auto find = [&](int x) {
    int root = x, par = 0;
    while (parent[root] != root) {
      par ^= parity[root];
      root = parent[root];
    }
    // compress
    int cur = x, cp = par;
    while (parent[cur] != cur) {
      int nxt = parent[cur], np = cp ^ parity[cur];
      parent[cur] = root;
      parity[cur] = cp;
      cur = nxt;
      cp = np;
    }
    return std::make_pair(root, par);
  };
  auto bit = [&](int v, int port) {
    int k = ag.nodes[v].arity();
    return static_cast<int>((rep[v] >> (k - 1 - port)) & 1);
  };
  for (auto& e : ag.edges) {
    int a = e[0].first, b = e[1].first;
    int rel = bit(a, e[0].second) ^ bit(b, e[1].second) ^ (neq ? 1 : 0);
    auto [ra, pa] = find(a);
    auto [rb, pb] = find(b);
    if (ra == rb) {
      if ((pa ^ pb) != rel) return ag.scalar * Scalar(0);
      continue;
    }
    if (rank[ra] < rank[rb]) {
      std::swap(ra, rb);
      std::swap(pa, pb);
    }
    parent[rb] = ra;
    parity[rb] = pa ^ pb ^ rel;
    if (rank[ra] == rank[rb]) ++rank[ra];
  }
  std::map<int, std::array<Scalar, 2>> comp;
  for (std::size_t v = 0; v < n; ++v) {
    auto [r, p] = find(static_cast<int>(v));
    auto it = comp.find(r);
    if (it == comp.end()) it = comp.emplace(r, std::array<Scalar, 2>{Scalar(1), Scalar(1)}).first;
    it->second[0] *= w[v][p];
    it->second[1] *= w[v][p ^ 1];
  }
  Scalar z = ag.scalar;
  for (auto& [r, s] : comp) z *= s[0] + s[1];
  return z;
}

Scalar holant_E(const SignatureGrid& g, EStrip strip, const Mat2& transform) {
  switch (strip) {
    case EStrip::None:
      return holant_E_with(g, Mat2::identity());
    case EStrip::Orthogonal:
      return holant_E_with(g, transform);
    case EStrip::K1:
      return holant_E_with(g, Mat2::K1());
  }
  return Scalar(0);
}

Scalar holant_KM(const SignatureGrid& g, const Mat2& k) {
  if (!approx_eq(k.transpose() * k, Mat2::X())) throw PreconditionViolated("holant_KM needs K^T K = X");
  Mat2 inv = k.inverse();
  AtomGraph ag = split_atoms(g, &inv, Family::M, "holant_KM");
  const int n = static_cast<int>(ag.nodes.size());
  auto pt = partners(ag);
  auto f0 = [&](int v) -> const Scalar& { return ag.nodes[v][0]; };
  auto fe = [&](int v, int port) -> const Scalar& { return ag.nodes[v][unit_index(ag.nodes[v].arity(), port)]; };
  Scalar z = ag.scalar;
  std::vector<int> comp(n, -1);
  std::vector<int> par(n, -1), par_port(n, -1);  // par_port: port of v towards its parent
  std::vector<Scalar> N(n), R(n), acc(n);
  std::vector<int> deg(n, 0);
  std::vector<bool> removed_v(n, false);
  for (int s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    // BFS over the component, recording tree structure
    std::vector<int> order{s};
    comp[s] = s;
    long half_edges = 0;
    for (std::size_t q = 0; q < order.size(); ++q) {
      int v = order[q];
      half_edges += ag.nodes[v].arity();
      for (auto& [u, p] : pt[v])
        if (comp[u] < 0) {
          comp[u] = s;
          order.push_back(u);
        }
    }
    long V = static_cast<long>(order.size()), E = half_edges / 2;
    if (E > V) return z * Scalar(0);
    if (E == V - 1) {
      // tree: sum over roots via one rerooting pass
      std::vector<int> bfs{s};
      par[s] = s;
      for (std::size_t q = 0; q < bfs.size(); ++q) {
        int v = bfs[q];
        for (int p = 0; p < ag.nodes[v].arity(); ++p) {
          int u = pt[v][p].first;
          if (par[u] < 0) {
            par[u] = v;
            par_port[u] = pt[v][p].second;
            bfs.push_back(u);
          }
        }
      }
      for (auto it = bfs.rbegin(); it != bfs.rend(); ++it) {
        int v = *it;
        Scalar prodN(1), sumR(0);
        for (int p = 0; p < ag.nodes[v].arity(); ++p) {
          int c = pt[v][p].first;
          if (c == par[v] && p == par_port[v]) continue;
          if (par[c] != v || par_port[c] != pt[v][p].second) continue;
          sumR = sumR * N[c] + prodN * fe(v, p) * R[c];
          prodN *= N[c];
        }
        if (v != s) N[v] = fe(v, par_port[v]) * prodN;
        R[v] = f0(v) * prodN + sumR;
      }
      z *= R[s];
      continue;
    }
    // unicyclic: strip leaves, then walk the cycle
    for (int v : order) {
      deg[v] = ag.nodes[v].arity();
      acc[v] = Scalar(1);
    }
    std::vector<int> leaves;
    for (int v : order)
      if (deg[v] == 1) leaves.push_back(v);
    while (!leaves.empty()) {
      int v = leaves.back();
      leaves.pop_back();
      removed_v[v] = true;
      for (int p = 0; p < ag.nodes[v].arity(); ++p) {
        int u = pt[v][p].first;
        if (removed_v[u]) continue;
        acc[u] *= fe(v, p) * acc[v];
        if (--deg[u] == 1) leaves.push_back(u);
      }
    }
    int c0 = -1;
    for (int v : order)
      if (!removed_v[v]) {
        c0 = v;
        break;
      }
    // cycle ports of c0
    int start_port = -1;
    for (int p = 0; p < ag.nodes[c0].arity(); ++p)
      if (!removed_v[pt[c0][p].first]) {
        start_port = p;
        break;
      }
    Scalar hang(1), wa(1), wb(1);
    int v = c0, out_port = start_port;
    for (;;) {
      auto [u, in_port] = pt[v][out_port];
      wb *= fe(v, out_port);
      wa *= fe(u, in_port);
      if (u == c0 && in_port != start_port) break;
      // leave u through its other cycle port
      int next = -1;
      for (int p = 0; p < ag.nodes[u].arity(); ++p)
        if (p != in_port && !removed_v[pt[u][p].first]) {
          next = p;
          break;
        }
      v = u;
      out_port = next;
    }
    for (int x : order)
      if (!removed_v[x]) hang *= acc[x];
    z *= (wa + wb) * hang;
  }
  return z;
}

}  // namespace holant
