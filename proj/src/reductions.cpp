#include "holant/reductions.hpp"

#include <algorithm>

#include "holant/evaluation.hpp"
#include "holant/io.hpp"

namespace holant {

std::vector<std::vector<int>> SimpleGraph::adjacency() const {
  std::vector<std::vector<int>> adj(n);
  for (auto [u, v] : edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  return adj;
}

int SimpleGraph::max_degree() const {
  int m = 0;
  for (auto& a : adjacency()) m = std::max(m, static_cast<int>(a.size()));
  return m;
}

CspInstance csp_from_json(const json& j) {
  CspInstance csp;
  std::map<std::string, int> ids;
  auto id = [&](const std::string& name) {
    auto it = ids.find(name);
    if (it != ids.end()) return it->second;
    csp.variables.push_back(name);
    return ids[name] = static_cast<int>(csp.variables.size()) - 1;
  };
  if (j.contains("variables"))
    for (auto& v : j.at("variables")) id(v.get<std::string>());
  for (auto& at : j.at("atoms")) {
    std::vector<int> scope;
    for (auto& n : at.at("scope")) scope.push_back(id(n.get<std::string>()));
    Signature f = signature_from_json(at.at("fn"));
    if (static_cast<int>(scope.size()) != f.arity()) throw ArityMismatch("constraint scope length differs from arity");
    csp.constraints.push_back({f, scope});
  }
  return csp;
}

SimpleGraph graph_from_json(const json& j) {
  SimpleGraph G;
  G.n = j.at("n").get<int>();
  if (G.n < 0) throw ValidationError("negative vertex count");
  for (auto& e : j.at("edges")) {
    int u = e.at(0).get<int>(), v = e.at(1).get<int>();
    if (u < 0 || v < 0 || u >= G.n || v >= G.n) throw ValidationError("edge endpoint out of range");
    if (u == v) throw ValidationError("self-loop at vertex " + std::to_string(u));
    G.edges.push_back({u, v});
  }
  return G;
}

json graph_to_json(const SimpleGraph& G) {
  json e = json::array();
  for (auto [u, v] : G.edges) e.push_back({u, v});
  return {{"n", G.n}, {"edges", e}};
}

namespace {

void require_bipartite(const SignatureGrid& g) {
  if (!g.bipartition) throw NotBipartite("grid has no bipartition");
  require_valid(g);
}

Side other(Side s) { return s == Side::Left ? Side::Right : Side::Left; }

bool same_function(const Signature& a, const Signature& b) {
  if (a.arity() != b.arity()) return false;
  if (a.is_exact() && b.is_exact()) return a == b;
  return approx_eq(a, b);
}

// Port remapping for substitutions: ports of replaced vertices map to gadget ports.
struct Splice {
  SignatureGrid out;
  std::map<Port, Port> port_map;
};

Port mapped(const Splice& s, const Port& p) {
  auto it = s.port_map.find(p);
  return it == s.port_map.end() ? p : it->second;
}

SignatureGrid substitute(const SignatureGrid& g, const GadgetMap& map, bool bipartite) {
  require_valid(g);
  if (bipartite) require_bipartite(g);
  for (auto& [f, gadget] : map) {
    require_valid(gadget);
    if (static_cast<int>(gadget.dangling.size()) != f.arity())
      throw RuleInapplicable("gadget has " + std::to_string(gadget.dangling.size()) + " dangling edges for an arity-" +
                             std::to_string(f.arity()) + " function");
    if (bipartite && !gadget.bipartition) throw RuleInapplicable("bipartite substitution needs bipartite gadgets");
    if (!same_function(realize_gadget(gadget), f)) throw RuleInapplicable("gadget does not realize its function");
  }
  Splice s;
  if (bipartite) s.out.bipartition.emplace();
  int next = g.next_id();
  for (auto& [id, f] : g.vertices) {
    const std::pair<Signature, SignatureGrid>* hit = nullptr;
    for (auto& entry : map)
      if (same_function(entry.first, f)) {
        hit = &entry;
        break;
      }
    Side side = bipartite ? g.bipartition->at(id) : Side::Left;
    if (!hit) {
      s.out.vertices.emplace(id, f);
      if (bipartite) (*s.out.bipartition)[id] = side;
      continue;
    }
    const SignatureGrid& gad = hit->second;
    bool flip = false;
    if (bipartite && !gad.dangling.empty()) {
      Side dside = gad.bipartition->at(gad.dangling[0].vertex);
      for (auto& p : gad.dangling)
        if (gad.bipartition->at(p.vertex) != dside) throw RuleInapplicable("gadget dangling edges sit on both sides");
      flip = dside != side;
    }
    std::map<int, int> rename;
    for (auto& [gid, gf] : gad.vertices) {
      rename[gid] = next;
      s.out.vertices.emplace(next, gf);
      if (bipartite) {
        Side gs = gad.bipartition->at(gid);
        (*s.out.bipartition)[next] = flip ? other(gs) : gs;
      }
      ++next;
    }
    for (auto& [p, q] : gad.edges)
      s.out.edges.push_back({{rename[p.vertex], p.slot}, {rename[q.vertex], q.slot}});
    for (std::size_t k = 0; k < gad.dangling.size(); ++k)
      s.port_map[{id, static_cast<int>(k) + 1}] = {rename[gad.dangling[k].vertex], gad.dangling[k].slot};
  }
  for (auto& [p, q] : g.edges) s.out.edges.push_back({mapped(s, p), mapped(s, q)});
  for (auto& p : g.dangling) s.out.dangling.push_back(mapped(s, p));
  return s.out;
}

}  // namespace

SignatureGrid valiant_transform(const SignatureGrid& g, const Mat2& m) {
  require_bipartite(g);
  if (m.det().is_zero()) throw SingularMatrix("transform is singular");
  Mat2 right = m.inverse().transpose();
  SignatureGrid out = g;
  for (auto& [id, f] : out.vertices) f = holo(g.bipartition->at(id) == Side::Left ? m : right, f);
  return out;
}

SignatureGrid rewrite_subdivide(const SignatureGrid& g) {
  require_valid(g);
  SignatureGrid out;
  out.vertices = g.vertices;
  out.dangling = g.dangling;
  out.bipartition.emplace();
  for (auto& [id, f] : g.vertices) (*out.bipartition)[id] = Side::Left;
  int next = g.next_id();
  for (auto& [p, q] : g.edges) {
    int w = next++;
    out.vertices.emplace(w, EQ(2));
    (*out.bipartition)[w] = Side::Right;
    out.edges.push_back({p, {w, 1}});
    out.edges.push_back({{w, 2}, q});
  }
  return out;
}

SignatureGrid rewrite_unsubdivide(const SignatureGrid& g) {
  require_bipartite(g);
  std::map<Port, Port> partner;
  for (auto& [p, q] : g.edges) {
    partner[p] = q;
    partner[q] = p;
  }
  SignatureGrid out;
  out.dangling = g.dangling;
  for (auto& [id, f] : g.vertices) {
    if (g.bipartition->at(id) == Side::Left) {
      out.vertices.emplace(id, f);
      continue;
    }
    if (f != EQ(2)) throw RuleInapplicable("right vertex " + std::to_string(id) + " is not EQ2");
    if (!partner.count({id, 1}) || !partner.count({id, 2}))
      throw RuleInapplicable("right vertex " + std::to_string(id) + " has a dangling edge");
    out.edges.push_back({partner[{id, 1}], partner[{id, 2}]});
  }
  return out;
}

SignatureGrid rewrite_bipartify(const SignatureGrid& g, const std::map<int, Side>& part) {
  require_valid(g);
  for (auto& [id, f] : g.vertices)
    if (!part.count(id)) throw RuleInapplicable("vertex " + std::to_string(id) + " has no side");
  SignatureGrid out;
  out.vertices = g.vertices;
  out.dangling = g.dangling;
  out.bipartition.emplace();
  for (auto& [id, f] : g.vertices) (*out.bipartition)[id] = part.at(id);
  int next = g.next_id();
  for (auto& [p, q] : g.edges) {
    Side sp = part.at(p.vertex), sq = part.at(q.vertex);
    if (sp != sq) {
      out.edges.push_back({p, q});
      continue;
    }
    int w = next++;
    out.vertices.emplace(w, EQ(2));
    (*out.bipartition)[w] = other(sp);
    out.edges.push_back({p, {w, 1}});
    out.edges.push_back({{w, 2}, q});
  }
  return out;
}

SignatureGrid rewrite_forget(const SignatureGrid& g) {
  if (!g.bipartition) throw RuleInapplicable("grid has no bipartition to forget");
  SignatureGrid out = g;
  out.bipartition.reset();
  return out;
}

SignatureGrid rewrite_substitute(const SignatureGrid& g, const GadgetMap& map) { return substitute(g, map, false); }

SignatureGrid rewrite_substitute_bipartite(const SignatureGrid& g, const GadgetMap& map) {
  return substitute(g, map, true);
}

SignatureGrid strip_K(const SignatureGrid& g, const Mat2& k) {
  require_valid(g);
  Mat2 kinv = k.inverse();
  SignatureGrid out;
  out.dangling = g.dangling;
  out.bipartition.emplace();
  for (auto& [id, f] : g.vertices) {
    out.vertices.emplace(id, holo(kinv, f));
    (*out.bipartition)[id] = Side::Left;
  }
  int next = g.next_id();
  for (auto& [p, q] : g.edges) {
    int w = next++;
    out.vertices.emplace(w, NEQ());
    (*out.bipartition)[w] = Side::Right;
    out.edges.push_back({p, {w, 1}});
    out.edges.push_back({{w, 2}, q});
  }
  return out;
}

SignatureGrid csp_to_grid(const CspInstance& csp) {
  const int nv = static_cast<int>(csp.variables.size());
  std::vector<std::vector<Port>> occ(nv);
  SignatureGrid g;
  g.bipartition.emplace();
  int id = 0;
  for (auto& [f, scope] : csp.constraints) {
    if (static_cast<int>(scope.size()) != f.arity()) throw ArityMismatch("constraint scope length differs from arity");
    g.vertices.emplace(id, f);
    (*g.bipartition)[id] = Side::Left;
    for (std::size_t p = 0; p < scope.size(); ++p) {
      if (scope[p] < 0 || scope[p] >= nv) throw IndexOutOfRange("constraint scope names an unknown variable");
      occ[scope[p]].push_back({id, static_cast<int>(p) + 1});
    }
    ++id;
  }
  for (int v = 0; v < nv; ++v) {
    if (occ[v].empty()) throw UnusedVariable("variable " + csp.variables[v] + " occurs in no constraint");
    int w = id++;
    g.vertices.emplace(w, EQ(static_cast<int>(occ[v].size())));
    (*g.bipartition)[w] = Side::Right;
    for (std::size_t k = 0; k < occ[v].size(); ++k) g.edges.push_back({occ[v][k], {w, static_cast<int>(k) + 1}});
  }
  return g;
}

Scalar csp_brute(const CspInstance& csp, int budget) {
  const int nv = static_cast<int>(csp.variables.size());
  if (nv > budget) throw BudgetExceeded(std::to_string(nv) + " variables exceed budget " + std::to_string(budget));
  Scalar total(0);
  for (std::size_t x = 0; x < (std::size_t(1) << nv); ++x) {
    Scalar p(1);
    for (auto& [f, scope] : csp.constraints) {
      std::size_t idx = 0;
      for (int v : scope) idx = (idx << 1) | ((x >> v) & 1);
      p *= f[idx];
      if (p.is_exact_zero()) break;
    }
    total += p;
  }
  return total;
}

SignatureGrid independent_set_grid(const SimpleGraph& G, const Scalar& lambda) {
  auto adj = G.adjacency();
  for (int v = 0; v < G.n; ++v)
    if (static_cast<int>(adj[v].size()) + 1 > arity_cap())
      throw DegreeTooLarge("vertex " + std::to_string(v) + " has degree " + std::to_string(adj[v].size()));
  SignatureGrid g;
  g.bipartition.emplace();
  std::vector<int> used(G.n, 1);  // slot 1 holds the activity unary
  for (int v = 0; v < G.n; ++v) {
    g.vertices.emplace(v, EQ(static_cast<int>(adj[v].size()) + 1));
    (*g.bipartition)[v] = Side::Left;
  }
  int next = G.n;
  const Signature act = Signature::unary(1, lambda), nand = make_named("NAND", 2);
  for (int v = 0; v < G.n; ++v) {
    int u = next++;
    g.vertices.emplace(u, act);
    (*g.bipartition)[u] = Side::Right;
    g.edges.push_back({{v, 1}, {u, 1}});
  }
  for (auto [a, b] : G.edges) {
    int w = next++;
    g.vertices.emplace(w, nand);
    (*g.bipartition)[w] = Side::Right;
    g.edges.push_back({{a, ++used[a]}, {w, 1}});
    g.edges.push_back({{b, ++used[b]}, {w, 2}});
  }
  return g;
}

std::vector<long> independent_set_counts(const SimpleGraph& G) {
  if (G.n > 24) throw BudgetExceeded("independent set enumeration limited to 24 vertices");
  std::vector<std::uint32_t> nbr(G.n, 0);
  for (auto [u, v] : G.edges) {
    nbr[u] |= 1u << v;
    nbr[v] |= 1u << u;
  }
  std::vector<long> counts(G.n + 1, 0);
  for (std::uint32_t s = 0; s < (1u << G.n); ++s) {
    bool ok = true;
    for (int v = 0; v < G.n && ok; ++v)
      if ((s >> v) & 1) ok = (nbr[v] & s) == 0;
    if (ok) ++counts[__builtin_popcount(s)];
  }
  return counts;
}

Scalar independent_set_poly_brute(const SimpleGraph& G, const Scalar& lambda) {
  auto counts = independent_set_counts(G);
  Scalar total(0), pw(1);
  for (long c : counts) {
    total += Scalar(c) * pw;
    pw *= lambda;
  }
  return total;
}

}  // namespace holant
