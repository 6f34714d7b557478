#include "holant/random_instances.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace holant {

namespace {

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

// Assigns slots in shuffled order so port numbering is not tied to edge order.
SignatureGrid assemble(Rng& rng, int n, const std::vector<std::pair<int, int>>& ends,
                       const std::vector<Signature>& fs) {
  std::vector<std::vector<int>> slots(n);
  std::vector<int> deg(n, 0);
  for (auto [u, v] : ends) {
    ++deg[u];
    ++deg[v];
  }
  for (int v = 0; v < n; ++v) {
    slots[v].resize(deg[v]);
    std::iota(slots[v].begin(), slots[v].end(), 1);
    std::shuffle(slots[v].begin(), slots[v].end(), rng);
  }
  std::vector<int> used(n, 0);
  SignatureGrid g;
  for (int v = 0; v < n; ++v) g.vertices.emplace(v, fs[v]);
  for (auto [u, v] : ends) {
    int s = slots[u][used[u]++];
    int t = slots[v][used[v]++];
    g.edges.push_back({{u, s}, {v, t}});
  }
  return g;
}

std::vector<std::pair<int, int>> random_ends(Rng& rng, int n, int m, int max_arity, const std::vector<int>* side) {
  std::vector<int> deg(n, 0);
  std::vector<std::pair<int, int>> ends;
  for (int tries = 0; static_cast<int>(ends.size()) < m && tries < 50 * m; ++tries) {
    int u = uniform(rng, 0, n - 1), v = uniform(rng, 0, n - 1);
    if (side && (*side)[u] == (*side)[v]) continue;
    if (u == v ? deg[u] + 2 > max_arity : (deg[u] >= max_arity || deg[v] >= max_arity)) continue;
    ++deg[u];
    ++deg[v];
    ends.push_back({u, v});
  }
  return ends;
}

std::vector<Signature> signatures_for(Rng& rng, int n, const std::vector<std::pair<int, int>>& ends) {
  std::vector<int> deg(n, 0);
  for (auto [u, v] : ends) {
    ++deg[u];
    ++deg[v];
  }
  std::vector<Signature> fs;
  for (int v = 0; v < n; ++v) fs.push_back(random_signature(rng, deg[v], uniform(rng, 0, 3) == 0));
  return fs;
}

}  // namespace

Scalar random_rational(Rng& rng, bool allow_zero) {
  for (;;) {
    long p = uniform(rng, -4, 4), q = uniform(rng, 1, 3);
    if (p != 0 || allow_zero) return Scalar::rational(p, q);
  }
}

Scalar random_gaussian(Rng& rng) {
  for (;;) {
    Scalar re = random_rational(rng), im = random_rational(rng);
    if (!re.is_exact_zero() || !im.is_exact_zero()) return re + im * Scalar(CycScalar::imag());
  }
}

Mat2 random_invertible(Rng& rng) {
  for (;;) {
    Mat2 m{random_gaussian(rng), random_gaussian(rng), random_gaussian(rng), random_gaussian(rng)};
    if (!m.det().is_exact_zero()) return m;
  }
}

Signature random_signature(Rng& rng, int arity, bool gaussian) {
  std::vector<Scalar> v;
  for (std::size_t x = 0; x < (std::size_t(1) << arity); ++x) {
    Scalar s = random_rational(rng);
    if (gaussian) s += random_rational(rng) * Scalar(CycScalar::imag());
    v.push_back(s);
  }
  return Signature(arity, v);
}

SignatureGrid random_closed_grid(Rng& rng, int max_vertices, int max_edges, int max_arity) {
  int n = uniform(rng, 1, max_vertices);
  int m = uniform(rng, 0, max_edges);
  auto ends = random_ends(rng, n, m, max_arity, nullptr);
  return assemble(rng, n, ends, signatures_for(rng, n, ends));
}

SignatureGrid random_bipartite_grid(Rng& rng, int max_vertices, int max_edges, int max_arity) {
  int n = uniform(rng, 2, std::max(2, max_vertices));
  std::vector<int> side(n);
  for (int v = 0; v < n; ++v) side[v] = v == 0 ? 0 : v == 1 ? 1 : uniform(rng, 0, 1);
  int m = uniform(rng, 1, max_edges);
  auto ends = random_ends(rng, n, m, max_arity, &side);
  SignatureGrid g = assemble(rng, n, ends, signatures_for(rng, n, ends));
  g.bipartition.emplace();
  for (int v = 0; v < n; ++v) (*g.bipartition)[v] = side[v] ? Side::Right : Side::Left;
  return g;
}

SignatureGrid wire_randomly(Rng& rng, const std::vector<Signature>& fs) {
  std::vector<Port> halves;
  for (std::size_t v = 0; v < fs.size(); ++v)
    for (int s = 1; s <= fs[v].arity(); ++s) halves.push_back({static_cast<int>(v), s});
  if (halves.size() % 2) throw PreconditionViolated("odd number of legs cannot be wired closed");
  std::shuffle(halves.begin(), halves.end(), rng);
  SignatureGrid g;
  for (std::size_t v = 0; v < fs.size(); ++v) g.vertices.emplace(static_cast<int>(v), fs[v]);
  for (std::size_t k = 0; k < halves.size(); k += 2) g.edges.push_back({halves[k], halves[k + 1]});
  return g;
}

Signature random_T_member(Rng& rng, int arity) {
  Signature f = Signature::nullary(random_rational(rng, false));
  int left = arity;
  while (left > 0) {
    int k = left >= 2 && uniform(rng, 0, 1) ? 2 : 1;
    f = tensor(f, random_signature(rng, k));
    left -= k;
  }
  std::vector<int> pi(arity);
  std::iota(pi.begin(), pi.end(), 0);
  std::shuffle(pi.begin(), pi.end(), rng);
  return permute(f, pi);
}

Signature random_E_member(Rng& rng, int arity, bool allow_zero) {
  std::vector<Scalar> v(std::size_t(1) << arity, Scalar(0));
  std::size_t a = std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng);
  v[a] = random_rational(rng, allow_zero);
  v[a ^ (v.size() - 1)] = random_rational(rng, allow_zero);
  return Signature(arity, v);
}

Signature random_M_member(Rng& rng, int arity, bool allow_zero) {
  std::vector<Scalar> v(std::size_t(1) << arity, Scalar(0));
  v[0] = random_rational(rng, allow_zero);
  for (int j = 0; j < arity; ++j) v[std::size_t(1) << j] = random_rational(rng, allow_zero);
  return Signature(arity, v);
}

const char* family_name(GridFamily f) {
  switch (f) {
    case GridFamily::T: return "T";
    case GridFamily::E_none: return "E";
    case GridFamily::E_orthogonal: return "O o E";
    case GridFamily::E_K1: return "K1 o E";
    case GridFamily::KM_K1: return "K1 o M";
    case GridFamily::KM_K2: return "K2 o M";
  }
  return "?";
}

Mat2 family_orthogonal() { return {Scalar::rational(3, 5), Scalar::rational(-4, 5), Scalar::rational(4, 5), Scalar::rational(3, 5)}; }

namespace {

Signature family_member(Rng& rng, GridFamily fam, int arity, bool allow_zero = true) {
  switch (fam) {
    case GridFamily::T: return random_T_member(rng, arity);
    case GridFamily::E_none: return random_E_member(rng, arity, allow_zero);
    case GridFamily::E_orthogonal: return holo(family_orthogonal(), random_E_member(rng, arity, allow_zero));
    case GridFamily::E_K1: return holo(Mat2::K1(), random_E_member(rng, arity, allow_zero));
    case GridFamily::KM_K1: return holo(Mat2::K1(), random_M_member(rng, arity, allow_zero));
    case GridFamily::KM_K2: return holo(Mat2::K2(), random_M_member(rng, arity, allow_zero));
  }
  return {};
}

std::vector<int> random_arities(Rng& rng, int count, int lo, int hi, int max_total) {
  std::vector<int> ar(count);
  int total = 0;
  for (int& a : ar) total += (a = uniform(rng, lo, hi));
  for (std::size_t k = 0; total > max_total || total % 2; k = (k + 1) % ar.size())
    if (ar[k] > lo || (total % 2 && total < max_total)) {
      int d = total > max_total || ar[k] > lo ? -1 : 1;
      ar[k] += d;
      total += d;
    }
  return ar;
}

}  // namespace

SignatureGrid random_family_grid(Rng& rng, GridFamily fam, int max_edges) {
  int n = uniform(rng, 1, 7);
  auto ar = random_arities(rng, n, 1, 4, 2 * max_edges);
  std::vector<Signature> fs;
  for (int a : ar) fs.push_back(family_member(rng, fam, a));
  return wire_randomly(rng, fs);
}

SignatureGrid large_family_grid(Rng& rng, GridFamily fam, int n, int pool) {
  // random tree with degrees <= 3, then one extra edge between two leaves
  std::vector<std::pair<int, int>> ends;
  std::vector<int> deg(n, 0), open{0};
  for (int v = 1; v < n; ++v) {
    std::size_t k = std::uniform_int_distribution<std::size_t>(0, open.size() - 1)(rng);
    int u = open[k];
    ends.push_back({u, v});
    if (++deg[u] == 3) {
      open[k] = open.back();
      open.pop_back();
    }
    ++deg[v];
    open.push_back(v);
  }
  std::vector<int> leaves;
  for (int v = 0; v < n; ++v)
    if (deg[v] == 1) leaves.push_back(v);
  if (leaves.size() >= 2) {
    ends.push_back({leaves[0], leaves.back()});
    ++deg[leaves[0]];
    ++deg[leaves.back()];
  }
  std::map<int, std::vector<Signature>> members;
  std::vector<Signature> fs;
  for (int v = 0; v < n; ++v) {
    auto& m = members[deg[v]];
    if (static_cast<int>(m.size()) < pool) {
      m.push_back(family_member(rng, fam, deg[v], false));
      fs.push_back(m.back());
    } else {
      fs.push_back(m[uniform(rng, 0, pool - 1)]);
    }
  }
  return assemble(rng, n, ends, fs);
}

SimpleGraph random_graph(Rng& rng, int n, int max_degree) {
  SimpleGraph G;
  G.n = n;
  if (n < 2) return G;
  std::vector<int> deg(n, 0);
  std::vector<std::vector<bool>> has(n, std::vector<bool>(n, false));
  int attempts = uniform(rng, 0, 2 * n);
  for (int t = 0; t < attempts; ++t) {
    int u = uniform(rng, 0, n - 1), v = uniform(rng, 0, n - 1);
    if (u == v || has[u][v] || deg[u] >= max_degree || deg[v] >= max_degree) continue;
    has[u][v] = has[v][u] = true;
    ++deg[u];
    ++deg[v];
    G.edges.push_back({std::min(u, v), std::max(u, v)});
  }
  return G;
}

std::vector<SimpleGraph> all_graphs(int n) {
  std::vector<std::pair<int, int>> pairs;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) pairs.push_back({u, v});
  std::vector<SimpleGraph> out;
  for (std::size_t mask = 0; mask < (std::size_t(1) << pairs.size()); ++mask) {
    SimpleGraph G;
    G.n = n;
    for (std::size_t k = 0; k < pairs.size(); ++k)
      if ((mask >> k) & 1) G.edges.push_back(pairs[k]);
    out.push_back(std::move(G));
  }
  return out;
}

CspInstance random_csp(Rng& rng, int max_vars, int max_constraints) {
  CspInstance csp;
  int nv = uniform(rng, 1, max_vars);
  for (int v = 0; v < nv; ++v) csp.variables.push_back("v" + std::to_string(v));
  std::vector<bool> used(nv, false);
  int nc = uniform(rng, 1, max_constraints);
  for (int c = 0; c < nc; ++c) {
    int k = uniform(rng, 1, 3);
    std::vector<int> scope;
    for (int j = 0; j < k; ++j) {
      scope.push_back(uniform(rng, 0, nv - 1));
      used[scope.back()] = true;
    }
    csp.constraints.push_back({random_signature(rng, k), scope});
  }
  for (int v = 0; v < nv; ++v)
    if (!used[v]) csp.constraints.push_back({random_signature(rng, 1), {v}});
  return csp;
}

}  // namespace holant
