#include "holant/grid.hpp"

#include <set>

namespace holant {

int SignatureGrid::add_vertex(const Signature& f) {
  int id = next_id();
  vertices.emplace(id, f);
  return id;
}

int SignatureGrid::add_vertex(const Signature& f, Side side) {
  int id = add_vertex(f);
  if (!bipartition) bipartition.emplace();
  (*bipartition)[id] = side;
  return id;
}

std::string ValidationReport::summary() const {
  std::string s;
  for (auto& i : issues) {
    if (!s.empty()) s += "; ";
    s += i.where + ": " + i.message;
  }
  return s;
}

ValidationReport validate(const SignatureGrid& g) {
  ValidationReport rep;
  auto issue = [&](std::string where, std::string msg) {
    rep.ok = false;
    rep.issues.push_back({std::move(where), std::move(msg)});
  };
  std::map<Port, int> uses;
  auto use = [&](const Port& p, const std::string& where) {
    auto it = g.vertices.find(p.vertex);
    if (it == g.vertices.end()) {
      issue(where, "unknown vertex " + std::to_string(p.vertex));
      return;
    }
    if (p.slot < 1 || p.slot > it->second.arity()) {
      issue(where, "slot " + std::to_string(p.slot) + " out of range for vertex " + std::to_string(p.vertex));
      return;
    }
    ++uses[p];
  };
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    use(g.edges[e].first, "edge " + std::to_string(e));
    use(g.edges[e].second, "edge " + std::to_string(e));
  }
  for (std::size_t d = 0; d < g.dangling.size(); ++d) use(g.dangling[d], "dangling " + std::to_string(d));
  for (auto& [id, f] : g.vertices) {
    for (int s = 1; s <= f.arity(); ++s) {
      auto it = uses.find({id, s});
      std::string where = "vertex " + std::to_string(id);
      if (it == uses.end())
        issue(where, "port " + std::to_string(s) + " unbound");
      else if (it->second > 1)
        issue(where, "port " + std::to_string(s) + " bound " + std::to_string(it->second) + " times");
    }
  }
  if (g.bipartition) {
    const auto& side = *g.bipartition;
    for (auto& [id, f] : g.vertices)
      if (!side.count(id)) issue("vertex " + std::to_string(id), "missing bipartition side");
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      auto a = side.find(g.edges[e].first.vertex), b = side.find(g.edges[e].second.vertex);
      if (a != side.end() && b != side.end() && a->second == b->second)
        issue("edge " + std::to_string(e), "edge violates bipartition");
    }
  }
  return rep;
}

void require_valid(const SignatureGrid& g) {
  auto rep = validate(g);
  if (!rep.ok) throw ValidationError(rep.summary());
}

SignatureGrid disjoint_union(const SignatureGrid& g1, const SignatureGrid& g2) {
  SignatureGrid out;
  std::map<int, int> m1, m2;
  int next = 0;
  for (auto& [id, f] : g1.vertices) {
    m1[id] = next;
    out.vertices.emplace(next++, f);
  }
  for (auto& [id, f] : g2.vertices) {
    m2[id] = next;
    out.vertices.emplace(next++, f);
  }
  auto remap = [](const std::map<int, int>& m, const Port& p) { return Port{m.at(p.vertex), p.slot}; };
  for (auto& [a, b] : g1.edges) out.edges.push_back({remap(m1, a), remap(m1, b)});
  for (auto& [a, b] : g2.edges) out.edges.push_back({remap(m2, a), remap(m2, b)});
  for (auto& p : g1.dangling) out.dangling.push_back(remap(m1, p));
  for (auto& p : g2.dangling) out.dangling.push_back(remap(m2, p));
  if (g1.bipartition || g2.bipartition) {
    out.bipartition.emplace();
    if (g1.bipartition)
      for (auto& [id, s] : *g1.bipartition) (*out.bipartition)[m1.at(id)] = s;
    if (g2.bipartition)
      for (auto& [id, s] : *g2.bipartition) (*out.bipartition)[m2.at(id)] = s;
  }
  return out;
}

}  // namespace holant
