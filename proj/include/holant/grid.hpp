#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "holant/signature.hpp"

namespace holant {

struct Port {
  int vertex = 0;
  int slot = 1;  // 1-based argument position
  friend bool operator==(const Port& a, const Port& b) { return a.vertex == b.vertex && a.slot == b.slot; }
  friend bool operator<(const Port& a, const Port& b) {
    return a.vertex != b.vertex ? a.vertex < b.vertex : a.slot < b.slot;
  }
};

enum class Side { Left, Right };

struct SignatureGrid {
  std::map<int, Signature> vertices;
  std::vector<std::pair<Port, Port>> edges;
  std::vector<Port> dangling;  // order = argument order of the realized function
  std::optional<std::map<int, Side>> bipartition;

  int next_id() const { return vertices.empty() ? 0 : vertices.rbegin()->first + 1; }
  int add_vertex(const Signature& f);
  int add_vertex(const Signature& f, Side side);
  void connect(int v, int s, int w, int t) { edges.push_back({{v, s}, {w, t}}); }
  bool closed() const { return dangling.empty(); }
};

struct ValidationIssue {
  std::string where;
  std::string message;
};

struct ValidationReport {
  bool ok = true;
  std::vector<ValidationIssue> issues;
  std::string summary() const;
};

ValidationReport validate(const SignatureGrid& g);
// Throws ValidationError carrying the report summary.
void require_valid(const SignatureGrid& g);

SignatureGrid disjoint_union(const SignatureGrid& g1, const SignatureGrid& g2);

}  // namespace holant
