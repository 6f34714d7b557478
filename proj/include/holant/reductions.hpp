#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "holant/grid.hpp"

namespace holant {

struct CspInstance {
  std::vector<std::string> variables;
  // scope entries index into variables; repeats allowed
  std::vector<std::pair<Signature, std::vector<int>>> constraints;
};

struct SimpleGraph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;

  std::vector<std::vector<int>> adjacency() const;
  int max_degree() const;
};

CspInstance csp_from_json(const nlohmann::json& j);
SimpleGraph graph_from_json(const nlohmann::json& j);
nlohmann::json graph_to_json(const SimpleGraph& g);

// Left f -> M o f, Right g -> (M^{-1})^T o g.
SignatureGrid valiant_transform(const SignatureGrid& g, const Mat2& m);

using GadgetMap = std::vector<std::pair<Signature, SignatureGrid>>;

SignatureGrid rewrite_subdivide(const SignatureGrid& g);
SignatureGrid rewrite_unsubdivide(const SignatureGrid& g);
SignatureGrid rewrite_bipartify(const SignatureGrid& g, const std::map<int, Side>& part);
SignatureGrid rewrite_forget(const SignatureGrid& g);
SignatureGrid rewrite_substitute(const SignatureGrid& g, const GadgetMap& map);
SignatureGrid rewrite_substitute_bipartite(const SignatureGrid& g, const GadgetMap& map);

// Replaces every vertex f by K^{-1} o f and subdivides every edge with NEQ.
// Closed grids keep Z; dangling legs come out transformed by K^{-1}.
SignatureGrid strip_K(const SignatureGrid& g, const Mat2& k);

SignatureGrid csp_to_grid(const CspInstance& csp);
Scalar csp_brute(const CspInstance& csp, int budget = 24);

SignatureGrid independent_set_grid(const SimpleGraph& G, const Scalar& lambda);
Scalar independent_set_poly_brute(const SimpleGraph& G, const Scalar& lambda);
// counts[k] = number of independent sets of size k
std::vector<long> independent_set_counts(const SimpleGraph& G);

}  // namespace holant
