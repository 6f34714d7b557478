#pragma once

#include <random>
#include <vector>

#include "holant/grid.hpp"
#include "holant/reductions.hpp"

namespace holant {

using Rng = std::mt19937_64;

// Small rationals p/q with |p| <= 4, q in 1..3.
Scalar random_rational(Rng& rng, bool allow_zero = true);
// a + b i with random_rational parts, nonzero.
Scalar random_gaussian(Rng& rng);
// Invertible matrix with Gaussian-rational entries.
Mat2 random_invertible(Rng& rng);
Signature random_signature(Rng& rng, int arity, bool gaussian = false);

// Closed multigraph grid: self-loops and parallel edges allowed.
SignatureGrid random_closed_grid(Rng& rng, int max_vertices = 8, int max_edges = 12, int max_arity = 4);
// Same shape with a random 2-coloring of vertices and only cross edges.
SignatureGrid random_bipartite_grid(Rng& rng, int max_vertices = 8, int max_edges = 12, int max_arity = 4);
// Wires the given signatures into a closed grid by a random perfect matching of their legs.
SignatureGrid wire_randomly(Rng& rng, const std::vector<Signature>& fs);

Signature random_T_member(Rng& rng, int arity);
Signature random_E_member(Rng& rng, int arity, bool allow_zero = true);
Signature random_M_member(Rng& rng, int arity, bool allow_zero = true);

enum class GridFamily { T, E_none, E_orthogonal, E_K1, KM_K1, KM_K2 };
const char* family_name(GridFamily f);
// Exact orthogonal transform used for the E_orthogonal family.
Mat2 family_orthogonal();
SignatureGrid random_family_grid(Rng& rng, GridFamily fam, int max_edges = 12);
// Closed unicyclic grid with n vertices of arity <= 3 over the family, drawing
// vertex signatures from `pool` members per arity.
SignatureGrid large_family_grid(Rng& rng, GridFamily fam, int n, int pool = 64);

SimpleGraph random_graph(Rng& rng, int n, int max_degree = 3);
std::vector<SimpleGraph> all_graphs(int n);

CspInstance random_csp(Rng& rng, int max_vars = 6, int max_constraints = 5);

}  // namespace holant
