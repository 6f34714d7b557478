#pragma once

#include <optional>
#include <string>

#include "holant/grid.hpp"
#include "holant/network.hpp"

namespace holant {

int& edge_budget();

Scalar holant_brute(const SignatureGrid& g, int budget = -1);
Signature realize_gadget(const SignatureGrid& g, int budget = -1);

ContractionPlan plan_contraction(const SignatureGrid& g, Order order = Order::Greedy, int cap = -1);
// Realized function over the dangling edges (nullary for closed grids).
Signature contract_grid(const SignatureGrid& g, const std::optional<ContractionPlan>& plan = std::nullopt,
                        Order order = Order::Greedy, int cap = -1);
Scalar holant_contract(const SignatureGrid& g, const std::optional<ContractionPlan>& plan = std::nullopt,
                       Order order = Order::Greedy, int cap = -1);

enum class EStrip { None, Orthogonal, K1 };

Scalar holant_T(const SignatureGrid& g);
// `transform` is the orthogonal O for EStrip::Orthogonal and ignored otherwise.
Scalar holant_E(const SignatureGrid& g, EStrip strip, const Mat2& transform = Mat2::identity());
// Strips M from every vertex; M^T M must be I (edges stay equalities) or X (edges become NEQ).
Scalar holant_E_with(const SignatureGrid& g, const Mat2& m);
Scalar holant_KM(const SignatureGrid& g, const Mat2& k);

}  // namespace holant
