#pragma once

#include <map>
#include <string>
#include <vector>

#include "holant/numerics.hpp"

namespace holant {

// Dense factor over Boolean variables; vars[0] is the most significant bit.
struct Factor {
  std::vector<int> vars;
  std::vector<Scalar> table;
};

enum class StepKind { AbsorbVertex, ContractEdge };

struct PlanStep {
  StepKind kind;
  int id;                // vertex id or variable (edge) id
  int predicted_arity;  // arity of the intermediate after this step
};

struct ContractionPlan {
  std::vector<PlanStep> steps;
  int cap = 18;
  int max_arity() const;
};

enum class Order { Greedy, Exhaustive };

int& contraction_cap();

// Sum-product network: value(free) = sum over all other variables of the
// product of factors. Variables are arbitrary non-negative ints.
class Network {
 public:
  // Repeated variables in `vars` are allowed and read the diagonal.
  void add_factor(std::vector<int> vars, std::vector<Scalar> table);
  // Optional tie-break key for a variable (lexicographically smaller first).
  void set_key(int var, std::vector<long> key) { keys_[var] = std::move(key); }

  ContractionPlan plan(const std::vector<int>& free_vars, Order order, int cap) const;
  // Result table over free_vars in the given order.
  std::vector<Scalar> contract(const std::vector<int>& free_vars, const ContractionPlan& plan) const;
  std::vector<Scalar> contract(const std::vector<int>& free_vars, Order order = Order::Greedy,
                               int cap = -1) const;

 private:
  std::vector<Factor> factors_;
  std::map<int, std::vector<long>> keys_;
  std::vector<int> bound_vars(const std::vector<int>& free_vars) const;
};

}  // namespace holant
