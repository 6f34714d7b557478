#pragma once

#include <string>
#include <utility>
#include <vector>

#include "holant/formula.hpp"
#include "holant/signature.hpp"

namespace holant {

// M = P L D U with P in {I, X}.
struct Factorization {
  Mat2 P, L, D, U;
};

Factorization pldu(const Mat2& m);

enum class TriSide { Upper, Lower };

struct Triangularization {
  Mat2 Q;  // orthogonal, K1 or K2
  Mat2 R;  // Q^{-1} M, triangular on the requested side
  std::string kind;  // "orthogonal", "K1", "K2"
};

Triangularization triangularize(const Mat2& m, TriSide side);

// 2n-ary unitary whose first column is a / |a|.
Signature unitary_completion(const std::vector<Scalar>& a);

struct GadgetRecipe {
  PpsHFormula formula;
  Signature claimed;
  std::string lemma;
  std::vector<std::pair<std::string, std::string>> params;
};

Signature evaluate_recipe(const GadgetRecipe& r);
// Max entry difference between the evaluated formula and the claim, relative to max(1, |claim|).
double recipe_residual(const GadgetRecipe& r);

// f = R o EQ3 with R = (a b; 0 1/a).
Signature ghz_generator(const Scalar& a, const Scalar& b);
GadgetRecipe binary_from_ghz(const Scalar& a, const Scalar& b, const Signature& target);
GadgetRecipe binary_from_ghz(const Signature& f, const Signature& target);
// f = [1,0,0,a], g = [b,1,c]
GadgetRecipe binary_from_tractable_pair(const Signature& f, const Signature& g, const Signature& target);
GadgetRecipe ghz_from_w(const Signature& f, const Signature& s1, const Signature& s2);
GadgetRecipe express_E(const Signature& f, const Mat2& m);
GadgetRecipe express_M(const Signature& f);

struct IdentityResult {
  std::string name;
  int draws = 0;
  double max_residual = 0;
  bool exact = false;  // every draw evaluated in the exact backend
  bool passed = false;
};

std::vector<IdentityResult> verify_appendix(int draws = 50, unsigned long seed = 0, double threshold = 1e-6);

}  // namespace holant
