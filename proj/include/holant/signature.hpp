#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "holant/numerics.hpp"

namespace holant {

int& arity_cap();

// Dense table of 2^k values; x1 is the most significant bit of the index.
class Signature {
 public:
  Signature() : arity_(0), values_{Scalar(1)} {}
  Signature(int arity, std::vector<Scalar> values);

  static Signature nullary(const Scalar& v) { return Signature(0, {v}); }
  static Signature unary(const Scalar& a, const Scalar& b) { return Signature(1, {a, b}); }
  static Signature symmetric(const std::vector<Scalar>& entries);
  static Signature binary(const Mat2& m) { return Signature(2, {m.a, m.b, m.c, m.d}); }

  int arity() const { return arity_; }
  std::size_t size() const { return values_.size(); }
  const std::vector<Scalar>& values() const { return values_; }
  const Scalar& operator[](std::size_t idx) const { return values_[idx]; }
  Scalar& operator[](std::size_t idx) { return values_[idx]; }
  // bits[j] is x_{j+1}
  const Scalar& at(const std::vector<int>& bits) const;

  bool is_exact() const;
  bool is_zero(double tol = -1) const;
  Signature to_approx() const;
  Signature scaled(const Scalar& s) const;
  bool is_symmetric() const;

  friend bool operator==(const Signature& a, const Signature& b) {
    return a.arity_ == b.arity_ && a.values_ == b.values_;
  }
  friend bool operator!=(const Signature& a, const Signature& b) { return !(a == b); }

 private:
  int arity_;
  std::vector<Scalar> values_;
};

bool approx_eq(const Signature& a, const Signature& b, double tol = -1);
// Max absolute entry difference.
double residual(const Signature& a, const Signature& b);

// EQ, NEQ, ONE, NAND, EVEN3, DELTA0, DELTA1, U (needs lambda)
Signature make_named(const std::string& name, int arity, const Scalar& lambda = Scalar(0));
Signature EQ(int k);
Signature ONE(int k);
Signature NEQ();

Signature tensor(const Signature& f, const Signature& g);
// pi is 0-based: result(x) = f(x_{pi(0)}, ..., x_{pi(k-1)})
Signature permute(const Signature& f, const std::vector<int>& pi);
// 1-based positions, i < j
Signature contract(const Signature& f, int i, int j);
// Sum over y of f(.., y, ..) g(.., y, ..) joining leg i of f (1-based) with leg j of g.
Signature contract_pair(const Signature& f, int i, const Signature& g, int j);
Signature holo(const Mat2& m, const Signature& f);

Mat2 matrix_view(const Signature& f);

struct AtomDecomposition {
  Scalar scalar;
  std::vector<Signature> atoms;
  // 0-based argument positions per atom, each block ascending.
  std::vector<std::vector<int>> placement;
};

AtomDecomposition decompose_atoms(const Signature& f);
Signature reassemble(const AtomDecomposition& d, int arity);

enum class Family { E, M, T_atoms };

bool family_test(const Signature& f, Family family);
bool family_test(const Signature& f, Family family, const Mat2& pre_transform);
bool is_unitary(const Signature& f, double tol = -1);

}  // namespace holant
