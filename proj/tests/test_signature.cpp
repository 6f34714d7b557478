#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "holant/random_instances.hpp"
#include "holant/signature.hpp"

using namespace holant;

namespace {

int bit(std::size_t x, int k, int j) { return (x >> (k - 1 - j)) & 1; }

// holo by the defining sum over all z, independent of the per-leg sweep
Signature holo_direct(const Mat2& m, const Signature& f) {
  const int k = f.arity();
  std::vector<Scalar> out(f.size());
  for (std::size_t x = 0; x < f.size(); ++x)
    for (std::size_t z = 0; z < f.size(); ++z) {
      Scalar p = f[z];
      for (int j = 0; j < k; ++j) p *= m.at(bit(x, k, j), bit(z, k, j));
      out[x] += p;
    }
  return Signature(k, out);
}

Signature contract_direct(const Signature& f, int i, int j) {
  const int k = f.arity();
  std::vector<Scalar> out(std::size_t(1) << (k - 2));
  for (std::size_t x = 0; x < f.size(); ++x) {
    if (bit(x, k, i - 1) != bit(x, k, j - 1)) continue;
    std::size_t r = 0;
    for (int t = 0; t < k; ++t)
      if (t != i - 1 && t != j - 1) r = (r << 1) | bit(x, k, t);
    out[r] += f[x];
  }
  return Signature(k - 2, out);
}

}  // namespace

TEST_CASE("named functions") {
  CHECK(EQ(3).values() == std::vector<Scalar>{1, 0, 0, 0, 0, 0, 0, 1});
  CHECK(ONE(3).values() == std::vector<Scalar>{0, 1, 1, 0, 1, 0, 0, 0});
  CHECK(make_named("U", 1, Scalar(2)).values() == std::vector<Scalar>{1, 2});
  CHECK(make_named("NAND", 2).values() == std::vector<Scalar>{1, 1, 1, 0});
  CHECK(NEQ().values() == std::vector<Scalar>{0, 1, 1, 0});
}

TEST_CASE("tensor, permute, contract") {
  Signature d0 = make_named("DELTA0", 1);
  CHECK(tensor(d0, d0).values() == std::vector<Scalar>{1, 0, 0, 0});
  CHECK(tensor(EQ(2), Signature::nullary(3)).values() == std::vector<Scalar>{3, 0, 0, 3});
  CHECK(tensor(Signature::unary(1, 2), Signature::unary(3, 4)).values() == std::vector<Scalar>{3, 4, 6, 8});
  Signature t(2, {1, 2, 3, 4});
  CHECK(permute(t, {1, 0}).values() == std::vector<Scalar>{1, 3, 2, 4});
  CHECK(permute(EQ(3), {2, 0, 1}) == EQ(3));
  CHECK(contract(EQ(2), 1, 2)[0] == Scalar(2));
  CHECK(contract(EQ(3), 2, 3) == EQ(1));
  CHECK(contract(NEQ(), 1, 2)[0] == Scalar(0));
  CHECK_THROWS_AS(permute(t, {0, 0}), InvalidPermutation);
  CHECK_THROWS_AS(contract(t, 1, 3), IndexOutOfRange);

  Rng rng(2);
  for (int n = 0; n < 50; ++n) {
    int k = 2 + n % 4;
    Signature f = random_signature(rng, k, true);
    std::vector<int> pi(k);
    std::iota(pi.begin(), pi.end(), 0);
    std::shuffle(pi.begin(), pi.end(), rng);
    std::vector<int> inv(k);
    for (int j = 0; j < k; ++j) inv[pi[j]] = j;
    CHECK(permute(permute(f, pi), inv) == f);
    int i = 1 + n % (k - 1);
    CHECK(contract(f, i, k) == contract_direct(f, i, k));
  }
}

TEST_CASE("holographic transformation") {
  Mat2 m{1, Scalar(CycScalar::imag()), 1, -Scalar(CycScalar::imag())};
  CHECK(holo(m, EQ(2)) == NEQ().scaled(2));
  CHECK(holo(Mat2::X(), EQ(3)) == EQ(3));
  Rng rng(4);
  for (int n = 0; n < 40; ++n) {
    Signature f = random_signature(rng, n % 5, true);
    Mat2 a = random_invertible(rng);
    CHECK(holo(Mat2::identity(), f) == f);
    CHECK(holo(a, f) == holo_direct(a, f));
    CHECK(holo(Mat2::K1(), f) == holo_direct(Mat2::K1(), f));
  }
  // float path against the exact result
  Signature f = random_signature(rng, 6, true);
  Mat2 a = random_invertible(rng);
  CHECK(residual(holo(a.to_approx(), f.to_approx()), holo(a, f)) < 1e-9);
}

TEST_CASE("atom decomposition") {
  Signature d0 = make_named("DELTA0", 1), d1 = make_named("DELTA1", 1);
  auto d = decompose_atoms(tensor(d0, d1));
  CHECK(d.atoms.size() == 2);
  CHECK(reassemble(d, 2) == tensor(d0, d1));
  auto e = decompose_atoms(EQ(3));
  CHECK(e.atoms.size() == 1);

  Signature g = tensor(EQ(2).scaled(2), ONE(3));
  std::vector<int> pi{3, 0, 4, 1, 2};
  Signature h = permute(g, pi);
  auto dh = decompose_atoms(h);
  CHECK(dh.atoms.size() == 2);
  CHECK(reassemble(dh, 5) == h);
  Rng rng(8);
  for (int n = 0; n < 30; ++n) {
    Signature t = random_T_member(rng, 1 + n % 5);
    CHECK(reassemble(decompose_atoms(t), t.arity()) == t);
  }
}

TEST_CASE("family membership") {
  CHECK(family_test(EQ(3), Family::E));
  CHECK(family_test(ONE(3), Family::M));
  CHECK_FALSE(family_test(ONE(3), Family::E));
  CHECK(family_test(holo(Mat2::K1(), ONE(3)), Family::M, Mat2::K1()));
  CHECK(family_test(tensor(Signature::unary(1, 2), NEQ()), Family::T_atoms));
  CHECK_FALSE(family_test(EQ(3), Family::T_atoms));
}

TEST_CASE("E and M closure under contraction") {
  Rng rng(9);
  for (int n = 0; n < 100; ++n) {
    Signature f = random_E_member(rng, 1 + n % 4), g = random_E_member(rng, 1 + (n / 4) % 4);
    Signature h = contract_pair(f, f.arity(), g, 1);
    CHECK((h.arity() == 0 || family_test(h, Family::E)));
    Signature p = random_M_member(rng, 1 + n % 4), q = random_M_member(rng, 1 + (n / 4) % 4);
    Signature pn = contract_pair(p, 1, NEQ(), 1);
    Signature r = contract_pair(pn, pn.arity(), q, q.arity());
    CHECK((r.arity() == 0 || family_test(r, Family::M)));
  }
}

TEST_CASE("triangular transforms preserve M") {
  Rng rng(10);
  for (int n = 0; n < 50; ++n) {
    Scalar a = random_gaussian(rng), b = random_gaussian(rng), c = random_gaussian(rng);
    Signature f = Signature::symmetric({random_gaussian(rng), random_gaussian(rng), 0, 0});
    CHECK(family_test(holo({a, b, 0, c}, f), Family::M));
    Mat2 m = random_invertible(rng);
    if (!m.c.is_exact_zero() && !f[1].is_exact_zero()) CHECK_FALSE(family_test(holo(m, f), Family::M));
  }
}

TEST_CASE("unitarity") {
  std::vector<Scalar> cnot(16, 0);
  for (int x : {0b0000, 0b0101, 0b1011, 0b1110}) cnot[x] = 1;
  CHECK(is_unitary(Signature(4, cnot)));
  CHECK(is_unitary(EQ(2)));
  CHECK_FALSE(is_unitary(EQ(3)));
  CHECK_FALSE(is_unitary(Signature(2, {1, 1, 1, 1})));
}

TEST_CASE("orthogonal transforms fix EQ2") {
  Rng rng(12);
  std::uniform_int_distribution<int> d(1, 9);
  for (int n = 0; n < 30; ++n) {
    // Pythagorean rotation and reflection
    long p = d(rng), q = d(rng) + 10;
    Scalar c = Scalar::rational(q * q - p * p, q * q + p * p), s = Scalar::rational(2 * p * q, q * q + p * p);
    CHECK(holo({c, -s, s, c}, EQ(2)) == EQ(2));
    CHECK(holo({c, s, s, -c}, EQ(2)) == EQ(2));
  }
}

TEST_CASE("arity cap") {
  CHECK_THROWS_AS(EQ(arity_cap() + 1), ArityTooLarge);
}
