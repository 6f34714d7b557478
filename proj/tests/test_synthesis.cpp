#include <doctest.h>

#include <cmath>

#include "holant/classify.hpp"
#include "holant/random_instances.hpp"
#include "holant/synthesis.hpp"

using namespace holant;

namespace {

Scalar I_() { return Scalar(CycScalar::imag()); }
Scalar inv_sqrt2() { return Scalar(CycScalar::inv_sqrt2()); }

bool upper(const Mat2& m) { return m.c.is_zero(1e-12); }
bool lower(const Mat2& m) { return m.b.is_zero(1e-12); }

double mat_residual(const Mat2& x, const Mat2& y) {
  return std::max({(x.a - y.a).abs(), (x.b - y.b).abs(), (x.c - y.c).abs(), (x.d - y.d).abs()});
}

Signature random_binary_target(Rng& rng) {
  for (;;) {
    Mat2 m = random_invertible(rng);
    if (!m.det().is_zero()) return Signature::binary(m);
  }
}

}  // namespace

TEST_CASE("pldu") {
  auto f = pldu(Mat2::identity());
  CHECK(f.P == Mat2::identity());
  CHECK(f.L == Mat2::identity());
  CHECK(f.D == Mat2::identity());
  CHECK(f.U == Mat2::identity());
  auto x = pldu(Mat2::X());
  CHECK(x.P == Mat2::X());
  CHECK(x.P * x.L * x.D * x.U == Mat2::X());
  Rng rng(1);
  for (int k = 0; k < 50; ++k) {
    Mat2 m = random_invertible(rng);
    if (k % 5 == 0) m.a = 0;
    if (m.det().is_exact_zero()) continue;
    auto d = pldu(m);
    CHECK(d.P * d.L * d.D * d.U == m);
    CHECK(d.L.b.is_exact_zero());
    CHECK(d.U.c.is_exact_zero());
    CHECK((d.D.b.is_exact_zero() && d.D.c.is_exact_zero()));
  }
  CHECK_THROWS_AS(pldu({1, 2, 2, 4}), SingularMatrix);
}

TEST_CASE("triangularize") {
  Mat2 u{2, 3, 0, 5};
  auto t = triangularize(u, TriSide::Upper);
  CHECK(t.Q == Mat2::identity());
  auto k = triangularize(Mat2::K1() * Mat2{2, 0, 0, 3}, TriSide::Upper);
  CHECK(k.kind == "K1");
  CHECK(mat_residual(k.Q * k.R, Mat2::K1() * Mat2{2, 0, 0, 3}) < 1e-12);
  CHECK(upper(k.R));
  CHECK(lower(k.R));
  Rng rng(2);
  for (int n = 0; n < 50; ++n) {
    Mat2 m = random_invertible(rng);
    for (TriSide side : {TriSide::Upper, TriSide::Lower}) {
      auto r = triangularize(m, side);
      CHECK(mat_residual(r.Q * r.R, m) < 1e-9);
      CHECK((side == TriSide::Upper ? upper(r.R) : lower(r.R)));
      Mat2 g = r.Q.transpose() * r.Q;
      if (r.kind == "orthogonal")
        CHECK(mat_residual(g, Mat2::identity()) < 1e-9);
      else
        CHECK(mat_residual(g, Mat2::X()) < 1e-9);
    }
  }
  // exactly Pythagorean first column stays exact
  auto p = triangularize({3, 1, 4, 2}, TriSide::Upper);
  CHECK(p.R.c.is_exact_zero());
}

TEST_CASE("unitary completion") {
  CHECK(residual(unitary_completion({1, 0}), EQ(2)) < 1e-12);
  Signature h = unitary_completion({1, 1});
  CHECK(is_unitary(h));
  CHECK(std::abs(h[0].to_complex() - M_SQRT1_2) < 1e-12);
  CHECK(std::abs(h[1].to_complex() - M_SQRT1_2) < 1e-12);
  Signature u = unitary_completion(EQ(2).values());
  CHECK(u.arity() == 4);
  CHECK(is_unitary(u));
  // pin the column arguments to 0 and rescale by |a|
  for (std::size_t r = 0; r < 4; ++r) CHECK(std::abs(u[r].to_complex() * std::sqrt(2.0) - EQ(2)[r].to_complex()) < 1e-12);
  Rng rng(3);
  for (int k = 0; k < 20; ++k) CHECK(is_unitary(unitary_completion(random_signature(rng, 1 + k % 3, true).values())));
  CHECK_THROWS_AS(unitary_completion({0, 0}), ZeroVector);
}

TEST_CASE("binaries from a GHZ generator") {
  auto c1 = binary_from_ghz(1, 1, NEQ());
  CHECK(c1.lemma.find("case 1") != std::string::npos);
  CHECK(recipe_residual(c1) < 1e-6);
  auto c2 = binary_from_ghz(1, I_(), Signature(2, {1, 0, 0, 5}));
  CHECK(c2.lemma.find("case 2") != std::string::npos);
  CHECK(recipe_residual(c2) < 1e-6);
  auto c3 = binary_from_ghz(1, I_() * inv_sqrt2(), NEQ());
  CHECK(c3.lemma.find("case 3") != std::string::npos);
  CHECK(recipe_residual(c3) < 1e-6);
  Rng rng(4);
  for (int k = 0; k < 10; ++k) {
    Scalar a = random_gaussian(rng), b = random_gaussian(rng);
    Signature target = random_binary_target(rng);
    auto r = binary_from_ghz(ghz_generator(a, b), target);
    CHECK(recipe_residual(r) < 1e-6);
    CHECK(residual(evaluate_recipe(r), target) < 1e-6 * std::max(1.0, target[0].abs() + target[3].abs()));
  }
}

TEST_CASE("binaries from a tractable pair") {
  Signature f(3, {1, 0, 0, 0, 0, 0, 0, 2});
  for (auto [b, c] : {std::pair<int, int>{0, 1}, {1, 0}, {2, 2}}) {
    Signature g = Signature::symmetric({b, 1, c});
    auto r = binary_from_tractable_pair(f, g, NEQ());
    CHECK(recipe_residual(r) < 1e-6);
  }
  CHECK_THROWS(binary_from_tractable_pair(f, Signature::symmetric({1, 1, 1}), NEQ()));
}

TEST_CASE("GHZ from W") {
  auto r = ghz_from_w(ONE(3), EQ(2), EQ(2));
  CHECK(recipe_residual(r) < 1e-9);
  Signature g = evaluate_recipe(r);
  CHECK_FALSE(hyperdeterminant(g).is_zero());
  CHECK(classify_ternary(g).tag == TernaryTag::GHZ);
  CHECK_THROWS_AS(ghz_from_w(tensor(EQ(1), EQ(2)), EQ(2), EQ(2)), PreconditionViolated);
  Rng rng(5);
  for (int k = 0; k < 10; ++k) {
    Signature w = holo(random_invertible(rng), ONE(3));
    auto rr = ghz_from_w(w, EQ(2), EQ(2));
    CHECK(recipe_residual(rr) < 1e-6);
    CHECK(classify_ternary(evaluate_recipe(rr)).tag == TernaryTag::GHZ);
  }
}

TEST_CASE("express E") {
  auto base = express_E(EQ(2), Mat2::identity());
  CHECK(evaluate_recipe(base) == EQ(2));
  std::vector<Scalar> v(8, 0);
  v[0b010] = 2;
  v[0b101] = 3;
  Signature f(3, v);
  auto r = express_E(f, Mat2::identity());
  CHECK(evaluate_recipe(r) == f);
  Signature wneq = holo(Mat2::K1(), Signature(2, {0, 2, 5, 0}));
  CHECK(evaluate_recipe(express_E(wneq, Mat2::K1())) == wneq);
  CHECK_THROWS_AS(express_E(ONE(3), Mat2::identity()), FamilyViolation);
  Rng rng(6);
  for (int k = 0; k < 30; ++k) {
    int n = 1 + k % 6;
    Mat2 m = k % 3 == 0 ? Mat2::identity() : k % 3 == 1 ? Mat2::K1() : family_orthogonal();
    Signature h = holo(m, random_E_member(rng, n));
    CHECK(evaluate_recipe(express_E(h, m)) == h);
  }
}

TEST_CASE("express M") {
  auto one4 = express_M(ONE(4));
  CHECK(one4.formula.labelled);
  CHECK(evaluate_recipe(one4) == ONE(4));
  auto un = express_M(Signature::unary(2, 7));
  CHECK(un.formula.atoms.size() == 3);
  CHECK(evaluate_recipe(un) == Signature::unary(2, 7));
  Rng rng(7);
  for (int k = 0; k < 30; ++k) {
    Signature f = random_M_member(rng, 1 + k % 6);
    auto r = express_M(f);
    CHECK(evaluate_recipe(r) == f);
    for (auto& at : r.formula.atoms) CHECK(at.labels.size() == static_cast<std::size_t>(at.fn.arity()));
  }
  CHECK_THROWS_AS(express_M(EQ(3)), FamilyViolation);
}

TEST_CASE("identity suite") {
  auto res = verify_appendix(20, 1);
  CHECK(res.size() >= 20);
  for (auto& r : res) CHECK_MESSAGE(r.passed, r.name);
}
