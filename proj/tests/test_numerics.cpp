#include <doctest.h>

#include <cmath>
#include <random>

#include "holant/numerics.hpp"

using namespace holant;

namespace {

Scalar z8() { return Scalar(CycScalar::zeta()); }
Scalar i_() { return Scalar(CycScalar::imag()); }

CycScalar random_cyc(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-6, 6), den(1, 4);
  CycScalar c;
  for (auto& x : c.c) {
    x = Rational(num(rng), den(rng));
    x.canonicalize();
  }
  return c;
}

}  // namespace

TEST_CASE("cyclotomic unit arithmetic") {
  CHECK(z8() * z8() * z8() * z8() == Scalar(-1));
  Scalar r = Scalar(CycScalar::inv_sqrt2());
  CHECK(r * r == Scalar::rational(1, 2));
  CHECK(i_() * i_() == Scalar(-1));
  CHECK(Scalar(CycScalar::sqrt2()) * Scalar(CycScalar::inv_sqrt2()) == Scalar(1));
}

TEST_CASE("conjugation") {
  CHECK(conjugate(i_()) == -i_());
  CHECK(conjugate(Scalar::rational(3, 2)) == Scalar::rational(3, 2));
  Scalar s2inv = Scalar(CycScalar::inv_sqrt2());
  CHECK(conjugate((Scalar(1) + i_()) * s2inv) == (Scalar(1) - i_()) * s2inv);
}

TEST_CASE("parse_scalar") {
  CHECK(parse_scalar("-3/2").exact() == CycScalar(Rational(-3, 2), 0, 0, 0));
  Scalar s = parse_scalar("1/sqrt2");
  CHECK(s.exact().c[1] == Rational(1, 2));
  CHECK(s.exact().c[3] == Rational(-1, 2));
  CHECK(std::abs(s.to_complex() - std::complex<double>(M_SQRT1_2, 0)) < 1e-12);
  CHECK(parse_scalar("i").exact() == CycScalar(0, 0, 1, 0));
  CHECK_THROWS_AS(parse_scalar("1/"), ParseError);
}

TEST_CASE("approx_eq") {
  CHECK(approx_eq(Scalar::approx(1e-12, 0), Scalar(0), 1e-9));
  CHECK(approx_eq(Scalar::rational(1, 2), Scalar::rational(1, 2), 1e-9));
  CHECK_FALSE(approx_eq(i_(), Scalar::approx(0, 1 + 1e-6), 1e-9));
}

TEST_CASE("exact field operations agree with complex doubles") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 300; ++k) {
    CycScalar a = random_cyc(rng), b = random_cyc(rng);
    auto za = a.to_complex(), zb = b.to_complex();
    CHECK(std::abs((a + b).to_complex() - (za + zb)) < 1e-9);
    CHECK(std::abs((a * b).to_complex() - (za * zb)) < 1e-9);
    CHECK(std::abs(a.conj().to_complex() - std::conj(za)) < 1e-9);
    if (!b.is_zero()) {
      CHECK(a * b * b.inverse() == a);
      CHECK(std::abs((Scalar(a) / Scalar(b)).to_complex() - za / zb) < 1e-9 * (1 + std::abs(za / zb)));
    }
  }
}

TEST_CASE("square roots") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 100; ++k) {
    CycScalar a = random_cyc(rng);
    auto r = exact_sqrt(a * a);
    REQUIRE(r.has_value());
    CHECK(*r * *r == a * a);
  }
  CHECK(sqrt_scalar(Scalar(2)) == Scalar(CycScalar::sqrt2()));
  CHECK(sqrt_scalar(Scalar(-1)) == i_());
  // 3 has no root in Q(zeta8): falls back to the principal float root
  Scalar s3 = sqrt_scalar(Scalar(3));
  CHECK_FALSE(s3.is_exact());
  CHECK(std::abs(s3.to_complex() - std::sqrt(3.0)) < 1e-12);
}

TEST_CASE("division by zero") {
  CHECK_THROWS_AS(Scalar(1) / Scalar(0), DivisionByZero);
  CHECK_THROWS_AS(Scalar::approx(1) / Scalar::approx(1e-12), DivisionByZero);
}

TEST_CASE("matrices") {
  Mat2 k1 = Mat2::K1();
  CHECK(k1.transpose() * k1 == Mat2::X());
  CHECK(Mat2::K2().transpose() * Mat2::K2() == Mat2::X());
  Mat2 m{1, 2, 3, 4};
  CHECK(m * m.inverse() == Mat2::identity());
  CHECK_THROWS_AS(Mat2({1, 2, 2, 4}).inverse(), SingularMatrix);
}
