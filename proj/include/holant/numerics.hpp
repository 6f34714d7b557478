#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <variant>

#include <gmpxx.h>

#include "holant/errors.hpp"

namespace holant {

using Rational = mpq_class;
using Complex = std::complex<double>;

// Element of Q(zeta8): c0 + c1 z + c2 z^2 + c3 z^3 with z^4 = -1.
class CycScalar {
 public:
  std::array<Rational, 4> c;

  CycScalar() : c{0, 0, 0, 0} {}
  CycScalar(long v) : c{Rational(v), 0, 0, 0} {}  // NOLINT
  CycScalar(const Rational& r) : c{r, 0, 0, 0} {}  // NOLINT
  CycScalar(Rational c0, Rational c1, Rational c2, Rational c3)
      : c{std::move(c0), std::move(c1), std::move(c2), std::move(c3)} {}

  static CycScalar zeta() { return {0, 1, 0, 0}; }
  static CycScalar imag() { return {0, 0, 1, 0}; }
  static CycScalar sqrt2() { return {0, 1, 0, -1}; }
  static CycScalar inv_sqrt2() { return {0, Rational(1, 2), 0, Rational(-1, 2)}; }
  // a + b i
  static CycScalar gaussian(const Rational& a, const Rational& b) { return {a, 0, b, 0}; }

  bool is_zero() const { return c[0] == 0 && c[1] == 0 && c[2] == 0 && c[3] == 0; }
  bool is_rational() const { return c[1] == 0 && c[2] == 0 && c[3] == 0; }

  CycScalar operator-() const { return {-c[0], -c[1], -c[2], -c[3]}; }
  CycScalar& operator+=(const CycScalar& o);
  CycScalar& operator-=(const CycScalar& o);
  friend CycScalar operator+(CycScalar a, const CycScalar& b) { return a += b; }
  friend CycScalar operator-(CycScalar a, const CycScalar& b) { return a -= b; }
  friend CycScalar operator*(const CycScalar& a, const CycScalar& b);
  friend bool operator==(const CycScalar& a, const CycScalar& b) { return a.c == b.c; }

  CycScalar inverse() const;
  CycScalar conj() const { return {c[0], -c[3], -c[2], -c[1]}; }
  // zeta -> zeta^5
  CycScalar sigma5() const { return {c[0], -c[1], c[2], -c[3]}; }
  // zeta -> zeta^3
  CycScalar sigma3() const { return {c[0], c[3], -c[2], c[1]}; }
  Complex to_complex() const;
  std::string to_string() const;
};

std::optional<CycScalar> exact_sqrt(const CycScalar& a);

class Scalar {
 public:
  Scalar() : v_(CycScalar()) {}
  Scalar(long v) : v_(CycScalar(v)) {}  // NOLINT
  Scalar(int v) : v_(CycScalar(static_cast<long>(v))) {}  // NOLINT
  Scalar(const Rational& r) : v_(CycScalar(r)) {}  // NOLINT
  Scalar(const CycScalar& c) : v_(c) {}  // NOLINT
  Scalar(const Complex& z) : v_(z) {}  // NOLINT
  static Scalar approx(double re, double im = 0) { return Scalar(Complex(re, im)); }
  static Scalar rational(long num, long den) {
    Rational r(num, den);
    r.canonicalize();
    return Scalar(r);
  }

  bool is_exact() const { return std::holds_alternative<CycScalar>(v_); }
  const CycScalar& exact() const { return std::get<CycScalar>(v_); }
  Complex to_complex() const;
  Scalar to_approx() const { return Scalar(to_complex()); }
  // Exactly zero (exact backend) or within tol of zero.
  bool is_zero(double tol = -1) const;
  bool is_exact_zero() const { return is_exact() && exact().is_zero(); }

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
  Scalar& operator/=(const Scalar& o) { return *this = *this / o; }
  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a, const Scalar& b);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  friend Scalar operator/(const Scalar& a, const Scalar& b);
  // Same backend and identical value.
  friend bool operator==(const Scalar& a, const Scalar& b);
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  Scalar conj() const;
  Scalar inverse() const { return Scalar(1) / *this; }
  double abs() const { return std::abs(to_complex()); }
  std::string to_string() const;

 private:
  std::variant<CycScalar, Complex> v_;
};

double& default_tolerance();

bool approx_eq(const Scalar& a, const Scalar& b, double tol = -1);
Scalar conjugate(const Scalar& a);
Scalar parse_scalar(const std::string& text);
// Principal square root; exact when the root lies in Q(zeta8).
Scalar sqrt_scalar(const Scalar& a);
Scalar pow_int(Scalar a, int e);

struct Mat2 {
  Scalar a, b, c, d;  // (a b; c d)

  Scalar det() const { return a * d - b * c; }
  Mat2 transpose() const { return {a, c, b, d}; }
  Mat2 inverse() const;
  Mat2 scaled(const Scalar& s) const { return {a * s, b * s, c * s, d * s}; }
  bool is_exact() const { return a.is_exact() && b.is_exact() && c.is_exact() && d.is_exact(); }
  Mat2 to_approx() const { return {a.to_approx(), b.to_approx(), c.to_approx(), d.to_approx()}; }
  const Scalar& at(int r, int col) const { return r == 0 ? (col == 0 ? a : b) : (col == 0 ? c : d); }
  friend Mat2 operator*(const Mat2& x, const Mat2& y);
  friend bool operator==(const Mat2& x, const Mat2& y) {
    return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d;
  }

  static Mat2 identity() { return {1, 0, 0, 1}; }
  static Mat2 X() { return {0, 1, 1, 0}; }
  static Mat2 K1();
  static Mat2 K2();
};

bool approx_eq(const Mat2& x, const Mat2& y, double tol = -1);

}  // namespace holant
