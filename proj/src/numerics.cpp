#include "holant/numerics.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace holant {

namespace {

// Gaussian rationals, used for the Q(i)(sqrt2) view of Q(zeta8).
struct Gauss {
  Rational re, im;
};

Gauss operator+(const Gauss& a, const Gauss& b) { return {a.re + b.re, a.im + b.im}; }
Gauss operator-(const Gauss& a, const Gauss& b) { return {a.re - b.re, a.im - b.im}; }
Gauss operator*(const Gauss& a, const Gauss& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
Gauss scale(const Gauss& a, const Rational& r) { return {a.re * r, a.im * r}; }
bool gzero(const Gauss& a) { return a.re == 0 && a.im == 0; }

Gauss ginverse(const Gauss& a) {
  Rational n = a.re * a.re + a.im * a.im;
  return {a.re / n, -a.im / n};
}

// a = p + q sqrt2
void split(const CycScalar& a, Gauss& p, Gauss& q) {
  p = {a.c[0], a.c[2]};
  q = {(a.c[1] - a.c[3]) / 2, (a.c[1] + a.c[3]) / 2};
}

CycScalar join(const Gauss& p, const Gauss& q) {
  return {p.re, q.re + q.im, p.im, q.im - q.re};
}

std::optional<Rational> rational_sqrt(const Rational& r) {
  if (r < 0) return std::nullopt;
  mpz_class n = r.get_num(), d = r.get_den();
  if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return std::nullopt;
  mpz_class sn, sd;
  mpz_sqrt(sn.get_mpz_t(), n.get_mpz_t());
  mpz_sqrt(sd.get_mpz_t(), d.get_mpz_t());
  Rational out(sn, sd);
  out.canonicalize();
  return out;
}

std::optional<Gauss> gauss_sqrt(const Gauss& a) {
  if (a.im == 0) {
    if (a.re >= 0) {
      auto s = rational_sqrt(a.re);
      if (s) return Gauss{*s, 0};
      return std::nullopt;
    }
    auto s = rational_sqrt(-a.re);
    if (s) return Gauss{0, *s};
    return std::nullopt;
  }
  auto m = rational_sqrt(a.re * a.re + a.im * a.im);
  if (!m) return std::nullopt;
  for (int sgn : {1, -1}) {
    Rational x2 = (a.re + sgn * *m) / 2;
    auto x = rational_sqrt(x2);
    if (x && *x != 0) return Gauss{*x, a.im / (2 * *x)};
  }
  return std::nullopt;
}

}  // namespace

CycScalar& CycScalar::operator+=(const CycScalar& o) {
  for (int k = 0; k < 4; ++k) c[k] += o.c[k];
  return *this;
}

CycScalar& CycScalar::operator-=(const CycScalar& o) {
  for (int k = 0; k < 4; ++k) c[k] -= o.c[k];
  return *this;
}

CycScalar operator*(const CycScalar& a, const CycScalar& b) {
  if (a.is_rational() && b.is_rational()) return CycScalar(Rational(a.c[0] * b.c[0]));
  CycScalar r;
  for (int i = 0; i < 4; ++i) {
    if (a.c[i] == 0) continue;
    for (int j = 0; j < 4; ++j) {
      if (b.c[j] == 0) continue;
      int k = i + j;
      if (k < 4)
        r.c[k] += a.c[i] * b.c[j];
      else
        r.c[k - 4] -= a.c[i] * b.c[j];
    }
  }
  return r;
}

CycScalar CycScalar::inverse() const {
  if (is_zero()) throw DivisionByZero("inverse of exact zero");
  if (is_rational()) return CycScalar(Rational(1 / c[0]));
  CycScalar s = sigma5();
  CycScalar b = *this * s;  // lies in Q(i)
  Gauss g{b.c[0], b.c[2]};
  Gauss gi = ginverse(g);
  return s * CycScalar::gaussian(gi.re, gi.im);
}

Complex CycScalar::to_complex() const {
  const double h = std::sqrt(2.0) / 2;
  double c0 = c[0].get_d(), c1 = c[1].get_d(), c2 = c[2].get_d(), c3 = c[3].get_d();
  return {c0 + (c1 - c3) * h, c2 + (c1 + c3) * h};
}

static std::string gauss_string(const Gauss& g) {
  if (g.im == 0) return g.re.get_str();
  std::string im = (g.im == 1) ? "" : (g.im == -1 ? "-" : g.im.get_str());
  if (g.re == 0) return im + "i";
  std::string s = g.re.get_str();
  if (g.im > 0) s += "+";
  if (g.im == -1) return s + "-i";
  return s + im + "i";
}

std::string CycScalar::to_string() const {
  Gauss p, q;
  split(*this, p, q);
  if (gzero(q)) return gauss_string(p);
  std::string qs = "(" + gauss_string(q) + ")*sqrt2";
  if (gzero(p)) return qs;
  return gauss_string(p) + "+" + qs;
}

std::optional<CycScalar> exact_sqrt(const CycScalar& a) {
  if (a.is_zero()) return CycScalar();
  Gauss p, q;
  split(a, p, q);
  if (gzero(q)) {
    if (auto x = gauss_sqrt(p)) return join(*x, {0, 0});
    if (auto y = gauss_sqrt(scale(p, Rational(1, 2)))) return join({0, 0}, *y);
    return std::nullopt;
  }
  auto disc = gauss_sqrt(p * p - scale(q * q, 2));
  if (!disc) return std::nullopt;
  for (int sgn : {1, -1}) {
    Gauss x2 = scale(p + scale(*disc, sgn), Rational(1, 2));
    if (gzero(x2)) continue;
    auto x = gauss_sqrt(x2);
    if (!x) continue;
    Gauss y = q * ginverse(scale(*x, 2));
    CycScalar r = join(*x, y);
    if (r * r == a) return r;
  }
  return std::nullopt;
}

double& default_tolerance() {
  static double tol = 1e-9;
  return tol;
}

Complex Scalar::to_complex() const {
  if (is_exact()) return exact().to_complex();
  return std::get<Complex>(v_);
}

bool Scalar::is_zero(double tol) const {
  if (is_exact()) return exact().is_zero();
  if (tol < 0) tol = default_tolerance();
  Complex z = std::get<Complex>(v_);
  return std::abs(z.real()) <= tol && std::abs(z.imag()) <= tol;
}

static Scalar checked(Complex z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw NumericOverflow("non-finite result");
  return Scalar(z);
}

Scalar Scalar::operator-() const {
  if (is_exact()) return Scalar(-exact());
  return Scalar(-std::get<Complex>(v_));
}

Scalar operator+(const Scalar& a, const Scalar& b) {
  if (a.is_exact() && b.is_exact()) return Scalar(a.exact() + b.exact());
  return checked(a.to_complex() + b.to_complex());
}

Scalar operator-(const Scalar& a, const Scalar& b) {
  if (a.is_exact() && b.is_exact()) return Scalar(a.exact() - b.exact());
  return checked(a.to_complex() - b.to_complex());
}

Scalar operator*(const Scalar& a, const Scalar& b) {
  if (a.is_exact() && b.is_exact()) return Scalar(a.exact() * b.exact());
  return checked(a.to_complex() * b.to_complex());
}

Scalar operator/(const Scalar& a, const Scalar& b) {
  if (a.is_exact() && b.is_exact()) {
    if (b.exact().is_zero()) throw DivisionByZero("exact division by zero");
    return Scalar(a.exact() * b.exact().inverse());
  }
  Complex bz = b.to_complex();
  if (std::abs(bz) <= default_tolerance()) throw DivisionByZero("divisor below tolerance");
  return checked(a.to_complex() / bz);
}

bool operator==(const Scalar& a, const Scalar& b) {
  if (a.is_exact() != b.is_exact()) return false;
  if (a.is_exact()) return a.exact() == b.exact();
  return std::get<Complex>(a.v_) == std::get<Complex>(b.v_);
}

Scalar Scalar::conj() const {
  if (is_exact()) return Scalar(exact().conj());
  return Scalar(std::conj(std::get<Complex>(v_)));
}

std::string Scalar::to_string() const {
  if (is_exact()) return exact().to_string();
  std::ostringstream os;
  os.precision(17);
  Complex z = std::get<Complex>(v_);
  os << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return os.str();
}

bool approx_eq(const Scalar& a, const Scalar& b, double tol) {
  if (a.is_exact() && b.is_exact()) return a.exact() == b.exact();
  if (tol < 0) tol = default_tolerance();
  Complex d = a.to_complex() - b.to_complex();
  return std::abs(d.real()) <= tol && std::abs(d.imag()) <= tol;
}

Scalar conjugate(const Scalar& a) { return a.conj(); }

Scalar sqrt_scalar(const Scalar& a) {
  if (a.is_exact()) {
    if (auto r = exact_sqrt(a.exact())) {
      Complex z = r->to_complex();
      if (z.real() < 0 || (z.real() == 0 && z.imag() < 0)) return Scalar(-*r);
      return Scalar(*r);
    }
  }
  return checked(std::sqrt(a.to_complex()));
}

Scalar pow_int(Scalar a, int e) {
  if (e < 0) return pow_int(a.inverse(), -e);
  Scalar r(1);
  while (e > 0) {
    if (e & 1) r *= a;
    a *= a;
    e >>= 1;
  }
  return r;
}

// Recursive-descent parser for scalar literals. Accepts sums of products of
// rationals, decimals, i, sqrt2 and parenthesised groups.
namespace {

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  Scalar run() {
    skip();
    if (pos_ >= s_.size()) throw ParseError("empty scalar literal", pos_);
    Scalar v = expr();
    skip();
    if (pos_ != s_.size()) throw ParseError("unexpected character", pos_);
    return v;
  }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  char peek() {
    skip();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  bool starts_primary() {
    char ch = peek();
    return std::isdigit(static_cast<unsigned char>(ch)) || ch == 'i' || ch == 's' || ch == '(' || ch == '.';
  }

  Scalar expr() {
    Scalar v = term();
    for (;;) {
      char ch = peek();
      if (ch == '+') {
        ++pos_;
        v = v + term();
      } else if (ch == '-') {
        ++pos_;
        v = v - term();
      } else {
        return v;
      }
    }
  }

  Scalar term() {
    Scalar v = unary();
    for (;;) {
      char ch = peek();
      if (ch == '*') {
        ++pos_;
        v = v * unary();
      } else if (ch == '/') {
        std::size_t at = pos_;
        ++pos_;
        Scalar d = unary();
        if (d.is_exact_zero()) throw ParseError("division by zero", at);
        v = v / d;
      } else if (starts_primary()) {
        v = v * primary();
      } else {
        return v;
      }
    }
  }

  Scalar unary() {
    char ch = peek();
    if (ch == '-') {
      ++pos_;
      return -unary();
    }
    if (ch == '+') {
      ++pos_;
      return unary();
    }
    return primary();
  }

  Scalar primary() {
    char ch = peek();
    if (ch == '(') {
      ++pos_;
      Scalar v = expr();
      if (peek() != ')') throw ParseError("expected ')'", pos_);
      ++pos_;
      return v;
    }
    if (ch == 'i') {
      ++pos_;
      return Scalar(CycScalar::imag());
    }
    if (s_.compare(pos_, 7, "sqrt(2)") == 0) {
      pos_ += 7;
      return Scalar(CycScalar::sqrt2());
    }
    if (s_.compare(pos_, 5, "sqrt2") == 0) {
      pos_ += 5;
      return Scalar(CycScalar::sqrt2());
    }
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') return number();
    throw ParseError("unexpected character", pos_);
  }

  Scalar number() {
    std::size_t start = pos_;
    bool decimal = false;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ < s_.size() && s_[pos_] == '.') {
      decimal = true;
      ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        decimal = true;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      } else {
        pos_ = save;
      }
    }
    std::string tok = s_.substr(start, pos_ - start);
    if (tok == "." || tok.empty()) throw ParseError("malformed number", start);
    if (decimal) return Scalar::approx(std::stod(tok));
    return Scalar(Rational(mpz_class(tok)));
  }
};

}  // namespace

Scalar parse_scalar(const std::string& text) { return Parser(text).run(); }

Mat2 operator*(const Mat2& x, const Mat2& y) {
  return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

Mat2 Mat2::inverse() const {
  Scalar dt = det();
  if (dt.is_zero()) throw SingularMatrix("matrix is not invertible");
  Scalar inv = dt.inverse();
  return {d * inv, -b * inv, -c * inv, a * inv};
}

Mat2 Mat2::K1() {
  Scalar h(CycScalar::inv_sqrt2());
  Scalar i(CycScalar::imag());
  return {h, h, i * h, -(i * h)};
}

Mat2 Mat2::K2() { return K1() * X(); }

bool approx_eq(const Mat2& x, const Mat2& y, double tol) {
  return approx_eq(x.a, y.a, tol) && approx_eq(x.b, y.b, tol) && approx_eq(x.c, y.c, tol) &&
         approx_eq(x.d, y.d, tol);
}

}  // namespace holant
