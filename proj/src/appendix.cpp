#include <cmath>
#include <functional>
#include <optional>
#include <random>

#include "holant/synthesis.hpp"

namespace holant {

namespace {

using Rng = std::mt19937_64;

Scalar draw_approx(Rng& rng) {
  std::uniform_real_distribution<double> r(0.5, 2.0), th(0.0, 2 * M_PI);
  return Scalar(std::polar(r(rng), th(rng)));
}

Scalar draw_exact(Rng& rng) {
  std::uniform_int_distribution<long> num(-9, 9), den(1, 5);
  for (;;) {
    Rational re(num(rng), den(rng)), im(num(rng), den(rng));
    re.canonicalize();
    im.canonicalize();
    if (re != 0 || im != 0) return Scalar(CycScalar::gaussian(re, im));
  }
}

Scalar I_() { return Scalar(CycScalar::imag()); }
Scalar S2() { return Scalar(CycScalar::sqrt2()); }

double diff_v(const std::vector<Scalar>& lhs, const std::vector<Scalar>& rhs) {
  double d = 0, scale = 1;
  bool exact = true, equal = true;
  for (std::size_t k = 0; k < lhs.size(); ++k) {
    d = std::max(d, std::abs(lhs[k].to_complex() - rhs[k].to_complex()));
    scale = std::max(scale, rhs[k].abs());
    if (lhs[k].is_exact() && rhs[k].is_exact())
      equal = equal && lhs[k] == rhs[k];
    else
      exact = false;
  }
  if (exact) return equal ? 0.0 : std::max(1.0, d / scale);
  return d / scale;
}

double diff(const Mat2& x, const Mat2& y) { return diff_v({x.a, x.b, x.c, x.d}, {y.a, y.b, y.c, y.d}); }

bool small(const Scalar& s) { return s.abs() < 1e-3; }

Mat2 gmat(const Scalar& a, const Scalar& b, const Scalar& c) {
  Scalar a2 = a * a;
  return Mat2{a2 * (a2 * c * c + b * b), a * b, a * b, 1}.scaled((a2 * c).inverse());
}

Mat2 diag(const Scalar& p, const Scalar& q) { return {p, 0, 0, q}; }

const Mat2 NEQ_M = Mat2::X();

struct Check {
  std::string name;
  bool exact;
  std::function<std::optional<double>(Rng&)> run;
};

std::vector<Check> checks() {
  std::vector<Check> out;

  out.push_back({"A.1 M o [f0,f1,0,0]", true, [](Rng& rng) -> std::optional<double> {
                   Scalar a = draw_exact(rng), b = draw_exact(rng), c = draw_exact(rng), d = draw_exact(rng);
                   Scalar f0 = draw_exact(rng), f1 = draw_exact(rng);
                   Signature m = holo(Mat2{a, b, c, d}, Signature::symmetric({f0, f1, 0, 0}));
                   Scalar t3(3), t2(2);
                   std::vector<Scalar> rhs{(a * f0 + t3 * b * f1) * a * a, (a * c * f0 + t2 * b * c * f1 + a * d * f1) * a,
                                           (a * c * f0 + b * c * f1 + t2 * a * d * f1) * c,
                                           (c * f0 + t3 * d * f1) * c * c};
                   return diff_v({m[0], m[1], m[3], m[7]}, rhs);
                 }});

  out.push_back({"g_c closed form", true, [](Rng& rng) -> std::optional<double> {
                   Scalar a = draw_exact(rng), b = draw_exact(rng), c = draw_exact(rng);
                   Signature f = ghz_generator(a, b);
                   Signature u = Signature::unary(c / a, a / c - b * c);
                   return diff(matrix_view(contract_pair(f, 3, u, 1)), gmat(a, b, c));
                 }});

  out.push_back({"A.2 case 1 NEQ", false, [](Rng& rng) -> std::optional<double> {
                   Scalar a = draw_approx(rng), b = draw_approx(rng);
                   Scalar ab2 = a * a * b * b;
                   if (small(ab2 + Scalar(1)) || small(Scalar(2) * ab2 + Scalar(1))) return std::nullopt;
                   Scalar s = (I_() * b / a) * sqrt_scalar(Scalar(2) * (ab2 + Scalar(1)) / (Scalar(2) * ab2 + Scalar(1)));
                   Scalar t = I_() * (ab2 + Scalar(1)) / (a * a * a * b);
                   Mat2 gs = gmat(a, b, s), gt = gmat(a, b, t);
                   return diff((gs * gt * gs).scaled(-I_()), NEQ_M);
                 }});

  for (int sg : {1, -1}) {
    out.push_back({sg > 0 ? "A.2 h_{p,q+} diagonal" : "A.2 h_{p,q-} diagonal", false,
                   [sg](Rng& rng) -> std::optional<double> {
                     Scalar a = draw_approx(rng), b = draw_approx(rng), p = draw_approx(rng);
                     Scalar a2 = a * a, a4 = a2 * a2, a6 = a4 * a2, ab2 = a2 * b * b;
                     Scalar A = a4 * p * p + ab2 + Scalar(1), B = a2 * p * p + b * b;
                     if (small(ab2 + Scalar(1)) || small(A) || small(B)) return std::nullopt;
                     Scalar S = sqrt_scalar(-A * (ab2 + Scalar(1)) / (B * a6));
                     Scalar q = Scalar(sg) * S;
                     Scalar d1 = Scalar(-sg) * A / (a2 * S);
                     Scalar d2 = Scalar(sg) * (ab2 + Scalar(1)) / (B * a4 * S);
                     Mat2 gp = gmat(a, b, p), gq = gmat(a, b, q);
                     return diff(gp * gq * gp, diag(d1, d2));
                   }});
  }

  for (int sg : {1, -1}) {
    out.push_back({sg > 0 ? "A.2 P_d first root" : "A.2 P_d second root", false,
                   [sg](Rng& rng) -> std::optional<double> {
                     Scalar a = draw_approx(rng), b = draw_approx(rng), d = draw_approx(rng);
                     Scalar a2 = a * a, a4 = a2 * a2, a6 = a4 * a2, ab2 = a2 * b * b;
                     Scalar root = sqrt_scalar(Scalar(-4) * (ab2 + Scalar(1)) * d * d + Scalar(1));
                     Scalar psq = -(Scalar(2) * ab2 + Scalar(1) + Scalar(sg) * root) / (Scalar(2) * a4);
                     Scalar A = a4 * psq + ab2 + Scalar(1), B = a2 * psq + b * b;
                     if (small(A) || small(B) || small(ab2 + Scalar(1))) return std::nullopt;
                     Scalar dsq = A * A / (a4 * (-A * (ab2 + Scalar(1)) / (B * a6)));
                     return diff_v({dsq}, {d * d});
                   }});
  }

  out.push_back({"A.2 i g_{ib/a} = t_{1/(ab)}", true, [](Rng& rng) -> std::optional<double> {
                   Scalar a = draw_exact(rng), b = draw_exact(rng);
                   return diff(gmat(a, b, I_() * b / a).scaled(I_()), Mat2{0, 1, 1, (a * b).inverse()});
                 }});

  for (int sg : {1, -1}) {
    std::string tag = sg > 0 ? "b = i/a" : "b = -i/a";
    out.push_back({"A.3 case 2 k_d, " + tag, true, [sg](Rng& rng) -> std::optional<double> {
                     Scalar a = draw_exact(rng), d = draw_exact(rng);
                     Scalar b = Scalar(sg) * I_() / a;
                     Mat2 ga = gmat(a, b, (a * a).inverse()), gd = gmat(a, b, -(a * a * d).inverse());
                     return diff(ga * gd * ga, diag(d, d.inverse()));
                   }});
    out.push_back({"A.3 h'_{p,q}, " + tag, true, [sg](Rng& rng) -> std::optional<double> {
                     Scalar a = draw_exact(rng), p = draw_exact(rng), q = draw_exact(rng);
                     Scalar b = Scalar(sg) * I_() / a;
                     Mat2 gp = gmat(a, b, p), gq = gmat(a, b, q), ga = gmat(a, b, (a * a).inverse());
                     Scalar off = Scalar(-sg) * I_();
                     Scalar top = Scalar(-2) * a * a * a * a * p * p + p * p / (q * q) + Scalar(2);
                     return diff(gp * gq * ga * gq * gp, Mat2{top, off, off, 0});
                   }});
    out.push_back({"A.3 t gadget, " + tag, true, [sg](Rng& rng) -> std::optional<double> {
                     Scalar a = draw_exact(rng);
                     Scalar b = Scalar(sg) * I_() / a;
                     Scalar s = Scalar(-sg) * I_();
                     return diff(gmat(a, b, (a * a).inverse()).scaled(s), Mat2{0, 1, 1, s});
                   }});
  }

  for (int sb : {1, -1})
    for (int sw : {1, -1}) {
      std::string tag = std::string(sb > 0 ? "b = i/(sqrt2 a)" : "b = -i/(sqrt2 a)") + (sw > 0 ? ", w+" : ", w-");
      out.push_back({"A.4 case 3 k_d, " + tag, false, [sb, sw](Rng& rng) -> std::optional<double> {
                       Scalar a = draw_approx(rng), d = draw_approx(rng);
                       Scalar b = Scalar(sb) * I_() / (S2() * a);
                       Scalar a2 = a * a, a4 = a2 * a2;
                       Scalar w = (Scalar(sw) * sqrt_scalar(Scalar(-2) * d * d + Scalar(1)) - Scalar(1)) / (Scalar(2) * a2 * d);
                       Scalar w2 = Scalar(2) * a4 * w * w;
                       if (small(w) || small(w2 - Scalar(1)) || small(w2 + Scalar(1))) return std::nullopt;
                       Scalar v = sqrt_scalar((w2 - Scalar(1)) / (Scalar(2) * (w2 + Scalar(1)))) / a2;
                       Mat2 gv = gmat(a, b, v), gw = gmat(a, b, w);
                       return diff(gv * gw * gv, diag(d, d.inverse()));
                     }});
    }

  for (int sb : {1, -1}) {
    std::string tag = sb > 0 ? "b = i/(sqrt2 a)" : "b = -i/(sqrt2 a)";
    out.push_back({"A.4 h''_r NEQ, " + tag, false, [sb](Rng& rng) -> std::optional<double> {
                     Scalar a = draw_approx(rng), r = draw_approx(rng);
                     Scalar b = Scalar(sb) * I_() / (S2() * a);
                     Scalar a2 = a * a, a4 = a2 * a2, a8 = a4 * a4;
                     Scalar r2 = Scalar(2) * a4 * r * r;
                     Scalar den = Scalar(4) * a8 * r * r * r * r + Scalar(1);
                     if (small(r2 - Scalar(1)) || small(r2 + Scalar(1)) || small(den)) return std::nullopt;
                     Scalar s = sqrt_scalar((r2 + Scalar(1)) * (r2 - Scalar(1)) / (Scalar(2) * a4 * den));
                     Scalar u = (r2 - Scalar(1)) / (S2() * a2 * (r2 + Scalar(1)));
                     Mat2 gs = gmat(a, b, s), gr = gmat(a, b, r), gu = gmat(a, b, u);
                     return diff((gs * gr * gu * gr * gs).scaled(Scalar(sb) * I_()), NEQ_M);
                   }});
    out.push_back({"A.4 t gadget, " + tag, true, [sb](Rng& rng) -> std::optional<double> {
                     Scalar a = draw_exact(rng);
                     Scalar b = Scalar(sb) * I_() / (S2() * a);
                     Scalar s = Scalar(-sb) * I_();
                     return diff(gmat(a, b, (S2() * a * a).inverse()).scaled(s), Mat2{0, 1, 1, s * S2()});
                   }});
  }

  auto hs = [](const Scalar& b, const Scalar& c, const Scalar& s) {
    Scalar t = -((b * b + s) * (b * b + s)) / ((c * s + b) * (c * s + b));
    Mat2 g{b, 1, 1, c}, fs = diag(1, s), ft = diag(1, t);
    return g * fs * g * ft * g * fs * g;
  };
  out.push_back({"A.5 h_s closed form", true, [hs](Rng& rng) -> std::optional<double> {
                   Scalar b = draw_exact(rng), c = draw_exact(rng), s = draw_exact(rng);
                   if ((c * s + b).is_exact_zero()) return std::nullopt;
                   Scalar bc1 = b * c - Scalar(1);
                   Scalar x = -(b * b + s) * bc1 * bc1 * s / (c * s + b);
                   Scalar y = -(b * b * c * c * s + Scalar(2) * c * c * s * s + Scalar(2) * b * c * s + Scalar(2) * b * b + s) *
                              bc1 * bc1 * s / ((c * s + b) * (c * s + b));
                   return diff(hs(b, c, s), Mat2{0, x, x, y});
                 }});
  out.push_back({"A.5 b = 0", true, [hs](Rng& rng) -> std::optional<double> {
                   Scalar c = draw_exact(rng);
                   return diff(hs(0, c, -(Scalar(2) * c * c).inverse()).scaled(Scalar(2) * c * c * c), NEQ_M);
                 }});
  out.push_back({"A.5 c = 0", true, [hs](Rng& rng) -> std::optional<double> {
                   Scalar b = draw_exact(rng);
                   return diff(hs(b, 0, Scalar(-2) * b * b).scaled((Scalar(-2) * b * b * b).inverse()), NEQ_M);
                 }});
  for (int sg : {1, -1}) {
    out.push_back({sg > 0 ? "A.5 s+" : "A.5 s-", false, [hs, sg](Rng& rng) -> std::optional<double> {
                     Scalar b = draw_approx(rng), c = draw_approx(rng);
                     Scalar bc = b * c;
                     if (small(bc - Scalar(1))) return std::nullopt;
                     Scalar root = Scalar(sg) * sqrt_scalar(bc * bc + Scalar(6) * bc + Scalar(1));
                     Scalar s = -(bc * bc + Scalar(2) * bc + root * (bc - Scalar(1)) + Scalar(1)) / (Scalar(4) * c * c);
                     if (small(s) || small(c * s + b) || small(b * b + s) || small(bc + root - Scalar(1)))
                       return std::nullopt;
                     Scalar X = (bc + root + Scalar(3)) * c / ((bc + root - Scalar(1)) * (bc - Scalar(1)) * (bc - Scalar(1)) * s);
                     return diff(hs(b, c, s).scaled(X), NEQ_M);
                   }});
  }

  auto gprime = [](const Mat2& m, int x1, int x2, int x3) {
    auto one = [](int x, int y, int z) { return x + y + z == 1 ? 1 : 0; };
    Scalar out = 0;
    for (int mask = 0; mask < 64; ++mask) {
      int a2 = (mask >> 5) & 1, a3 = (mask >> 4) & 1, b2 = (mask >> 3) & 1, b3 = (mask >> 2) & 1, c2 = (mask >> 1) & 1,
          c3 = mask & 1;
      if (!one(x1, a2, a3) || !one(x2, b2, b3) || !one(x3, c2, c3)) continue;
      out += m.at(b3, c2) * m.at(c3, a2) * m.at(a3, b2);
    }
    return out;
  };
  out.push_back({"A.6 symmetric ternary", true, [gprime](Rng& rng) -> std::optional<double> {
                   Scalar a = draw_exact(rng), b = draw_exact(rng), c = draw_exact(rng), d = draw_exact(rng);
                   Mat2 m{a, b, c, d};
                   Scalar t3(3);
                   std::vector<Scalar> rhs{b * b * b + c * c * c + t3 * a * b * d + t3 * a * c * d,
                                           a * b * b + a * b * c + a * c * c + a * a * d, a * a * b + a * a * c, a * a * a};
                   return diff_v({gprime(m, 0, 0, 0), gprime(m, 0, 0, 1), gprime(m, 0, 1, 1), gprime(m, 1, 1, 1)}, rhs);
                 }});
  out.push_back({"A.6 GHZ condition", true, [gprime](Rng& rng) -> std::optional<double> {
                   Scalar a = draw_exact(rng), b = draw_exact(rng), c = draw_exact(rng), d = draw_exact(rng);
                   Mat2 m{a, b, c, d};
                   Scalar g0 = gprime(m, 0, 0, 0), g1 = gprime(m, 0, 0, 1), g2 = gprime(m, 0, 1, 1), g3 = gprime(m, 1, 1, 1);
                   Scalar lhs = (g0 * g3 - g1 * g2) * (g0 * g3 - g1 * g2) - Scalar(4) * (g1 * g1 - g0 * g2) * (g2 * g2 - g1 * g3);
                   Scalar k = b * c - a * d;
                   Scalar rhs = Scalar(-4) * k * k * k * pow_int(a, 6);
                   return diff_v({lhs}, {rhs});
                 }});
  return out;
}

}  // namespace

std::vector<IdentityResult> verify_appendix(int draws, unsigned long seed, double threshold) {
  std::vector<IdentityResult> out;
  auto all = checks();
  for (std::size_t k = 0; k < all.size(); ++k) {
    Rng rng(seed * 1000003ULL + k);
    IdentityResult r;
    r.name = all[k].name;
    r.exact = all[k].exact;
    int tries = 0;
    while (r.draws < draws && tries < draws * 50) {
      ++tries;
      std::optional<double> res;
      try {
        res = all[k].run(rng);
      } catch (const DivisionByZero&) {
        continue;
      }
      if (!res) continue;
      r.max_residual = std::max(r.max_residual, *res);
      if (std::isnan(*res)) r.max_residual = INFINITY;
      ++r.draws;
    }
    r.passed = r.draws == draws && r.max_residual < threshold;
    out.push_back(r);
  }
  return out;
}

}  // namespace holant
