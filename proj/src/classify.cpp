#include "holant/classify.hpp"

#include <algorithm>
#include <cmath>

namespace holant {

const char* tag_name(TernaryTag t) {
  switch (t) {
    case TernaryTag::Degenerate:
      return "Degenerate";
    case TernaryTag::GHZ:
      return "GHZ";
    case TernaryTag::W:
      return "W";
  }
  return "?";
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::NotUniversal:
      return "NotUniversal";
    case Verdict::Universal:
      return "Universal";
    case Verdict::UniversalModuloNumerics:
      return "UniversalModuloNumerics";
  }
  return "?";
}

const char* oe_name(OEStatus s) {
  switch (s) {
    case OEStatus::Holds:
      return "holds";
    case OEStatus::Fails:
      return "fails";
    case OEStatus::Undetermined:
      return "undetermined";
  }
  return "?";
}

namespace {

double max_abs(const std::vector<Scalar>& v) {
  double m = 0;
  for (auto& s : v) m = std::max(m, s.abs());
  return m;
}

// Zero test scaled to the magnitude of the inputs (degree d polynomial).
bool poly_zero(const Scalar& value, const std::vector<Scalar>& inputs, int degree, double rel) {
  if (value.is_exact()) return value.is_exact_zero();
  double s = std::pow(std::max(max_abs(inputs), 1e-300), degree);
  return value.abs() <= rel * s;
}

std::optional<Rational> rational_cbrt(const Rational& r) {
  mpz_class n = r.get_num(), d = r.get_den();
  bool neg = n < 0;
  if (neg) n = -n;
  if (!mpz_perfect_power_p(n.get_mpz_t()) && n > 1) return std::nullopt;
  mpz_class rn, rd;
  if (!mpz_root(rn.get_mpz_t(), n.get_mpz_t(), 3)) return std::nullopt;
  if (!mpz_root(rd.get_mpz_t(), d.get_mpz_t(), 3)) return std::nullopt;
  Rational out(neg ? mpz_class(-rn) : rn, rd);
  out.canonicalize();
  return out;
}

Scalar cube_root(const Scalar& a) {
  if (a.is_exact() && a.exact().is_rational())
    if (auto r = rational_cbrt(a.exact().c[0])) return Scalar(*r);
  return Scalar(std::pow(a.to_complex(), 1.0 / 3.0));
}

// Witness for symmetric W: f = M o ONE3 with M = [m0 m1].
std::optional<Mat2> w_witness(const Signature& f) {
  auto slice = [&](int z) -> Mat2 { return {f[z], f[2 | z], f[4 | z], f[6 | z]}; };
  Mat2 S0 = slice(0), S1 = slice(1);
  // det(w0 S0 + w1 S1) = a w0^2 + b w0 w1 + c w1^2
  Scalar a = S0.det(), c = S1.det();
  Scalar b = S0.a * S1.d + S1.a * S0.d - S0.b * S1.c - S1.b * S0.c;
  Mat2 S;
  if (!c.is_zero()) {
    Scalar t = -b / (Scalar(2) * c);
    S = {S0.a + t * S1.a, S0.b + t * S1.b, S0.c + t * S1.c, S0.d + t * S1.d};
  } else {
    S = S1;
  }
  std::array<Scalar, 2> m0;
  if (!S.a.is_zero() || !S.c.is_zero())
    m0 = {S.a, S.c};
  else if (!S.b.is_zero() || !S.d.is_zero())
    m0 = {S.b, S.d};
  else
    return std::nullopt;
  Mat2 b0{m0[0], 1, m0[1], 0}, b1{m0[0], 0, m0[1], 1};
  Signature L0 = holo(b0, ONE(3)), L1 = holo(b1, ONE(3));
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = i + 1; j < 8; ++j) {
      Scalar det = L0[i] * L1[j] - L1[i] * L0[j];
      if (det.is_zero()) continue;
      Scalar u = (f[i] * L1[j] - L1[i] * f[j]) / det;
      Scalar v = (L0[i] * f[j] - f[i] * L0[j]) / det;
      Mat2 M{m0[0], u, m0[1], v};
      if (approx_eq(holo(M, ONE(3)), f)) return M;
      return std::nullopt;
    }
  return std::nullopt;
}

std::optional<Mat2> ghz_witness(const Signature& f) {
  auto split = recover_rank2(f);
  if (!split) return std::nullopt;
  for (int p : split->pattern)
    if (p != 0) return std::nullopt;
  Scalar ra = cube_root(split->alpha), rb = cube_root(split->beta);
  Mat2 M{split->c0[0] * ra, split->c1[0] * rb, split->c0[1] * ra, split->c1[1] * rb};
  if (approx_eq(holo(M, EQ(3)), f, 1e-8)) return M;
  return std::nullopt;
}

}  // namespace

Scalar hyperdeterminant(const Signature& f) {
  if (f.arity() != 3) throw ArityMismatch("hyperdeterminant needs a ternary signature");
  const Scalar &a000 = f[0], &a001 = f[1], &a010 = f[2], &a011 = f[3], &a100 = f[4], &a101 = f[5], &a110 = f[6],
               &a111 = f[7];
  Scalar sq = a000 * a000 * a111 * a111 + a001 * a001 * a110 * a110 + a010 * a010 * a101 * a101 +
              a100 * a100 * a011 * a011;
  Scalar mixed = a000 * a001 * a110 * a111 + a000 * a010 * a101 * a111 + a000 * a100 * a011 * a111 +
                 a001 * a010 * a101 * a110 + a001 * a100 * a011 * a110 + a010 * a100 * a011 * a101;
  Scalar quad = a000 * a011 * a101 * a110 + a001 * a010 * a100 * a111;
  return sq - Scalar(2) * mixed + Scalar(4) * quad;
}

TernaryClass classify_symmetric_ternary(const std::vector<Scalar>& e) {
  if (e.size() != 4) throw ArityMismatch("symmetric ternary needs four entries");
  const Scalar &f0 = e[0], &f1 = e[1], &f2 = e[2], &f3 = e[3];
  Scalar p = f0 * f3 - f1 * f2;
  Scalar disc = p * p - Scalar(4) * (f1 * f1 - f0 * f2) * (f2 * f2 - f1 * f3);
  Signature f = Signature::symmetric(e);
  if (!poly_zero(disc, e, 4, 1e-8)) return {TernaryTag::GHZ, ghz_witness(f)};
  if (poly_zero(f1 * f1 - f0 * f2, e, 2, 1e-9) && poly_zero(f2 * f2 - f1 * f3, e, 2, 1e-9))
    return {TernaryTag::Degenerate, std::nullopt};
  return {TernaryTag::W, w_witness(f)};
}

TernaryClass classify_ternary(const Signature& f) {
  if (f.arity() != 3) throw ArityMismatch("classify_ternary needs arity 3");
  auto d = decompose_atoms(f);
  if (d.atoms.size() > 1 || d.scalar.is_zero()) return {TernaryTag::Degenerate, std::nullopt};
  Scalar det = hyperdeterminant(f);
  bool ghz = !poly_zero(det, f.values(), 4, 1e-8);
  if (f.is_symmetric()) {
    if (ghz) return {TernaryTag::GHZ, ghz_witness(f)};
    return {TernaryTag::W, w_witness(f)};
  }
  if (ghz) return {TernaryTag::GHZ, ghz_witness(f)};
  return {TernaryTag::W, std::nullopt};
}

std::optional<Rank2Split> recover_rank2(const Signature& h) {
  const int k = h.arity();
  if (k < 3) throw ArityMismatch("recover_rank2 needs arity >= 3");
  auto d = decompose_atoms(h);
  if (d.atoms.size() != 1 || d.scalar.is_zero()) throw DegenerateInput("recover_rank2 needs an entangled function");
  static const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31};
  for (int attempt = 0; attempt < 5; ++attempt) {
    // contract legs 3..k with fixed vectors
    auto flat = [&](bool second) {
      Signature cur = h;
      for (int j = k; j >= 3; --j) {
        int p = primes[(attempt + j) % 11], q = primes[(attempt + 2 * j + 1) % 11];
        Signature vec = second ? Signature::unary(q, -1) : Signature::unary(1, p);
        cur = contract_pair(cur, j, vec, 1);
      }
      return matrix_view(cur);
    };
    Mat2 A = flat(false), B = flat(true);
    if (B.det().is_zero()) {
      std::swap(A, B);
      if (B.det().is_zero()) continue;
    }
    Mat2 C = A * B.inverse();
    Scalar tr = C.a + C.d;
    Scalar disc = tr * tr - Scalar(4) * C.det();
    std::vector<Scalar> entries{C.a, C.b, C.c, C.d};
    bool repeated = poly_zero(disc, entries, 2, 1e-10);
    bool scalar_matrix = C.b.is_zero() && C.c.is_zero() && approx_eq(C.a, C.d);
    if (repeated) {
      if (scalar_matrix) continue;
      return std::nullopt;  // Jordan block
    }
    Scalar sq = sqrt_scalar(disc);
    Scalar l0 = (tr + sq) / Scalar(2), l1 = (tr - sq) / Scalar(2);
    auto eigvec = [&](const Scalar& l) -> std::array<Scalar, 2> {
      Scalar u0 = C.b, u1 = l - C.a;
      Scalar w0 = l - C.d, w1 = C.c;
      if (u0.abs() + u1.abs() >= w0.abs() + w1.abs()) return {u0, u1};
      return {w0, w1};
    };
    auto c0 = eigvec(l0), c1 = eigvec(l1);
    Mat2 P{c0[0], c1[0], c0[1], c1[1]};
    if (P.det().is_zero()) continue;
    Signature hp = holo(P.inverse(), h);
    // support should be {a, complement of a}
    double scale = 0;
    for (auto& v : hp.values()) scale = std::max(scale, v.abs());
    std::vector<std::size_t> nz;
    for (std::size_t x = 0; x < hp.size(); ++x) {
      bool zero = hp[x].is_exact() ? hp[x].is_exact_zero() : hp[x].abs() <= 1e-9 * std::max(scale, 1.0);
      if (!zero) nz.push_back(x);
    }
    std::size_t mask = hp.size() - 1;
    if (nz.size() != 2 || (nz[0] ^ nz[1]) != mask) return std::nullopt;
    std::size_t a = nz[0];  // first bit 0 since nz[0] < nz[1]
    Rank2Split out;
    out.c0 = c0;
    out.c1 = c1;
    out.alpha = hp[a];
    out.beta = hp[a ^ mask];
    for (int j = 0; j < k; ++j) out.pattern.push_back(static_cast<int>((a >> (k - 1 - j)) & 1));
    out.approximate = !(P.is_exact() && h.is_exact());
    return out;
  }
  return std::nullopt;
}

namespace {

bool flat_greater(const Mat2& x, const Mat2& y) {
  const Scalar* xs[] = {&x.a, &x.b, &x.c, &x.d};
  const Scalar* ys[] = {&y.a, &y.b, &y.c, &y.d};
  for (int t = 0; t < 4; ++t) {
    Complex a = xs[t]->to_complex(), b = ys[t]->to_complex();
    if (std::abs(a.real() - b.real()) > 1e-12) return a.real() > b.real();
    if (std::abs(a.imag() - b.imag()) > 1e-12) return a.imag() > b.imag();
  }
  return false;
}

}  // namespace

DichotomyReport classify_set(const std::vector<Signature>& F) {
  DichotomyReport rep;
  std::vector<Signature> atoms;
  for (auto& f : F) {
    auto d = decompose_atoms(f);
    for (auto& a : d.atoms)
      if (a.arity() >= 2) atoms.push_back(a);
  }
  rep.cond_T = std::all_of(atoms.begin(), atoms.end(), [](const Signature& a) { return a.arity() <= 2; });
  rep.cond_KE = std::all_of(atoms.begin(), atoms.end(),
                            [](const Signature& a) { return family_test(a, Family::E, Mat2::K1()); });
  if (std::all_of(atoms.begin(), atoms.end(), [](const Signature& a) { return family_test(a, Family::M, Mat2::K1()); }))
    rep.cond_KM.push_back("K1");
  if (std::all_of(atoms.begin(), atoms.end(), [](const Signature& a) { return family_test(a, Family::M, Mat2::K2()); }))
    rep.cond_KM.push_back("K2");

  const Signature* big = nullptr;
  for (auto& a : atoms)
    if (a.arity() >= 3) {
      big = &a;
      break;
    }
  if (!big) {
    rep.cond_OE = OEStatus::Undetermined;
  } else {
    rep.cond_OE = OEStatus::Fails;
    auto split = recover_rank2(*big);
    if (split) {
      if (split->approximate) rep.approximate = true;
      auto dot = [](const std::array<Scalar, 2>& u, const std::array<Scalar, 2>& v) { return u[0] * v[0] + u[1] * v[1]; };
      Scalar n0 = dot(split->c0, split->c0), n1 = dot(split->c1, split->c1);
      if (dot(split->c0, split->c1).is_zero() && !n0.is_zero() && !n1.is_zero()) {
        Scalar s0 = sqrt_scalar(n0), s1 = sqrt_scalar(n1);
        if (!s0.is_exact() || !s1.is_exact()) rep.approximate = true;
        Mat2 O{split->c0[0] / s0, split->c1[0] / s1, split->c0[1] / s0, split->c1[1] / s1};
        std::vector<Mat2> orbit;
        for (const Mat2& base : {O, O * Mat2::X()})
          for (int s1g : {1, -1})
            for (int s2g : {1, -1}) orbit.push_back(base * Mat2{s1g, 0, 0, s2g});
        std::optional<Mat2> best;
        for (auto& cand : orbit) {
          bool ok = std::all_of(atoms.begin(), atoms.end(),
                                [&](const Signature& a) { return family_test(a, Family::E, cand); });
          if (ok && (!best || flat_greater(cand, *best))) best = cand;
        }
        if (best) {
          rep.cond_OE = OEStatus::Holds;
          rep.oe_witness = best;
        }
      }
    }
  }

  if (rep.cond_T) rep.reasons.push_back("cond_T: every atom has arity at most 2");
  if (rep.cond_OE == OEStatus::Holds) rep.reasons.push_back("cond_OE: every atom lies in O o E");
  if (rep.cond_KE) rep.reasons.push_back("cond_KE: every atom lies in K1 o E");
  for (auto& k : rep.cond_KM) rep.reasons.push_back("cond_KM: every atom lies in " + k + " o M");
  if (!rep.reasons.empty()) {
    rep.verdict = Verdict::NotUniversal;
  } else {
    rep.verdict = rep.approximate ? Verdict::UniversalModuloNumerics : Verdict::Universal;
    rep.reasons.push_back("none of cond_T, cond_OE, cond_KE, cond_KM holds");
  }
  return rep;
}

}  // namespace holant
