#include "holant/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>

#include "holant/classify.hpp"

namespace holant {

Factorization pldu(const Mat2& m) {
  if (m.det().is_zero()) throw SingularMatrix("pldu needs an invertible matrix");
  const Scalar &al = m.a, &be = m.b, &ga = m.c, &de = m.d;
  if (!al.is_zero()) {
    Mat2 L{1, 0, ga / al, 1};
    Mat2 D{al, 0, 0, (al * de - be * ga) / al};
    Mat2 U{1, be / al, 0, 1};
    return {Mat2::identity(), L, D, U};
  }
  Mat2 L{1, 0, al / ga, 1};
  Mat2 D{ga, 0, 0, (be * ga - al * de) / ga};
  Mat2 U{1, de / ga, 0, 1};
  return {Mat2::X(), L, D, U};
}

Triangularization triangularize(const Mat2& m, TriSide side) {
  if (m.det().is_zero()) throw SingularMatrix("triangularize needs an invertible matrix");
  const bool upper = side == TriSide::Upper;
  if ((upper && m.c.is_zero()) || (!upper && m.b.is_zero())) return {Mat2::identity(), m, "orthogonal"};
  // column that must become a multiple of a basis vector
  Scalar v0 = upper ? m.a : m.b, v1 = upper ? m.c : m.d;
  Scalar n2 = v0 * v0 + v1 * v1;
  Mat2 Q;
  std::string kind = "orthogonal";
  if (!n2.is_zero()) {
    Scalar n = sqrt_scalar(n2);
    Scalar q0 = v0 / n, q1 = v1 / n;
    Q = upper ? Mat2{q0, -q1, q1, q0} : Mat2{q1, q0, -q0, q1};
  } else {
    Scalar i(CycScalar::imag());
    // isotropic: v1 = +-i v0
    bool plus = approx_eq(v1, i * v0);
    if (upper) {
      Q = plus ? Mat2::K1() : Mat2::K2();
      kind = plus ? "K1" : "K2";
    } else {
      Q = plus ? Mat2::K2() : Mat2::K1();
      kind = plus ? "K2" : "K1";
    }
  }
  Mat2 R = Q.inverse() * m;
  if (upper)
    R.c = R.c.is_exact() ? R.c : Scalar(0).to_approx();
  else
    R.b = R.b.is_exact() ? R.b : Scalar(0).to_approx();
  return {Q, R, kind};
}

Signature unitary_completion(const std::vector<Scalar>& a) {
  const std::size_t N = a.size();
  if (N < 2 || (N & (N - 1)) != 0) throw ArityMismatch("unitary_completion needs 2^n entries with n >= 1");
  int n = 0;
  while ((std::size_t(1) << n) < N) ++n;
  std::vector<std::vector<Complex>> cols;
  std::vector<Complex> first(N);
  double norm = 0;
  for (std::size_t r = 0; r < N; ++r) {
    first[r] = a[r].to_complex();
    norm += std::norm(first[r]);
  }
  norm = std::sqrt(norm);
  if (norm <= default_tolerance()) throw ZeroVector("cannot complete the zero vector");
  for (auto& z : first) z /= norm;
  cols.push_back(first);
  for (std::size_t e = 0; e < N && cols.size() < N; ++e) {
    std::vector<Complex> v(N, 0.0);
    v[e] = 1.0;
    for (int pass = 0; pass < 2; ++pass)
      for (auto& c : cols) {
        Complex dot = 0;
        for (std::size_t r = 0; r < N; ++r) dot += std::conj(c[r]) * v[r];
        for (std::size_t r = 0; r < N; ++r) v[r] -= dot * c[r];
      }
    double vn = 0;
    for (auto& z : v) vn += std::norm(z);
    vn = std::sqrt(vn);
    if (vn < 1e-8) continue;
    for (auto& z : v) z /= vn;
    cols.push_back(v);
  }
  std::vector<Scalar> vals(N * N);
  for (std::size_t c = 0; c < N; ++c)
    for (std::size_t r = 0; r < N; ++r) vals[(c << n) | r] = Scalar(cols[c][r]);
  return Signature(2 * n, std::move(vals));
}

Signature evaluate_recipe(const GadgetRecipe& r) {
  return eval_formula(r.formula, static_cast<int>(r.formula.bound_vars.size()));
}

double recipe_residual(const GadgetRecipe& r) {
  Signature got = evaluate_recipe(r);
  if (got.is_exact() && r.claimed.is_exact()) return got == r.claimed ? 0.0 : 1.0;
  double scale = 1;
  for (auto& v : r.claimed.values()) scale = std::max(scale, v.abs());
  return residual(got, r.claimed) / scale;
}

namespace {

// Formula under construction; every variable other than the declared free ones ends up bound.
class Builder {
 public:
  int node() { return psi_.var("y" + std::to_string(count_++)); }
  int free_var(int idx) { return psi_.var("x" + std::to_string(idx)); }
  void atom(const Signature& f, std::vector<int> scope, std::vector<Label> labels = {}) {
    psi_.add_atom(f, std::move(scope), std::move(labels));
  }
  void scalar(const Scalar& s) {
    int y = node();
    atom(Signature::unary(s, 0), {y});
    atom(Signature::unary(1, 0), {y});
  }
  PpsHFormula finish(const std::vector<int>& free) {
    psi_.free_vars = free;
    std::vector<bool> used(psi_.names.size(), false);
    for (auto& a : psi_.atoms)
      for (int v : a.scope) used[v] = true;
    for (std::size_t v = 0; v < used.size(); ++v)
      if (used[v] && std::find(free.begin(), free.end(), static_cast<int>(v)) == free.end())
        psi_.bound_vars.push_back(static_cast<int>(v));
    return psi_;
  }
  PpsHFormula& formula() { return psi_; }

 private:
  PpsHFormula psi_;
  int count_ = 0;
};

// Binary gadget with its predicted matrix.
struct Piece {
  Mat2 m;
  std::function<void(Builder&, int, int)> emit;
};

Piece chain(const std::vector<Piece>& parts) {
  Mat2 m = parts.front().m;
  for (std::size_t i = 1; i < parts.size(); ++i) m = m * parts[i].m;
  return {m, [parts](Builder& b, int x, int y) {
            int cur = x;
            for (std::size_t i = 0; i < parts.size(); ++i) {
              int next = i + 1 == parts.size() ? y : b.node();
              parts[i].emit(b, cur, next);
              cur = next;
            }
          }};
}

Piece scaled(const Scalar& s, const Piece& p) {
  return {p.m.scaled(s), [s, p](Builder& b, int x, int y) {
            p.emit(b, x, y);
            b.scalar(s);
          }};
}

double mat_scale(const Mat2& m) { return std::max({1.0, m.a.abs(), m.b.abs(), m.c.abs(), m.d.abs()}); }

bool close(const Mat2& x, const Mat2& y, double rel = 1e-8) {
  if (x.is_exact() && y.is_exact()) return x == y;
  return approx_eq(x, y, rel * std::max(mat_scale(x), mat_scale(y)));
}

bool near_zero(const Scalar& s, double scale = 1) {
  if (s.is_exact()) return s.is_exact_zero();
  return s.abs() <= 1e-10 * std::max(scale, 1.0);
}

template <class F>
auto attempt(F&& f) -> std::optional<decltype(f())> {
  try {
    return f();
  } catch (const DivisionByZero&) {
  } catch (const SingularMatrix&) {
  } catch (const NumericOverflow&) {
  }
  return std::nullopt;
}

std::string show(const Scalar& s) { return s.to_string(); }

Scalar imag_unit() { return Scalar(CycScalar::imag()); }

// Gadget sources for the three generator pieces: NEQ, diagonals and some t_mu = (0 1; 1 mu).
struct Source {
  std::function<Piece()> neq;
  std::function<Piece(const Scalar&, const Scalar&)> diag;  // diag(d1, d2)
  Piece t;
};

Piece compose(const Mat2& T, const Source& src) {
  Factorization F = pldu(T);
  Scalar mu = src.t.m.d;
  std::vector<Piece> parts;
  if (F.P == Mat2::X() || (!F.P.is_exact() && approx_eq(F.P, Mat2::X()))) parts.push_back(src.neq());
  Scalar l = F.L.c, u = F.U.b;
  if (!near_zero(l)) {
    parts.push_back(src.diag(1, l / mu));
    parts.push_back(src.t);
    parts.push_back(src.diag(mu / l, 1));
    parts.push_back(src.neq());
  }
  parts.push_back(src.diag(F.D.a, F.D.d));
  if (!near_zero(u)) {
    parts.push_back(src.neq());
    parts.push_back(src.diag(mu / u, 1));
    parts.push_back(src.t);
    parts.push_back(src.diag(1, u / mu));
  }
  return chain(parts);
}

// Rank-1 binary targets are built from two unaries.
std::optional<GadgetRecipe> degenerate_binary(const Signature& target, const std::string& lemma) {
  Mat2 T = matrix_view(target);
  if (!T.det().is_zero()) return std::nullopt;
  Builder b;
  int x1 = b.free_var(1), x2 = b.free_var(2);
  Scalar u0 = 0, u1 = 0, v0 = 0, v1 = 0;
  if (!T.a.is_zero() || !T.b.is_zero()) {
    v0 = T.a, v1 = T.b, u0 = 1;
    u1 = !T.a.is_zero() ? T.c / T.a : T.d / T.b;
  } else if (!T.c.is_zero() || !T.d.is_zero()) {
    v0 = T.c, v1 = T.d, u1 = 1;
  }
  b.atom(Signature::unary(u0, u1), {x1});
  b.atom(Signature::unary(v0, v1), {x2});
  return GadgetRecipe{b.finish({x1, x2}), target, lemma + " (degenerate target)", {}};
}

GadgetRecipe finish_binary(const Piece& p, const Signature& target, std::string lemma,
                           std::vector<std::pair<std::string, std::string>> params) {
  Builder b;
  int x1 = b.free_var(1), x2 = b.free_var(2);
  p.emit(b, x1, x2);
  GadgetRecipe r{b.finish({x1, x2}), target, std::move(lemma), std::move(params)};
  double res = recipe_residual(r);
  if (!(res < 1e-6)) throw ParameterDegenerate("realized binary misses the target, residual " + std::to_string(res));
  return r;
}

std::optional<Rational> rational_cbrt(const Rational& r) {
  mpz_class n = r.get_num(), d = r.get_den();
  bool neg = n < 0;
  if (neg) n = -n;
  mpz_class rn, rd;
  if (!mpz_root(rn.get_mpz_t(), n.get_mpz_t(), 3)) return std::nullopt;
  if (!mpz_root(rd.get_mpz_t(), d.get_mpz_t(), 3)) return std::nullopt;
  Rational out(neg ? mpz_class(-rn) : rn, rd);
  out.canonicalize();
  return out;
}

class GhzPieces {
 public:
  GhzPieces(Scalar a, Scalar b) : a_(std::move(a)), b_(std::move(b)), f_(ghz_generator(a_, b_)) {}

  Mat2 gm(const Scalar& c) const {
    Scalar a2 = a_ * a_;
    Scalar k = (a2 * c).inverse();
    return Mat2{a2 * (a2 * c * c + b_ * b_), a_ * b_, a_ * b_, 1}.scaled(k);
  }
  Piece g(const Scalar& c) const {
    // u'_c = (R^T)^{-1} o [c, 1/c]
    Signature u = Signature::unary(c / a_, a_ / c - b_ * c);
    Signature f = f_;
    return {gm(c), [f, u](Builder& b, int x, int y) {
              int z = b.node();
              b.atom(f, {x, y, z});
              b.atom(u, {z});
            }};
  }

  int which_case() const {
    Scalar ab2 = a_ * a_ * b_ * b_;
    if (near_zero(ab2 + Scalar(1), ab2.abs())) return 2;
    if (near_zero(Scalar(2) * ab2 + Scalar(1), ab2.abs())) return 3;
    return 1;
  }

  Piece neq() const {
    const Mat2 N = Mat2::X();
    Scalar i = imag_unit();
    std::vector<Piece> cands;
    switch (which_case()) {
      case 1: {
        Scalar ab2 = a_ * a_ * b_ * b_;
        Scalar s = (i * b_ / a_) * sqrt_scalar(Scalar(2) * (ab2 + Scalar(1)) / (Scalar(2) * ab2 + Scalar(1)));
        Scalar t = i * (ab2 + Scalar(1)) / (a_ * a_ * a_ * b_);
        cands.push_back(scaled(-i, chain({g(s), g(t), g(s)})));
        break;
      }
      case 2: {
        Scalar a2 = a_ * a_;
        Scalar p = Scalar(2) / a2;
        Scalar q = sqrt_scalar(Scalar(Rational(2, 3))) / a2;
        Piece h = chain({g(p), g(q), g(a2.inverse()), g(q), g(p)});
        cands.push_back(scaled(i, h));
        cands.push_back(scaled(-i, h));
        break;
      }
      default: {
        Scalar a2 = a_ * a_;
        Scalar r = a2.inverse();
        Scalar s = sqrt_scalar(Scalar(Rational(3, 10))) / a2;
        Scalar u = (Scalar(3) * Scalar(CycScalar::sqrt2()) * a2).inverse();
        Piece h = chain({g(s), g(r), g(u), g(r), g(s)});
        cands.push_back(scaled(i, h));
        cands.push_back(scaled(-i, h));
      }
    }
    for (auto& c : cands)
      if (close(c.m, N)) return c;
    throw ParameterDegenerate("no NEQ gadget for these parameters");
  }

  std::optional<Piece> kd_direct(const Scalar& d) const {
    const Mat2 target{d, 0, 0, d.inverse()};
    std::vector<Piece> cands;
    Scalar a2 = a_ * a_, a4 = a2 * a2;
    switch (which_case()) {
      case 1: {
        Scalar ab2 = a2 * b_ * b_;
        auto disc = attempt([&] { return sqrt_scalar(Scalar(1) - Scalar(4) * (ab2 + Scalar(1)) * d * d); });
        if (!disc) break;
        for (int sg : {1, -1}) {
          auto built = attempt([&]() -> std::vector<Piece> {
            Scalar psq = -(Scalar(2) * ab2 + Scalar(1) + Scalar(sg) * *disc) / (Scalar(2) * a4);
            if (near_zero(psq)) return {};
            Scalar p = sqrt_scalar(psq);
            Scalar num = -(ab2 + Scalar(1)) * (a4 * psq + ab2 + Scalar(1));
            Scalar den = a4 * a2 * (a2 * psq + b_ * b_);
            Scalar q = sqrt_scalar(num / den);
            if (near_zero(q)) return {};
            return {chain({g(p), g(q), g(p)}), chain({g(p), g(-q), g(p)})};
          });
          if (built) cands.insert(cands.end(), built->begin(), built->end());
        }
        break;
      }
      case 2: {
        auto p = attempt([&] { return chain({g(a2.inverse()), g(-(a2 * d).inverse()), g(a2.inverse())}); });
        if (p) cands.push_back(*p);
        break;
      }
      default: {
        auto root = attempt([&] { return sqrt_scalar(Scalar(1) - Scalar(2) * d * d); });
        if (!root) break;
        for (int sg : {1, -1}) {
          auto p = attempt([&]() -> std::optional<Piece> {
            Scalar w = (Scalar(sg) * *root - Scalar(1)) / (Scalar(2) * a2 * d);
            if (near_zero(w)) return std::nullopt;
            Scalar w2 = Scalar(2) * a4 * w * w;
            Scalar v = sqrt_scalar((w2 - Scalar(1)) / (Scalar(2) * (w2 + Scalar(1)))) / a2;
            if (near_zero(v)) return std::nullopt;
            return chain({g(v), g(w), g(v)});
          });
          if (p && *p) cands.push_back(**p);
        }
      }
    }
    for (auto& c : cands)
      if (close(c.m, target)) return c;
    return std::nullopt;
  }

  Piece kd(const Scalar& d) const {
    if (auto p = kd_direct(d)) return *p;
    // split k_d = k_e k_{d/e} around the finite failure set
    for (long e : {2, 3, 5, 7, 11, 13}) {
      auto p1 = kd_direct(Scalar(e)), p2 = kd_direct(d / Scalar(e));
      if (p1 && p2) return chain({*p1, *p2});
    }
    throw ParameterDegenerate("no diagonal gadget for d = " + show(d));
  }

  Piece diag(const Scalar& d1, const Scalar& d2) const {
    Scalar e = sqrt_scalar(d1 / d2);
    return scaled(d1 / e, kd(e));
  }

  Piece t() const {
    Scalar i = imag_unit();
    std::vector<Piece> cands;
    switch (which_case()) {
      case 1:
        cands.push_back(scaled(i, g(i * b_ / a_)));
        break;
      case 2:
        cands.push_back(scaled(-i, g((a_ * a_).inverse())));
        cands.push_back(scaled(i, g((a_ * a_).inverse())));
        break;
      default: {
        Scalar c = (Scalar(CycScalar::sqrt2()) * a_ * a_).inverse();
        cands.push_back(scaled(-i, g(c)));
        cands.push_back(scaled(i, g(c)));
      }
    }
    for (auto& c : cands)
      if (close(Mat2{c.m.a, c.m.b, c.m.c, 0}, Mat2{0, 1, 1, 0}) && !near_zero(c.m.d)) return c;
    throw ParameterDegenerate("no t gadget for these parameters");
  }

 private:
  Scalar a_, b_;
  Signature f_;
};

}  // namespace

Signature ghz_generator(const Scalar& a, const Scalar& b) {
  return holo(Mat2{a, b, 0, a.inverse()}, EQ(3));
}

GadgetRecipe binary_from_ghz(const Scalar& a, const Scalar& b, const Signature& target) {
  if (target.arity() != 2) throw ArityMismatch("target must be binary");
  if (a.is_zero() || b.is_zero()) throw PreconditionViolated("a and b must be non-zero");
  if (auto r = degenerate_binary(target, "binary_from_ghz")) return *r;
  GhzPieces P(a, b);
  Source src;
  src.neq = [&] { return P.neq(); };
  src.diag = [&](const Scalar& d1, const Scalar& d2) { return P.diag(d1, d2); };
  src.t = P.t();
  Piece p = compose(matrix_view(target), src);
  return finish_binary(p, target, "binary_from_ghz case " + std::to_string(P.which_case()),
                       {{"a", show(a)}, {"b", show(b)}});
}

GadgetRecipe binary_from_ghz(const Signature& f, const Signature& target) {
  if (f.arity() != 3) throw ArityMismatch("f must be ternary");
  if (f[7].is_zero()) throw PreconditionViolated("f is not of the form R o EQ3");
  Scalar inv = f[7].inverse(), a;
  std::optional<Rational> root;
  if (inv.is_exact() && inv.exact().is_rational()) root = rational_cbrt(inv.exact().c[0]);
  a = root ? Scalar(*root) : Scalar(std::pow(inv.to_complex(), 1.0 / 3.0));
  Scalar b = f[3] * a * a;
  if (!approx_eq(ghz_generator(a, b), f, 1e-9 * std::max(1.0, f[0].abs())))
    throw PreconditionViolated("f is not of the form R o EQ3 with R upper triangular");
  return binary_from_ghz(a, b, target);
}

GadgetRecipe binary_from_tractable_pair(const Signature& f, const Signature& g, const Signature& target) {
  if (f.arity() != 3 || g.arity() != 2 || target.arity() != 2) throw ArityMismatch("expected ternary f, binary g, binary target");
  for (int x = 1; x < 7; ++x)
    if (!f[x].is_zero()) throw PreconditionViolated("f must be [1,0,0,a]");
  if (!approx_eq(f[0], Scalar(1))) throw PreconditionViolated("f must be [1,0,0,a]");
  if (!approx_eq(g[1], Scalar(1)) || !approx_eq(g[2], Scalar(1))) throw PreconditionViolated("g must be [b,1,c]");
  const Scalar a = f[7], b = g[0], c = g[3];
  if (a.is_zero()) throw PreconditionViolated("a must be non-zero");
  if (b.is_zero() && c.is_zero()) throw PreconditionViolated("g lies in the E clone (b = c = 0)");
  if ((b * c - Scalar(1)).is_zero()) throw PreconditionViolated("g is degenerate (bc = 1)");
  if (auto r = degenerate_binary(target, "binary_from_tractable_pair")) return *r;

  auto fd = [&](const Scalar& d) -> Piece {
    Signature u = Signature::unary(1, d / a);
    return {Mat2{1, 0, 0, d}, [f, u](Builder& bb, int x, int y) {
              int z = bb.node();
              bb.atom(f, {x, y, z});
              bb.atom(u, {z});
            }};
  };
  Piece gp{matrix_view(g), [g](Builder& bb, int x, int y) { bb.atom(g, {x, y}); }};
  auto h = [&](const Scalar& s) {
    Scalar t = -((b * b + s) * (b * b + s)) / ((c * s + b) * (c * s + b));
    return chain({gp, fd(s), gp, fd(t), gp, fd(s), gp});
  };

  std::vector<Piece> neq_cands;
  if (b.is_zero()) {
    neq_cands.push_back(scaled(Scalar(2) * c * c * c, h(-(Scalar(2) * c * c).inverse())));
  } else if (c.is_zero()) {
    neq_cands.push_back(scaled((Scalar(-2) * b * b * b).inverse(), h(Scalar(-2) * b * b)));
  } else {
    Scalar bc = b * c;
    Scalar root = sqrt_scalar(bc * bc + Scalar(6) * bc + Scalar(1));
    for (int sg : {1, -1}) {
      auto p = attempt([&]() -> std::optional<Piece> {
        Scalar sr = Scalar(sg) * root;
        Scalar s = -((bc + Scalar(1)) * (bc + Scalar(1)) + sr * (bc - Scalar(1))) / (Scalar(4) * c * c);
        if (near_zero(s)) return std::nullopt;
        Scalar X = (bc + sr + Scalar(3)) * c / ((bc + sr - Scalar(1)) * (bc - Scalar(1)) * (bc - Scalar(1)) * s);
        return scaled(X, h(s));
      });
      if (p && *p) neq_cands.push_back(**p);
    }
  }
  std::optional<Piece> neq;
  for (auto& p : neq_cands)
    if (close(p.m, Mat2::X())) {
      neq = p;
      break;
    }
  if (!neq) throw ParameterDegenerate("no NEQ gadget for these parameters");

  std::optional<Piece> tp;
  for (long sn : {1L, 2L, 3L, -3L, 5L, 7L}) {
    for (long sd : {1L, 2L, 3L}) {
      Scalar s = Scalar::rational(sn, sd);
      if (near_zero(b * b + s) || near_zero(c * s + b)) continue;
      auto p = attempt([&]() -> std::optional<Piece> {
        Piece hs = h(s);
        if (near_zero(hs.m.b) || near_zero(hs.m.d)) return std::nullopt;
        return scaled(hs.m.b.inverse(), hs);
      });
      if (p && *p && close(Mat2{(*p)->m.a, (*p)->m.b, (*p)->m.c, 0}, Mat2::X())) {
        tp = **p;
        break;
      }
    }
    if (tp) break;
  }
  if (!tp) throw ParameterDegenerate("no t gadget for these parameters");

  Source src;
  src.neq = [&] { return *neq; };
  src.diag = [&](const Scalar& d1, const Scalar& d2) { return scaled(d1, fd(d2 / d1)); };
  src.t = *tp;
  Piece p = compose(matrix_view(target), src);
  return finish_binary(p, target, "binary_from_tractable_pair", {{"a", show(a)}, {"b", show(b)}, {"c", show(c)}});
}

namespace {

bool clone_member(const Signature& s, const Mat2& k) {
  auto d = decompose_atoms(s);
  for (auto& a : d.atoms)
    if (!family_test(a, Family::M, k)) return false;
  return true;
}

}  // namespace

GadgetRecipe ghz_from_w(const Signature& f, const Signature& s1, const Signature& s2) {
  if (f.arity() != 3 || s1.arity() != 2 || s2.arity() != 2) throw ArityMismatch("expected ternary f and binary s1, s2");
  TernaryClass cls = classify_ternary(f);
  if (cls.tag != TernaryTag::W) throw PreconditionViolated(std::string("f is ") + tag_name(cls.tag) + ", not W");
  if (!cls.witness) throw PreconditionViolated("no W witness for f");
  const Mat2 M = *cls.witness;
  bool in1 = family_test(f, Family::M, Mat2::K1()), in2 = family_test(f, Family::M, Mat2::K2());

  Builder b;
  int x1 = b.free_var(1), x2 = b.free_var(2), x3 = b.free_var(3);
  GadgetRecipe r;
  if (!in1 && !in2) {
    int y1 = b.node(), y2 = b.node(), y3 = b.node();
    b.atom(f, {x1, y2, y3});
    b.atom(f, {x2, y3, y1});
    b.atom(f, {x3, y1, y2});
    Mat2 G = M.transpose() * M;
    const Scalar &A = G.a, &B = G.b, &C = G.c, &D = G.d;
    Signature gp = Signature::symmetric({B * B * B + C * C * C + Scalar(3) * A * B * D + Scalar(3) * A * C * D,
                                         A * B * B + A * B * C + A * C * C + A * A * D, A * A * B + A * A * C,
                                         A * A * A});
    r = {b.finish({x1, x2, x3}), holo(M, gp), "ghz_from_w triangle", {}};
  } else {
    const Signature& s = in1 ? s1 : s2;
    if (clone_member(s, in1 ? Mat2::K1() : Mat2::K2()))
      throw PreconditionViolated(std::string(in1 ? "s1" : "s2") + " lies in the K o M clone");
    int p2 = b.node(), p3 = b.node(), q2 = b.node(), q3 = b.node(), r2 = b.node(), r3 = b.node();
    b.atom(f, {x1, p2, p3});
    b.atom(f, {x2, q2, q3});
    b.atom(f, {x3, r2, r3});
    b.atom(s, {p3, q2});
    b.atom(s, {q3, r2});
    b.atom(s, {r3, p2});
    PpsHFormula psi = b.finish({x1, x2, x3});
    r = {psi, eval_formula_brute(psi), in1 ? "ghz_from_w triangle with s1" : "ghz_from_w triangle with s2", {}};
  }
  if (classify_ternary(r.claimed).tag != TernaryTag::GHZ)
    throw ParameterDegenerate("triangle gadget did not leave the W class");
  return r;
}

GadgetRecipe express_E(const Signature& f, const Mat2& m) {
  const int n = f.arity();
  if (n < 1) throw ArityMismatch("express_E needs arity >= 1");
  if (!family_test(f, Family::E, m)) throw FamilyViolation("f is not in M o E");
  Mat2 G = m.transpose() * m;
  bool ortho = close(G, Mat2::identity()), kmode = close(G, Mat2::X());
  if (!ortho && !kmode) throw FamilyViolation("transform must be orthogonal, K1 or K2");
  Signature h = holo(m.inverse(), f);
  const std::size_t mask = h.size() - 1;
  double scale = 0;
  for (auto& v : h.values()) scale = std::max(scale, v.abs());
  std::size_t a = 0;
  for (std::size_t x = 0; x < h.size(); ++x)
    if (!near_zero(h[x], scale)) {
      a = std::min(x, x ^ mask);
      break;
    }

  // untransformed skeleton
  struct Raw {
    Signature fn;
    std::vector<int> scope;
  };
  std::vector<Raw> raw;
  Builder b;
  std::vector<int> xs;
  for (int j = 1; j <= n; ++j) xs.push_back(b.free_var(j));
  if (n == 1) {
    raw.push_back({h, {xs[0]}});
  } else {
    std::vector<int> z(n);
    for (int j = 0; j < n; ++j) {
      if ((a >> (n - 1 - j)) & 1) {
        z[j] = b.node();
        raw.push_back({NEQ(), {xs[j], z[j]}});
      } else {
        z[j] = xs[j];
      }
    }
    int y = b.node();
    raw.push_back({EQ(3), {z[0], z[1], y}});
    for (int k = 2; k < n; ++k) {
      int y2 = b.node();
      raw.push_back({EQ(3), {z[k], y, y2}});
      y = y2;
    }
    raw.push_back({Signature::unary(h[a], h[a ^ mask]), {y}});
  }

  if (kmode) {
    // each bound connection picks up K^T K = X; an inserted K o EQ2 cancels it
    std::map<int, int> seen;
    std::vector<Raw> extra;
    std::set<int> frees(xs.begin(), xs.end());
    for (auto& at : raw)
      for (int& v : at.scope) {
        if (frees.count(v)) continue;
        if (seen.count(v)) {
          int p = b.node(), r = b.node();
          extra.push_back({EQ(3), {v, p, r}});
          extra.push_back({EQ(1), {r}});
          v = p;
        } else {
          seen[v] = 1;
        }
      }
    raw.insert(raw.end(), extra.begin(), extra.end());
  }
  for (auto& at : raw) b.atom(holo(m, at.fn), at.scope);
  GadgetRecipe r{b.finish(xs), f, ortho ? "express_E orthogonal" : "express_E K", {}};
  return r;
}

GadgetRecipe express_M(const Signature& f) {
  const int n = f.arity();
  if (n < 1) throw ArityMismatch("express_M needs arity >= 1");
  if (!family_test(f, Family::M)) throw FamilyViolation("f is not in M");
  Builder b;
  const auto L = Label::L, R = Label::R;
  auto dfun = [](const Scalar& v01, const Scalar& v10) { return Signature(2, {0, v01, v10, 0}); };
  std::vector<int> xs;
  for (int j = 1; j <= n; ++j) xs.push_back(b.free_var(j));
  if (n == 1) {
    int y = b.node(), z = b.node();
    b.atom(dfun(f[0], f[1]), {xs[0], y}, {L, L});
    b.atom(NEQ(), {y, z}, {R, R});
    b.atom(EQ(1), {z}, {L});
  } else {
    std::function<void(std::vector<int>)> one = [&](std::vector<int> vars) {
      const std::size_t m = vars.size();
      if (m == 2) {
        b.atom(dfun(1, 1), vars, {L, L});
      } else if (m == 3) {
        b.atom(ONE(3), vars, {L, L, L});
      } else {
        int y = b.node(), z = b.node();
        std::vector<int> head(vars.begin(), vars.end() - 2);
        head.push_back(y);
        one(head);
        b.atom(NEQ(), {y, z}, {R, R});
        b.atom(ONE(3), {z, vars[m - 2], vars[m - 1]}, {L, L, L});
      }
    };
    std::vector<int> zs;
    for (int j = 0; j <= n; ++j) zs.push_back(b.node());
    one(zs);
    int w1 = b.node(), w2 = b.node(), w3 = b.node();
    b.atom(NEQ(), {zs[n], w1}, {R, R});
    b.atom(dfun(1, f[0]), {w2, w1}, {L, L});
    b.atom(NEQ(), {w2, w3}, {R, R});
    b.atom(EQ(1), {w3}, {L});
    for (int j = 0; j < n; ++j) {
      int y = b.node();
      b.atom(dfun(1, f[std::size_t(1) << (n - 1 - j)]), {xs[j], y}, {L, L});
      b.atom(NEQ(), {y, zs[j]}, {R, R});
    }
  }
  PpsHFormula psi = b.finish(xs);
  psi.labelled = true;
  psi.restriction.insert({L, R});
  return {psi, f, "express_M", {}};
}

}  // namespace holant
