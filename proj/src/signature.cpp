#include "holant/signature.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include <Eigen/Dense>

#include "holant/kernels.hpp"

namespace holant {

int& arity_cap() {
  static int cap = 12;
  return cap;
}

Signature::Signature(int arity, std::vector<Scalar> values) : arity_(arity), values_(std::move(values)) {
  if (arity < 0) throw ArityMismatch("negative arity");
  if (arity > arity_cap()) throw ArityTooLarge("arity " + std::to_string(arity) + " exceeds cap");
  if (values_.size() != (std::size_t(1) << arity))
    throw ArityMismatch("expected " + std::to_string(std::size_t(1) << arity) + " values, got " +
                        std::to_string(values_.size()));
}

Signature Signature::symmetric(const std::vector<Scalar>& entries) {
  if (entries.empty()) throw ArityMismatch("symmetric spec needs at least one entry");
  int k = static_cast<int>(entries.size()) - 1;
  if (k > arity_cap()) throw ArityTooLarge("arity exceeds cap");
  std::vector<Scalar> v(std::size_t(1) << k);
  for (std::size_t x = 0; x < v.size(); ++x) v[x] = entries[std::popcount(x)];
  return Signature(k, std::move(v));
}

const Scalar& Signature::at(const std::vector<int>& bits) const {
  if (static_cast<int>(bits.size()) != arity_) throw ArityMismatch("wrong number of arguments");
  std::size_t idx = 0;
  for (int b : bits) idx = (idx << 1) | (b & 1);
  return values_[idx];
}

bool Signature::is_exact() const {
  return std::all_of(values_.begin(), values_.end(), [](const Scalar& s) { return s.is_exact(); });
}

bool Signature::is_zero(double tol) const {
  return std::all_of(values_.begin(), values_.end(), [&](const Scalar& s) { return s.is_zero(tol); });
}

Signature Signature::to_approx() const {
  std::vector<Scalar> v;
  v.reserve(values_.size());
  for (auto& s : values_) v.push_back(s.to_approx());
  return Signature(arity_, std::move(v));
}

Signature Signature::scaled(const Scalar& s) const {
  std::vector<Scalar> v;
  v.reserve(values_.size());
  for (auto& x : values_) v.push_back(x * s);
  return Signature(arity_, std::move(v));
}

bool Signature::is_symmetric() const {
  std::vector<const Scalar*> seen(arity_ + 1, nullptr);
  for (std::size_t x = 0; x < values_.size(); ++x) {
    int w = std::popcount(x);
    if (!seen[w])
      seen[w] = &values_[x];
    else if (*seen[w] != values_[x])
      return false;
  }
  return true;
}

bool approx_eq(const Signature& a, const Signature& b, double tol) {
  if (a.arity() != b.arity()) return false;
  for (std::size_t x = 0; x < a.size(); ++x)
    if (!approx_eq(a[x], b[x], tol)) return false;
  return true;
}

double residual(const Signature& a, const Signature& b) {
  if (a.arity() != b.arity()) throw ArityMismatch("residual of signatures with different arity");
  double r = 0;
  for (std::size_t x = 0; x < a.size(); ++x) r = std::max(r, std::abs(a[x].to_complex() - b[x].to_complex()));
  return r;
}

Signature EQ(int k) { return make_named("EQ", k); }
Signature ONE(int k) { return make_named("ONE", k); }
Signature NEQ() { return make_named("NEQ", 2); }

Signature make_named(const std::string& name, int arity, const Scalar& lambda) {
  auto fixed = [&](int k) {
    if (arity >= 0 && arity != k) throw ArityMismatch(name + " has arity " + std::to_string(k));
    return k;
  };
  if (name == "EQ") {
    if (arity < 1) throw ArityMismatch("EQ needs arity >= 1");
    std::vector<Scalar> e(arity + 1, Scalar(0));
    e.front() = 1;
    e.back() = 1;
    return Signature::symmetric(e);
  }
  if (name == "ONE") {
    if (arity < 1) throw ArityMismatch("ONE needs arity >= 1");
    std::vector<Scalar> e(arity + 1, Scalar(0));
    e[1] = 1;
    return Signature::symmetric(e);
  }
  if (name == "NEQ") {
    fixed(2);
    return Signature::symmetric({0, 1, 0});
  }
  if (name == "NAND") {
    fixed(2);
    return Signature::symmetric({1, 1, 0});
  }
  if (name == "EVEN3") {
    fixed(3);
    return Signature::symmetric({1, 0, 1, 0});
  }
  if (name == "DELTA0") {
    fixed(1);
    return Signature::unary(1, 0);
  }
  if (name == "DELTA1") {
    fixed(1);
    return Signature::unary(0, 1);
  }
  if (name == "U") {
    fixed(1);
    return Signature::unary(1, lambda);
  }
  throw ArityMismatch("unknown named function " + name);
}

Signature tensor(const Signature& f, const Signature& g) {
  std::vector<Scalar> v;
  v.reserve(f.size() * g.size());
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j) v.push_back(f[i] * g[j]);
  return Signature(f.arity() + g.arity(), std::move(v));
}

Signature permute(const Signature& f, const std::vector<int>& pi) {
  const int k = f.arity();
  if (static_cast<int>(pi.size()) != k) throw InvalidPermutation("length does not match arity");
  std::vector<bool> seen(k, false);
  for (int p : pi) {
    if (p < 0 || p >= k || seen[p]) throw InvalidPermutation("not a bijection");
    seen[p] = true;
  }
  std::vector<Scalar> v(f.size());
  for (std::size_t x = 0; x < f.size(); ++x) {
    std::size_t y = 0;
    for (int j = 0; j < k; ++j) {
      std::size_t bit = (x >> (k - 1 - pi[j])) & 1;
      y |= bit << (k - 1 - j);
    }
    v[x] = f[y];
  }
  return Signature(k, std::move(v));
}

Signature contract(const Signature& f, int i, int j) {
  const int k = f.arity();
  if (k < 2 || i < 1 || j > k || i >= j) throw IndexOutOfRange("contract positions out of range");
  const int bi = k - i, bj = k - j;  // bit positions
  std::vector<Scalar> v(std::size_t(1) << (k - 2));
  for (std::size_t r = 0; r < v.size(); ++r) {
    // spread r over the k-2 remaining positions
    std::size_t base = 0;
    int src = 0;
    for (int b = 0; b < k; ++b) {
      if (b == bi || b == bj) continue;
      base |= ((r >> src) & 1) << b;
      ++src;
    }
    std::size_t one = (std::size_t(1) << bi) | (std::size_t(1) << bj);
    v[r] = f[base] + f[base | one];
  }
  return Signature(k - 2, std::move(v));
}

Signature contract_pair(const Signature& f, int i, const Signature& g, int j) {
  if (i < 1 || i > f.arity() || j < 1 || j > g.arity()) throw IndexOutOfRange("contract_pair positions");
  return contract(tensor(f, g), i, f.arity() + j);
}

Signature holo(const Mat2& m, const Signature& f) {
  const int k = f.arity();
  if (k == 0) return f;
  if (!(m.is_exact() && f.is_exact())) {
    std::vector<Complex> buf(f.size());
    for (std::size_t x = 0; x < f.size(); ++x) buf[x] = f[x].to_complex();
    const Complex mm[4] = {m.a.to_complex(), m.b.to_complex(), m.c.to_complex(), m.d.to_complex()};
    auto path = kernels::best_path();
    for (int leg = 0; leg < k; ++leg) kernels::apply_leg(buf.data(), k, leg, mm, path);
    std::vector<Scalar> v;
    v.reserve(buf.size());
    for (auto& z : buf) {
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw NumericOverflow("holo produced non-finite value");
      v.emplace_back(z);
    }
    return Signature(k, std::move(v));
  }
  std::vector<Scalar> cur = f.values();
  for (int leg = 0; leg < k; ++leg) {
    const std::size_t s = std::size_t(1) << (k - 1 - leg);
    for (std::size_t base = 0; base < cur.size(); base += 2 * s) {
      for (std::size_t j = 0; j < s; ++j) {
        Scalar lo = cur[base + j], hi = cur[base + j + s];
        cur[base + j] = m.a * lo + m.b * hi;
        cur[base + j + s] = m.c * lo + m.d * hi;
      }
    }
  }
  return Signature(k, std::move(cur));
}

Mat2 matrix_view(const Signature& f) {
  if (f.arity() != 2) throw ArityMismatch("matrix_view needs a binary signature");
  return {f[0], f[1], f[2], f[3]};
}

namespace {

// Flattening value: rows indexed by the args in S, columns by the rest.
struct Flattening {
  std::vector<int> rows_args, cols_args;
  int k;
  std::size_t index(std::size_t r, std::size_t c) const {
    std::size_t x = 0;
    for (std::size_t t = 0; t < rows_args.size(); ++t)
      x |= ((r >> (rows_args.size() - 1 - t)) & 1) << (k - 1 - rows_args[t]);
    for (std::size_t t = 0; t < cols_args.size(); ++t)
      x |= ((c >> (cols_args.size() - 1 - t)) & 1) << (k - 1 - cols_args[t]);
    return x;
  }
};

double approx_scale(const Signature& f) {
  double m = 0;
  for (auto& v : f.values()) m = std::max(m, v.abs());
  return m;
}

// If rank one, returns (u over rows, v over cols) with f = u (x) v.
bool rank_one_split(const Signature& f, const Flattening& fl, Signature& u, Signature& v) {
  const std::size_t R = std::size_t(1) << fl.rows_args.size();
  const std::size_t C = std::size_t(1) << fl.cols_args.size();
  if (f.is_exact()) {
    std::size_t pr = R, pc = C;
    for (std::size_t r = 0; r < R && pr == R; ++r)
      for (std::size_t c = 0; c < C; ++c)
        if (!f[fl.index(r, c)].is_exact_zero()) {
          pr = r;
          pc = c;
          break;
        }
    if (pr == R) return false;
    const Scalar& p = f[fl.index(pr, pc)];
    for (std::size_t r = 0; r < R; ++r)
      for (std::size_t c = 0; c < C; ++c)
        if (f[fl.index(r, c)] * p != f[fl.index(r, pc)] * f[fl.index(pr, c)]) return false;
    std::vector<Scalar> uv(R), vv(C);
    Scalar pinv = p.inverse();
    for (std::size_t r = 0; r < R; ++r) uv[r] = f[fl.index(r, pc)];
    for (std::size_t c = 0; c < C; ++c) vv[c] = f[fl.index(pr, c)] * pinv;
    u = Signature(static_cast<int>(fl.rows_args.size()), std::move(uv));
    v = Signature(static_cast<int>(fl.cols_args.size()), std::move(vv));
    return true;
  }
  Eigen::MatrixXcd A(R, C);
  std::size_t pr = 0, pc = 0;
  double best = -1;
  for (std::size_t r = 0; r < R; ++r)
    for (std::size_t c = 0; c < C; ++c) {
      Complex z = f[fl.index(r, c)].to_complex();
      A(r, c) = z;
      if (std::abs(z) > best) {
        best = std::abs(z);
        pr = r;
        pc = c;
      }
    }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
  auto sv = svd.singularValues();
  double s1 = sv(0), s2 = sv.size() > 1 ? sv(1) : 0.0;
  if (s2 > default_tolerance() * (s1 + 1)) return false;
  std::vector<Scalar> uv(R), vv(C);
  Complex p = A(pr, pc);
  for (std::size_t r = 0; r < R; ++r) uv[r] = Scalar(A(r, pc));
  for (std::size_t c = 0; c < C; ++c) vv[c] = Scalar(A(pr, c) / p);
  u = Signature(static_cast<int>(fl.rows_args.size()), std::move(uv));
  v = Signature(static_cast<int>(fl.cols_args.size()), std::move(vv));
  return true;
}

// Scales f so its first significant entry is 1; returns the factor removed.
Scalar normalize(Signature& f) {
  if (f.is_exact()) {
    for (std::size_t x = 0; x < f.size(); ++x)
      if (!f[x].is_exact_zero()) {
        Scalar s = f[x];
        f = f.scaled(s.inverse());
        return s;
      }
    return Scalar(0);
  }
  double m = approx_scale(f);
  for (std::size_t x = 0; x < f.size(); ++x)
    if (f[x].abs() >= 1e-3 * m && f[x].abs() > 0) {
      Scalar s = f[x];
      f = f.scaled(s.inverse());
      return s;
    }
  return Scalar(0);
}

void decompose_rec(const Signature& f, const std::vector<int>& pos, AtomDecomposition& out) {
  const int k = f.arity();
  if (k == 0) {
    out.scalar *= f[0];
    return;
  }
  if (k > 1) {
    for (int size = 1; size < k; ++size) {
      // subsets of size `size` containing local arg 0, lexicographic
      std::vector<int> rest(k - 1);
      for (int t = 0; t < k - 1; ++t) rest[t] = t + 1;
      std::vector<int> choose(size - 1);
      for (int t = 0; t < size - 1; ++t) choose[t] = t;
      for (;;) {
        Flattening fl;
        fl.k = k;
        fl.rows_args.push_back(0);
        std::vector<bool> in(k, false);
        in[0] = true;
        for (int t : choose) {
          fl.rows_args.push_back(rest[t]);
          in[rest[t]] = true;
        }
        for (int t = 0; t < k; ++t)
          if (!in[t]) fl.cols_args.push_back(t);
        Signature u, v;
        if (rank_one_split(f, fl, u, v)) {
          std::vector<int> upos, vpos;
          for (int t : fl.rows_args) upos.push_back(pos[t]);
          for (int t : fl.cols_args) vpos.push_back(pos[t]);
          out.scalar *= normalize(u);
          out.atoms.push_back(u);
          out.placement.push_back(upos);
          decompose_rec(v, vpos, out);
          return;
        }
        // next combination
        int t = size - 2;
        while (t >= 0 && choose[t] == (k - 1) - (size - 1) + t) --t;
        if (t < 0) break;
        ++choose[t];
        for (int q = t + 1; q < size - 1; ++q) choose[q] = choose[q - 1] + 1;
      }
    }
  }
  Signature a = f;
  out.scalar *= normalize(a);
  out.atoms.push_back(a);
  out.placement.push_back(pos);
}

}  // namespace

AtomDecomposition decompose_atoms(const Signature& f) {
  if (f.arity() > arity_cap()) throw ArityTooLarge("decompose_atoms beyond arity cap");
  AtomDecomposition out;
  out.scalar = f.is_exact() ? Scalar(1) : Scalar::approx(1);
  std::vector<int> pos(f.arity());
  for (int t = 0; t < f.arity(); ++t) pos[t] = t;
  bool zero = f.is_exact() ? f.is_zero() : approx_scale(f) <= default_tolerance();
  if (zero) {
    out.scalar = f.is_exact() ? Scalar(0) : Scalar::approx(0);
    for (int t = 0; t < f.arity(); ++t) {
      out.atoms.push_back(make_named("DELTA0", 1));
      out.placement.push_back({t});
    }
    return out;
  }
  decompose_rec(f, pos, out);
  return out;
}

Signature reassemble(const AtomDecomposition& d, int arity) {
  std::vector<Scalar> v(std::size_t(1) << arity);
  for (std::size_t x = 0; x < v.size(); ++x) {
    Scalar p = d.scalar;
    for (std::size_t a = 0; a < d.atoms.size(); ++a) {
      std::size_t sub = 0;
      for (int t : d.placement[a]) sub = (sub << 1) | ((x >> (arity - 1 - t)) & 1);
      p *= d.atoms[a][sub];
    }
    v[x] = p;
  }
  return Signature(arity, std::move(v));
}

bool family_test(const Signature& f, Family family) {
  switch (family) {
    case Family::E: {
      std::vector<std::size_t> nz;
      for (std::size_t x = 0; x < f.size(); ++x)
        if (!f[x].is_zero()) nz.push_back(x);
      if (nz.size() <= 1) return true;
      if (nz.size() > 2) return false;
      return (nz[0] ^ nz[1]) == f.size() - 1;
    }
    case Family::M:
      for (std::size_t x = 0; x < f.size(); ++x)
        if (std::popcount(x) > 1 && !f[x].is_zero()) return false;
      return true;
    case Family::T_atoms: {
      auto d = decompose_atoms(f);
      for (auto& a : d.atoms)
        if (a.arity() > 2) return false;
      return true;
    }
  }
  return false;
}

bool family_test(const Signature& f, Family family, const Mat2& pre_transform) {
  return family_test(holo(pre_transform.inverse(), f), family);
}

bool is_unitary(const Signature& f, double tol) {
  if (f.arity() % 2) return false;
  const int n = f.arity() / 2;
  const std::size_t N = std::size_t(1) << n;
  auto U = [&](std::size_t r, std::size_t c) -> const Scalar& { return f[(c << n) | r]; };
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = 0; b < N; ++b) {
      Scalar s(0);
      for (std::size_t r = 0; r < N; ++r) s += U(r, a).conj() * U(r, b);
      if (!approx_eq(s, Scalar(a == b ? 1 : 0), tol)) return false;
    }
  return true;
}

}  // namespace holant
