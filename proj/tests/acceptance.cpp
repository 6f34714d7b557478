// Acceptance checks 1-10. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <thread>

#include "holant/classify.hpp"
#include "holant/evaluation.hpp"
#include "holant/random_instances.hpp"
#include "holant/reductions.hpp"
#include "holant/suites.hpp"
#include "holant/synthesis.hpp"

using namespace holant;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Plain enumeration over edge assignments.
Scalar enumerate(const SignatureGrid& g) {
  const std::size_t E = g.edges.size();
  Scalar total(0);
  for (std::size_t x = 0; x < (std::size_t(1) << E); ++x) {
    std::map<Port, int> val;
    for (std::size_t e = 0; e < E; ++e) {
      val[g.edges[e].first] = (x >> e) & 1;
      val[g.edges[e].second] = (x >> e) & 1;
    }
    Scalar p(1);
    for (auto& [id, f] : g.vertices) {
      std::vector<int> bits;
      for (int s = 1; s <= f.arity(); ++s) bits.push_back(val.at({id, s}));
      p *= f.at(bits);
    }
    total += p;
  }
  return total;
}

// f factors across one argument versus the other two.
bool has_rank1_split(const Signature& f) {
  for (int j = 0; j < 3; ++j) {
    Scalar m[2][4];
    for (std::size_t x = 0; x < 8; ++x) {
      int r = (x >> (2 - j)) & 1;
      std::size_t c = 0;
      for (int t = 0; t < 3; ++t)
        if (t != j) c = (c << 1) | ((x >> (2 - t)) & 1);
      m[r][c] = f[x];
    }
    bool rank1 = true;
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b)
        if (!(m[0][a] * m[1][b] - m[0][b] * m[1][a]).is_exact_zero()) rank1 = false;
    if (rank1) return true;
  }
  return false;
}

// Discriminant of det(x A0 + y A1) for the slices A_i = f(i, ., .).
Scalar pencil_discriminant(const Signature& f) {
  auto A = [&](int i, int r, int c) { return f[(i << 2) | (r << 1) | c]; };
  Scalar a = A(0, 0, 0) * A(0, 1, 1) - A(0, 0, 1) * A(0, 1, 0);
  Scalar c = A(1, 0, 0) * A(1, 1, 1) - A(1, 0, 1) * A(1, 1, 0);
  Scalar b = A(0, 0, 0) * A(1, 1, 1) + A(1, 0, 0) * A(0, 1, 1) - A(0, 0, 1) * A(1, 1, 0) - A(1, 0, 1) * A(0, 1, 0);
  return b * b - Scalar(4) * a * c;
}

Scalar csp_sum(const CspInstance& csp) {
  const std::size_t n = csp.variables.size();
  Scalar total(0);
  for (std::size_t x = 0; x < (std::size_t(1) << n); ++x) {
    Scalar p(1);
    for (auto& [f, scope] : csp.constraints) {
      std::vector<int> bits;
      for (int v : scope) bits.push_back((x >> v) & 1);
      p *= f.at(bits);
    }
    total += p;
  }
  return total;
}

Scalar poly(const std::vector<long>& coeffs, const Scalar& x) {
  Scalar s(0), pw(1);
  for (long c : coeffs) {
    s += Scalar(c) * pw;
    pw *= x;
  }
  return s;
}

// Counts failures of `body` over n cases; exceptions count as failures.
int count_failures(int n, const std::function<bool(int)>& body) {
  int bad = 0;
  for (int k = 0; k < n; ++k) {
    try {
      if (!body(k)) ++bad;
    } catch (const std::exception& e) {
      std::fprintf(stderr, "  case %d threw: %s\n", k, e.what());
      ++bad;
    }
  }
  return bad;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

Outcome c1_identities() {
  auto t0 = Clock::now();
  SuiteReport r = suite_verify_identities(0, 50);
  double t = since(t0);
  double worst = 0;
  bool ok = !r.parts.empty();
  for (auto& p : r.parts) {
    worst = std::max(worst, p.max_residual);
    ok = ok && p.passed() && p.cases == 50 && p.max_residual < 1e-6;
  }
  return {ok && t < 30, fmt("%.0f identities, max residual %.2e, %.2f s (< 30 s)", r.parts.size(), worst, t)};
}

Outcome c2_holographic_example() {
  Scalar i(CycScalar::imag());
  Signature h = holo(Mat2{1, i, 1, -i}, EQ(2));
  return {h == NEQ().scaled(2), "holo((1 i; 1 -i), EQ2) == 2 NEQ"};
}

Outcome c3_oracle() {
  auto t0 = Clock::now();
  SuiteReport r = suite_oracle_equivalence(0, 200);
  double t = since(t0);
  const SuiteCase& p = r.parts.at(0);
  return {r.passed() && p.cases == 200 && t < 60, fmt("%.0f grids, %.0f mismatches, %.2f s (< 60 s)", p.cases, p.failures, t)};
}

Scalar run_family(GridFamily fam, const SignatureGrid& g) {
  switch (fam) {
    case GridFamily::T: return holant_T(g);
    case GridFamily::E_none: return holant_E(g, EStrip::None);
    case GridFamily::E_orthogonal: return holant_E(g, EStrip::Orthogonal, family_orthogonal());
    case GridFamily::E_K1: return holant_E(g, EStrip::K1);
    case GridFamily::KM_K1: return holant_KM(g, Mat2::K1());
    case GridFamily::KM_K2: return holant_KM(g, Mat2::K2());
  }
  return Scalar(0);
}

Outcome c4_families() {
  Rng rng(4);
  int bad = 0, total = 0;
  for (auto fam : {GridFamily::T, GridFamily::E_none, GridFamily::E_orthogonal, GridFamily::E_K1, GridFamily::KM_K1,
                   GridFamily::KM_K2}) {
    bad += count_failures(100, [&](int) {
      SignatureGrid g = random_family_grid(rng, fam, 12);
      Scalar z = run_family(fam, g);
      return z == holant_brute(g) && z == enumerate(g);
    });
    total += 100;
  }
  std::string detail = fmt("%.0f/%.0f small grids exact", total - bad, total);
  bool ok = bad == 0;
  double worst = 0;
  for (auto fam : {GridFamily::E_none, GridFamily::KM_K1}) {
    SignatureGrid g = large_family_grid(rng, fam, 10000);
    auto t0 = Clock::now();
    Scalar z;
    try {
      z = run_family(fam, g);
    } catch (const std::exception& e) {
      std::fprintf(stderr, "  large %s threw: %s\n", family_name(fam), e.what());
      ok = false;
      continue;
    }
    double t = since(t0);
    worst = std::max(worst, t);
    bool same = z == holant_contract(g);
    ok = ok && t < 1.0 && same;
    detail += std::string("; 10000-vertex ") + family_name(fam) + fmt(" %.3f s", t) +
              (same ? " (matches contraction)" : " (MISMATCH)");
  }
  detail += fmt(", slowest %.3f s (< 1 s)", worst);
  return {ok, detail};
}

Outcome c5_entanglement() {
  int bad = 0;
  for (int mask = 0; mask < 256; ++mask) {
    std::vector<Scalar> v(8);
    for (int x = 0; x < 8; ++x) v[x] = (mask >> x) & 1;
    Signature f(3, v);
    TernaryTag want = has_rank1_split(f)                          ? TernaryTag::Degenerate
                      : pencil_discriminant(f).is_exact_zero() ? TernaryTag::W
                                                                  : TernaryTag::GHZ;
    if (classify_ternary(f).tag != want) ++bad;
  }
  Rng rng(5);
  int ghz = 0, w = 0;
  for (int k = 0; k < 100; ++k) {
    Mat2 m = random_invertible(rng).to_approx();
    if (classify_ternary(holo(m, EQ(3).to_approx())).tag == TernaryTag::GHZ) ++ghz;
    if (classify_ternary(holo(m, ONE(3).to_approx())).tag == TernaryTag::W) ++w;
  }
  return {bad == 0 && ghz == 100 && w == 100,
          fmt("256 tables, %.0f disagreements; float GHZ %.0f/100, W %.0f/100", bad, ghz, w)};
}

// Not in T, no O strips it into E (W-class), no K strips it into E or M.
bool universal_by_membership(const Signature& f) {
  bool w_class = !has_rank1_split(f) && pencil_discriminant(f).is_exact_zero();
  bool km = false, ke = false;
  for (const Mat2& k : {Mat2::K1(), Mat2::K2()}) {
    Signature s = holo(k.inverse(), f);
    km = km || family_test(s, Family::M);
    ke = ke || family_test(s, Family::E);
  }
  return w_class && !km && !ke;
}

Outcome c6_dichotomy() {
  std::vector<std::string> failed;
  auto expect = [&](bool ok, const char* name) {
    if (!ok) failed.push_back(name);
  };
  auto eq2 = classify_set({EQ(2)});
  expect(eq2.cond_T && eq2.verdict == Verdict::NotUniversal, "{EQ2}");
  auto eq3 = classify_set({EQ(3)});
  expect(eq3.cond_OE == OEStatus::Holds && eq3.oe_witness && *eq3.oe_witness == Mat2::identity(), "{EQ3}");
  expect(classify_set({holo(Mat2::K1(), EQ(3))}).cond_KE, "{K1 EQ3}");
  auto km = classify_set({holo(Mat2::K1(), ONE(3))});
  expect(km.cond_KM == std::vector<std::string>{"K1"}, "{K1 ONE3}");
  expect(classify_set({EQ(3), ONE(3)}).verdict == Verdict::Universal, "{EQ3, ONE3}");
  Signature md = Signature::symmetric({1, 1, 0, 0});
  expect(universal_by_membership(ONE(3)) && classify_set({ONE(3)}).verdict == Verdict::Universal, "{ONE3}");
  expect(universal_by_membership(md) && classify_set({md}).verdict == Verdict::Universal, "{[1,1,0,0]}");
  std::string detail = "7 fixtures";
  for (auto& f : failed) detail += ", failed " + f;
  return {failed.empty(), detail};
}

Outcome c7_independent_sets() {
  const std::vector<Scalar> lambdas{Scalar(-2), Scalar::rational(-1, 2), Scalar(1), Scalar(3)};
  auto t0 = Clock::now();
  std::vector<SimpleGraph> graphs;
  for (int n = 1; n <= 6; ++n)
    for (SimpleGraph& G : all_graphs(n)) graphs.push_back(std::move(G));
  Rng rng(7);
  std::uniform_int_distribution<int> nn(1, 10);
  for (int k = 0; k < 100; ++k) {
    int n = nn(rng);
    graphs.push_back(random_graph(rng, n, 3));
  }
  std::atomic<int> bad{0};
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < graphs.size();) {
      const SimpleGraph& G = graphs[k];
      try {
        auto counts = independent_set_counts(G);
        for (const Scalar& l : lambdas) {
          Scalar z = holant_contract(independent_set_grid(G, l));
          if (z != independent_set_poly_brute(G, l) || z != poly(counts, l)) ++bad;
        }
      } catch (const std::exception&) {
        ++bad;
      }
    }
  };
  std::vector<std::thread> pool;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return {bad == 0, fmt("%.0f graphs x 4 lambdas, %.0f mismatches, %.2f s", graphs.size(), bad.load(), since(t0))};
}

// Two EQ3 vertices joined by one edge realize EQ4.
SignatureGrid eq4_gadget() {
  SignatureGrid g;
  g.add_vertex(EQ(3));
  g.add_vertex(EQ(3));
  g.connect(0, 3, 1, 1);
  g.dangling = {{0, 1}, {0, 2}, {1, 2}, {1, 3}};
  return g;
}

// EQ3 (left) - EQ2 (right) - EQ3 (left) with all dangling legs on the left.
SignatureGrid eq4_bipartite_gadget() {
  SignatureGrid g;
  g.add_vertex(EQ(3), Side::Left);
  g.add_vertex(EQ(2), Side::Right);
  g.add_vertex(EQ(3), Side::Left);
  g.connect(0, 3, 1, 1);
  g.connect(1, 2, 2, 1);
  g.dangling = {{0, 1}, {0, 2}, {2, 2}, {2, 3}};
  return g;
}

Outcome c8_z_preservation() {
  Rng rng(8);
  std::map<std::string, int> bad;
  const int N = 50;
  bad["valiant_transform"] = count_failures(N, [&](int) {
    SignatureGrid g = random_bipartite_grid(rng);
    Mat2 m = random_invertible(rng);
    return holant_brute(valiant_transform(g, m)) == holant_brute(g);
  });
  bad["subdivide"] = count_failures(N, [&](int) {
    SignatureGrid g = random_closed_grid(rng, 6, 8);
    return holant_contract(rewrite_subdivide(g)) == holant_brute(g);
  });
  bad["unsubdivide"] = count_failures(N, [&](int) {
    SignatureGrid g = random_closed_grid(rng, 6, 8);
    SignatureGrid s = rewrite_subdivide(g);
    return holant_brute(rewrite_unsubdivide(s)) == holant_contract(s);
  });
  bad["bipartify"] = count_failures(N, [&](int) {
    SignatureGrid g = random_closed_grid(rng, 6, 8);
    std::map<int, Side> part;
    for (auto& [id, f] : g.vertices) part[id] = std::uniform_int_distribution<int>(0, 1)(rng) ? Side::Left : Side::Right;
    return holant_contract(rewrite_bipartify(g, part)) == holant_brute(g);
  });
  bad["forget"] = count_failures(N, [&](int) {
    SignatureGrid g = random_bipartite_grid(rng);
    SignatureGrid f = rewrite_forget(g);
    return !f.bipartition && holant_brute(f) == holant_brute(g);
  });
  GadgetMap plain{{EQ(4), eq4_gadget()}};
  bad["substitute"] = count_failures(N, [&](int) {
    std::vector<Signature> fs{EQ(4), EQ(4), random_signature(rng, 2), random_signature(rng, 2)};
    SignatureGrid g = wire_randomly(rng, fs);
    return holant_brute(rewrite_substitute(g, plain)) == holant_brute(g);
  });
  GadgetMap bip{{EQ(4), eq4_bipartite_gadget()}};
  bad["substitute_bipartite"] = count_failures(N, [&](int) {
    SignatureGrid g;
    g.add_vertex(EQ(4), Side::Left);
    g.add_vertex(random_signature(rng, 2), Side::Right);
    g.add_vertex(random_signature(rng, 2), Side::Right);
    g.connect(0, 1, 1, 1);
    g.connect(0, 2, 2, 1);
    g.connect(0, 3, 1, 2);
    g.connect(0, 4, 2, 2);
    return holant_brute(rewrite_substitute_bipartite(g, bip)) == holant_brute(g);
  });
  bad["strip_K"] = count_failures(N, [&](int k) {
    Mat2 K = k % 2 ? Mat2::K1() : Mat2::K2();
    SignatureGrid g = random_closed_grid(rng, 5, 6);
    for (auto& [id, f] : g.vertices) f = holo(K, f);
    return holant_contract(strip_K(g, K)) == holant_brute(g);
  });
  bad["csp_to_grid"] = count_failures(N, [&](int) {
    CspInstance c = random_csp(rng, 6, 5);
    return holant_contract(csp_to_grid(c)) == csp_sum(c);
  });
  int total = 0;
  std::string detail = "50 instances each";
  for (auto& [name, b] : bad) {
    total += b;
    if (b) detail += ", " + name + " failed " + std::to_string(b);
  }
  return {total == 0, detail + fmt(" (%.0f operations)", bad.size())};
}

Signature random_nondegenerate_binary(Rng& rng) {
  for (;;) {
    Mat2 m = random_invertible(rng);
    if (!m.det().is_zero()) return Signature::binary(m);
  }
}

double rel_residual(const Signature& got, const Signature& want) {
  double scale = 1;
  for (std::size_t x = 0; x < want.size(); ++x) scale = std::max(scale, want[x].abs());
  return residual(got, want) / scale;
}

Outcome c9_synthesis() {
  Rng rng(9);
  int bad_e = count_failures(100, [&](int k) {
    Mat2 m = k % 3 == 0 ? Mat2::identity() : k % 3 == 1 ? Mat2::K1() : family_orthogonal();
    Signature h = holo(m, random_E_member(rng, 1 + k % 6));
    return evaluate_recipe(express_E(h, m)) == h;
  });
  int bad_m = count_failures(100, [&](int k) {
    Signature f = random_M_member(rng, 1 + k % 6);
    return evaluate_recipe(express_M(f)) == f;
  });
  double worst = 0;
  int bad_ghz = count_failures(50, [&](int) {
    Scalar a = random_gaussian(rng);
    Scalar b = random_gaussian(rng);
    Signature target = random_nondegenerate_binary(rng);
    auto r = binary_from_ghz(ghz_generator(a, b), target);
    double res = std::max(recipe_residual(r), rel_residual(evaluate_recipe(r), target));
    worst = std::max(worst, res);
    return res < 1e-6;
  });
  int redraws = 0;
  int bad_tp = count_failures(50, [&](int) {
    Signature target = random_nondegenerate_binary(rng);
    for (;;) {
      Scalar a = random_rational(rng, false);
      Scalar b = random_rational(rng);
      Scalar c = random_rational(rng);
      if ((b.is_exact_zero() && c.is_exact_zero()) || (b * c - Scalar(1)).is_exact_zero()) continue;
      Signature f(3, {1, 0, 0, 0, 0, 0, 0, a});
      Signature g = Signature::symmetric({b, 1, c});
      try {
        auto r = binary_from_tractable_pair(f, g, target);
        double res = std::max(recipe_residual(r), rel_residual(evaluate_recipe(r), target));
        worst = std::max(worst, res);
        return res < 1e-6;
      } catch (const ParameterDegenerate&) {
        ++redraws;
      }
    }
  });
  // s1, s2 must lie outside the K o M clones; EQ2 never does, so draw random binaries
  int aux_redraws = 0;
  int bad_w = count_failures(50, [&](int) {
    Signature w = holo(random_invertible(rng), ONE(3));
    for (;;) {
      Signature s1 = random_signature(rng, 2);
      Signature s2 = random_signature(rng, 2);
      try {
        auto r = ghz_from_w(w, s1, s2);
        return recipe_residual(r) < 1e-6 && classify_ternary(evaluate_recipe(r)).tag == TernaryTag::GHZ;
      } catch (const PreconditionViolated&) {
        ++aux_redraws;
      }
    }
  });
  std::string detail = fmt("express_E %.0f/100, express_M %.0f/100", 100 - bad_e, 100 - bad_m) +
                       fmt(", binary_from_ghz %.0f/50, tractable pair %.0f/50", 50 - bad_ghz, 50 - bad_tp) +
                       fmt(" (max residual %.2e, %.0f parameter redraws)", worst, redraws) +
                       fmt(", ghz_from_w %.0f/50 (%.0f auxiliary redraws)", 50 - bad_w, aux_redraws);
  return {bad_e + bad_m + bad_ghz + bad_tp + bad_w == 0, detail};
}

Outcome c10_closure() {
  SuiteReport r = suite_closure_laws(10, 100);
  bool ok = r.passed();
  std::string detail;
  for (auto& p : r.parts) {
    ok = ok && p.cases >= 100;
    detail += (detail.empty() ? "" : ", ") + p.name + fmt(" %.0f/%.0f", p.cases - p.failures, p.cases);
  }
  return {ok, detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"identity suite", c1_identities},
      {"holographic example", c2_holographic_example},
      {"oracle equivalence", c3_oracle},
      {"family evaluators", c4_families},
      {"entanglement classification", c5_entanglement},
      {"dichotomy fixtures", c6_dichotomy},
      {"independent-set reduction", c7_independent_sets},
      {"Z-preservation", c8_z_preservation},
      {"synthesizer round trips", c9_synthesis},
      {"closure laws", c10_closure},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("criterion %zu %s: %s (%s)\n", k + 1, criteria[k].first, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
