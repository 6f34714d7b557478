#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "holant/evaluation.hpp"
#include "holant/io.hpp"
#include "holant/random_instances.hpp"

using namespace holant;

namespace {

bool has_issue(const ValidationReport& r, const std::string& text) {
  for (auto& i : r.issues)
    if (i.message.find(text) != std::string::npos) return true;
  return false;
}

std::string temp_path(const char* name) { return std::string("/tmp/holant_test_") + name; }

}  // namespace

TEST_CASE("validation") {
  SignatureGrid ok;
  ok.add_vertex(EQ(1));
  ok.add_vertex(EQ(1));
  ok.connect(0, 1, 1, 1);
  CHECK(validate(ok).ok);

  SignatureGrid unbound;
  unbound.add_vertex(EQ(2));
  unbound.add_vertex(EQ(1));
  unbound.connect(0, 1, 1, 1);
  auto r = validate(unbound);
  CHECK_FALSE(r.ok);
  CHECK(has_issue(r, "port 2 unbound"));
  CHECK_THROWS_AS(require_valid(unbound), ValidationError);

  SignatureGrid bip;
  bip.add_vertex(EQ(1), Side::Left);
  bip.add_vertex(EQ(1), Side::Left);
  bip.connect(0, 1, 1, 1);
  CHECK(has_issue(validate(bip), "edge violates bipartition"));

  SignatureGrid twice;
  twice.add_vertex(EQ(2));
  twice.connect(0, 1, 0, 1);
  twice.dangling.push_back({0, 2});
  CHECK(has_issue(validate(twice), "bound 2 times"));
}

TEST_CASE("self-loops contract the vertex signature") {
  SignatureGrid g;
  g.add_vertex(EQ(3));
  g.connect(0, 2, 0, 3);
  g.dangling.push_back({0, 1});
  CHECK(validate(g).ok);
  CHECK(realize_gadget(g) == contract(EQ(3), 2, 3));
}

TEST_CASE("json round trip") {
  Rng rng(1);
  for (int k = 0; k < 20; ++k) {
    SignatureGrid g = k % 2 ? random_bipartite_grid(rng) : random_closed_grid(rng);
    std::string p = temp_path("roundtrip.json");
    save_grid(g, p);
    SignatureGrid h = load_grid(p);
    CHECK(validate(h).ok);
    CHECK(h.vertices == g.vertices);
    CHECK(h.edges == g.edges);
    CHECK(h.bipartition == g.bipartition);
    std::remove(p.c_str());
  }
}

TEST_CASE("loading files") {
  std::string p = temp_path("two.json");
  {
    std::ofstream(p) << R"({"vertices":[{"id":0,"fn":{"named":"EQ","arity":1}},{"id":1,"fn":{"values":["1","1"]}}],
                            "edges":[[[0,1],[1,1]]]})";
  }
  CHECK(load_grid(p).edges.size() == 1);
  {
    std::ofstream(p) << R"({"vertices":[{"id":7,"fn":{"named":"EQ","arity":3}}],"dangling":[[7,1],[7,2],[7,3]]})";
  }
  CHECK(realize_gadget(load_grid(p)).arity() == 3);
  {
    std::ofstream(p) << R"({"vertices":[{"id":4,"fn":{"values":["1/","2"]}}],"dangling":[[4,1]]})";
  }
  try {
    load_grid(p);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("vertex 4") != std::string::npos);
  }
  std::remove(p.c_str());
}

TEST_CASE("disjoint union") {
  SignatureGrid a;
  a.add_vertex(EQ(2));
  a.dangling = {{0, 1}, {0, 2}};
  SignatureGrid b;
  b.add_vertex(EQ(1));
  b.dangling = {{0, 1}};
  SignatureGrid u = disjoint_union(a, b);
  CHECK(u.dangling.size() == 3);
  CHECK(realize_gadget(u) == tensor(EQ(2), EQ(1)));
  CHECK(disjoint_union(SignatureGrid{}, a).vertices.size() == 1);

  Rng rng(2);
  for (int k = 0; k < 20; ++k) {
    SignatureGrid g1 = random_closed_grid(rng, 4, 5), g2 = random_closed_grid(rng, 4, 5);
    CHECK(holant_brute(disjoint_union(g1, g2)) == holant_brute(g1) * holant_brute(g2));
  }
}
