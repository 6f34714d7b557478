#include "holant/io.hpp"

#include <fstream>
#include <sstream>

namespace holant {

Scalar scalar_from_json(const json& j) {
  if (j.is_string()) return parse_scalar(j.get<std::string>());
  if (j.is_number_integer()) return Scalar(Rational(mpz_class(j.dump())));
  if (j.is_number_float()) return Scalar::approx(j.get<double>());
  if (j.is_object() && j.contains("zeta8")) {
    const auto& c = j.at("zeta8");
    if (!c.is_array() || c.size() != 4) throw ParseError("zeta8 needs four coefficients", 0);
    std::array<Rational, 4> r;
    for (int t = 0; t < 4; ++t) {
      Scalar s = scalar_from_json(c[t]);
      if (!s.is_exact() || !s.exact().is_rational()) throw ParseError("zeta8 coefficient must be rational", 0);
      r[t] = s.exact().c[0];
    }
    return Scalar(CycScalar(r[0], r[1], r[2], r[3]));
  }
  if (j.is_object() && j.contains("re")) {
    double im = j.contains("im") ? j.at("im").get<double>() : 0.0;
    return Scalar::approx(j.at("re").get<double>(), im);
  }
  throw ParseError("unrecognised scalar literal " + j.dump(), 0);
}

json scalar_to_json(const Scalar& s) {
  if (s.is_exact()) return s.exact().to_string();
  Complex z = s.to_complex();
  return json{{"re", z.real()}, {"im", z.imag()}};
}

Signature signature_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("function literal must be an object", 0);
  auto list = [](const json& arr) {
    std::vector<Scalar> v;
    for (auto& x : arr) v.push_back(scalar_from_json(x));
    return v;
  };
  if (j.contains("values")) {
    auto v = list(j.at("values"));
    int k = 0;
    while ((std::size_t(1) << k) < v.size()) ++k;
    if (j.contains("arity")) k = j.at("arity").get<int>();
    return Signature(k, std::move(v));
  }
  if (j.contains("symmetric")) return Signature::symmetric(list(j.at("symmetric")));
  if (j.contains("unary")) {
    auto v = list(j.at("unary"));
    if (v.size() != 2) throw ArityMismatch("unary literal needs two values");
    return Signature::unary(v[0], v[1]);
  }
  if (j.contains("named")) {
    int k = j.contains("arity") ? j.at("arity").get<int>() : -1;
    Scalar lambda = j.contains("lambda") ? scalar_from_json(j.at("lambda")) : Scalar(0);
    return make_named(j.at("named").get<std::string>(), k, lambda);
  }
  throw ParseError("unrecognised function literal", 0);
}

json signature_to_json(const Signature& f) {
  json vals = json::array();
  for (auto& s : f.values()) vals.push_back(scalar_to_json(s));
  return json{{"arity", f.arity()}, {"values", vals}};
}

Mat2 matrix_from_json(const json& j) {
  if (j.is_string()) {
    std::string n = j.get<std::string>();
    if (n == "I") return Mat2::identity();
    if (n == "X") return Mat2::X();
    if (n == "K1") return Mat2::K1();
    if (n == "K2") return Mat2::K2();
    throw ParseError("unknown matrix name " + n, 0);
  }
  if (!j.is_array() || j.size() != 2 || j[0].size() != 2 || j[1].size() != 2)
    throw ParseError("matrix must be [[a,b],[c,d]]", 0);
  return {scalar_from_json(j[0][0]), scalar_from_json(j[0][1]), scalar_from_json(j[1][0]),
          scalar_from_json(j[1][1])};
}

json matrix_to_json(const Mat2& m) {
  return json::array({json::array({scalar_to_json(m.a), scalar_to_json(m.b)}),
                      json::array({scalar_to_json(m.c), scalar_to_json(m.d)})});
}

static Port port_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw ParseError("port must be [id, slot]", 0);
  return {j[0].get<int>(), j[1].get<int>()};
}

static json port_to_json(const Port& p) { return json::array({p.vertex, p.slot}); }

SignatureGrid grid_from_json(const json& j) {
  SignatureGrid g;
  for (auto& v : j.at("vertices")) {
    int id = v.at("id").get<int>();
    try {
      if (!g.vertices.emplace(id, signature_from_json(v.at("fn"))).second)
        throw ValidationError("duplicate vertex id " + std::to_string(id));
    } catch (const ParseError& e) {
      throw ParseError(std::string("vertex ") + std::to_string(id) + ": " + e.what(), e.position());
    }
  }
  if (j.contains("edges"))
    for (auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw ParseError("edge must be a pair of ports", 0);
      g.edges.push_back({port_from_json(e[0]), port_from_json(e[1])});
    }
  if (j.contains("dangling"))
    for (auto& d : j.at("dangling")) g.dangling.push_back(port_from_json(d));
  if (j.contains("bipartition") && !j.at("bipartition").is_null()) {
    g.bipartition.emplace();
    for (auto& [k, v] : j.at("bipartition").items()) {
      std::string s = v.get<std::string>();
      if (s != "L" && s != "R") throw ParseError("bipartition side must be L or R", 0);
      (*g.bipartition)[std::stoi(k)] = s == "L" ? Side::Left : Side::Right;
    }
  }
  return g;
}

json grid_to_json(const SignatureGrid& g) {
  json out;
  out["vertices"] = json::array();
  for (auto& [id, f] : g.vertices) out["vertices"].push_back({{"id", id}, {"fn", signature_to_json(f)}});
  out["edges"] = json::array();
  for (auto& [a, b] : g.edges) out["edges"].push_back(json::array({port_to_json(a), port_to_json(b)}));
  out["dangling"] = json::array();
  for (auto& p : g.dangling) out["dangling"].push_back(port_to_json(p));
  if (g.bipartition) {
    json b = json::object();
    for (auto& [id, s] : *g.bipartition) b[std::to_string(id)] = s == Side::Left ? "L" : "R";
    out["bipartition"] = b;
  }
  return out;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what(), e.byte);
  }
}

SignatureGrid load_grid(const std::string& path) {
  SignatureGrid g = grid_from_json(read_json_file(path));
  require_valid(g);
  return g;
}

void save_grid(const SignatureGrid& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path);
  out << grid_to_json(g).dump(2) << "\n";
}

// Labels: {"args": [[ "L", "R", ...] per atom], "N": [["L","R"], ...]}
PpsHFormula formula_from_json(const json& j) {
  PpsHFormula psi;
  for (auto& n : j.at("free")) psi.free_vars.push_back(psi.var(n.get<std::string>()));
  if (j.contains("bound"))
    for (auto& n : j.at("bound")) psi.bound_vars.push_back(psi.var(n.get<std::string>()));
  auto label = [](const json& x) {
    std::string s = x.get<std::string>();
    if (s == "L") return Label::L;
    if (s == "R") return Label::R;
    throw ParseError("label must be L or R", 0);
  };
  const json* args = nullptr;
  if (j.contains("labels") && !j.at("labels").is_null()) {
    psi.labelled = true;
    args = &j.at("labels").at("args");
    for (auto& pr : j.at("labels").at("N")) {
      Label a = label(pr.at(0)), b = label(pr.at(1));
      if (b < a) std::swap(a, b);
      psi.restriction.insert({a, b});
    }
  }
  std::size_t idx = 0;
  for (auto& at : j.at("atoms")) {
    std::vector<int> scope;
    for (auto& n : at.at("scope")) scope.push_back(psi.var(n.get<std::string>()));
    std::vector<Label> labels;
    if (args) {
      for (auto& l : args->at(idx)) labels.push_back(label(l));
    }
    psi.add_atom(signature_from_json(at.at("fn")), std::move(scope), std::move(labels));
    ++idx;
  }
  return psi;
}

json formula_to_json(const PpsHFormula& psi) {
  json out;
  out["free"] = json::array();
  for (int v : psi.free_vars) out["free"].push_back(psi.names[v]);
  out["bound"] = json::array();
  for (int v : psi.bound_vars) out["bound"].push_back(psi.names[v]);
  out["atoms"] = json::array();
  for (auto& a : psi.atoms) {
    json sc = json::array();
    for (int v : a.scope) sc.push_back(psi.names[v]);
    out["atoms"].push_back({{"fn", signature_to_json(a.fn)}, {"scope", sc}});
  }
  if (psi.labelled) {
    json args = json::array(), N = json::array();
    for (auto& a : psi.atoms) {
      json l = json::array();
      for (auto x : a.labels) l.push_back(x == Label::L ? "L" : "R");
      args.push_back(l);
    }
    for (auto& [a, b] : psi.restriction) N.push_back(json::array({a == Label::L ? "L" : "R", b == Label::L ? "L" : "R"}));
    out["labels"] = {{"args", args}, {"N", N}};
  }
  return out;
}

}  // namespace holant
