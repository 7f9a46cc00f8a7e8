#pragma once

#include <fstream>
#include <json.hpp>
#include <string>

#include "threept/bounds.hpp"
#include "threept/codes.hpp"

namespace threept {

/// Ordered JSON keeps key order stable, so identical objects serialize to
/// identical bytes.
using Json = nlohmann::ordered_json;

// ---- scalars ---------------------------------------------------------------

inline Json json_of(const Rational& x) { return to_string(x); }
inline Rational rational_of(const Json& j) { return parse_rational(j.get<std::string>()); }

inline Json json_of(const Quad& x) {
  return Json{{"a", json_of(x.a())}, {"b", json_of(x.b())}, {"q", json_of(x.q())}};
}
inline Quad quad_of(const Json& j) {
  return Quad(rational_of(j.at("a")), rational_of(j.at("b")), rational_of(j.at("q")));
}

inline Json json_of(Space s) { return s == Space::projective ? "projective" : "sphere"; }
inline Space space_of(const Json& j) {
  std::string s = j.get<std::string>();
  if (s == "projective") return Space::projective;
  if (s == "sphere") return Space::sphere;
  throw std::invalid_argument("space_of: unknown space " + s);
}

// ---- polynomials -----------------------------------------------------------

inline Json json_of(const PolyQ& p) {
  Json a = Json::array();
  for (const Rational& c : p.coeffs()) a.push_back(json_of(c));
  return a;
}
inline PolyQ poly_of(const Json& j) {
  std::vector<Rational> c;
  for (const auto& x : j) c.push_back(rational_of(x));
  return PolyQ(std::move(c));
}

inline Json json_of(const TriPoly& p) {
  Json a = Json::array();
  for (const auto& [e, c] : p.terms()) a.push_back(Json{e[0], e[1], e[2], json_of(c)});
  return a;
}
inline TriPoly tripoly_of(const Json& j) {
  TriPoly p;
  for (const auto& t : j)
    p.add_term({t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<int>()},
               rational_of(t.at(3)));
  return p;
}

// ---- matrices --------------------------------------------------------------

inline Json json_of(const MatrixXq& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(json_of(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}
inline MatrixXq matrix_of(const Json& j) {
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols = rows == 0 ? 0 : static_cast<Eigen::Index>(j.at(0).size());
  MatrixXq m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index k = 0; k < cols; ++k)
      m(i, k) = rational_of(j.at(static_cast<size_t>(i)).at(static_cast<size_t>(k)));
  return m;
}

inline Json json_of(const KernelMatrix& k) {
  Json entries = Json::array();
  for (const TriPoly& e : k.entries) entries.push_back(json_of(e));
  Json idx = Json::array();
  for (int i : k.indices) idx.push_back(i);
  return Json{{"n", k.n},         {"k", k.k},
              {"d", k.d},         {"parity", json_of(k.parity)},
              {"indices", idx},   {"entries", std::move(entries)}};
}
inline KernelMatrix kernel_of(const Json& j) {
  KernelMatrix k;
  k.n = j.at("n").get<int>();
  k.k = j.at("k").get<int>();
  k.d = j.at("d").get<int>();
  k.parity = space_of(j.at("parity"));
  for (const auto& i : j.at("indices")) k.indices.push_back(i.get<int>());
  for (const auto& e : j.at("entries")) k.entries.push_back(tripoly_of(e));
  return k;
}

// ---- linear expressions ----------------------------------------------------

inline Json json_of(const LinExpr& e) {
  Json coeffs = Json::array();
  for (const auto& [k, v] : e.coeffs) coeffs.push_back(Json{k, json_of(v)});
  return Json{{"coeffs", std::move(coeffs)}, {"constant", json_of(e.constant)}};
}
inline LinExpr linexpr_of(const Json& j) {
  LinExpr e;
  e.constant = rational_of(j.at("constant"));
  for (const auto& t : j.at("coeffs")) e.add(t.at(0).get<int>(), rational_of(t.at(1)));
  return e;
}

// ---- dual program and certificate ------------------------------------------

inline Json json_of(const DualProgram& p) {
  Json blocks = Json::array();
  for (const auto& [k, d] : p.blocks) blocks.push_back(Json{k, d});
  Json that = Json::array();
  for (const auto& k : p.That) that.push_back(json_of(k));
  Json constraints = Json::array();
  for (const auto& e : p.constraints) constraints.push_back(json_of(e));
  Json triples = Json::array();
  for (const auto& x : p.target_triples)
    triples.push_back(Json{json_of(x[0]), json_of(x[1]), json_of(x[2])});
  Json counts = Json::array();
  for (const auto& c : p.target_counts) counts.push_back(json_of(c));
  Json slack = Json::array();
  for (const auto& m : p.slack_matrices) slack.push_back(json_of(m));
  return Json{{"N", p.N},
              {"n", p.n},
              {"space", json_of(p.space)},
              {"f0", json_of(p.f0)},
              {"blocks", std::move(blocks)},
              {"sos_degree", p.sos_degree},
              {"q", json_of(p.q)},
              {"That", std::move(that)},
              {"constraints", std::move(constraints)},
              {"coefficient_equations", p.coefficient_equations},
              {"objective", json_of(p.objective)},
              {"target_triples", std::move(triples)},
              {"target_counts", std::move(counts)},
              {"slack_matrices", std::move(slack)}};
}

inline Json json_of(const Certificate& c) {
  Json f = Json::array();
  for (const auto& m : c.F) f.push_back(json_of(m));
  Json monos = Json::array();
  for (const auto& e : c.monomial_order) monos.push_back(Json{e[0], e[1], e[2]});
  return Json{{"c", json_of(c.c)},
              {"F", std::move(f)},
              {"M", json_of(c.M)},
              {"monomial_order", std::move(monos)}};
}
inline Certificate certificate_of(const Json& j) {
  Certificate c;
  c.c = rational_of(j.at("c"));
  for (const auto& m : j.at("F")) c.F.push_back(matrix_of(m));
  c.M = matrix_of(j.at("M"));
  for (const auto& e : j.at("monomial_order"))
    c.monomial_order.push_back({e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<int>()});
  return c;
}

// ---- code files ------------------------------------------------------------

inline Json json_of(const Code& c) {
  if (c.coords.empty())
    throw std::invalid_argument("json_of(Code): code has no coordinate model");
  Json vectors = Json::array();
  for (const auto& v : c.coords) {
    Json row = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) row.push_back(json_of(v(i)));
    vectors.push_back(std::move(row));
  }
  Json norms = Json::array();
  for (const auto& m : c.norm2) norms.push_back(json_of(m));
  return Json{{"name", c.name},
              {"n", c.n},
              {"space", json_of(c.space)},
              {"q", json_of(c.q)},
              {"antipodal", c.antipodal},
              {"vectors", std::move(vectors)},
              {"norm2", std::move(norms)}};
}
inline Code code_of(const Json& j) {
  Code c;
  c.name = j.value("name", std::string("unnamed"));
  c.n = j.at("n").get<int>();
  c.space = space_of(j.at("space"));
  c.q = rational_of(j.at("q"));
  c.antipodal = j.at("antipodal").get<bool>();
  for (const auto& row : j.at("vectors")) {
    VectorXe v(static_cast<Eigen::Index>(row.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = quad_of(row.at(static_cast<size_t>(i)));
    c.coords.push_back(std::move(v));
  }
  if (j.contains("norm2"))
    for (const auto& m : j.at("norm2")) c.norm2.push_back(quad_of(m));
  if (c.norm2.size() != c.coords.size()) {
    c.norm2.clear();
    for (const auto& v : c.coords) {
      Quad s(0);
      for (Eigen::Index i = 0; i < v.size(); ++i) s += v(i) * v(i);
      c.norm2.push_back(s);
    }
  }
  c.compute_gram_from_coords();
  return c;
}

// ---- file helpers ----------------------------------------------------------

inline void write_json_file(const Json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(1) << "\n";
}
inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  return Json::parse(in);
}

}  // namespace threept
