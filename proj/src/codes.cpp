#include "threept/codes.hpp"

#include <algorithm>
#include <sstream>

#include "threept/gegenbauer.hpp"

namespace threept {

std::string RadScalar::str() const {
  if (sgn_ == 0) return "0";
  Quad root;
  if (sq_.sqrt_in_field(root) && root.is_rational()) {
    Rational v = root.rational_value();
    return to_string(sgn_ < 0 ? -v : v);
  }
  std::ostringstream os;
  if (sgn_ < 0) os << "-";
  os << "sqrt(" << sq_ << ")";
  return os.str();
}

void Code::compute_gram_from_coords() {
  const int L = static_cast<int>(coords.size());
  gram_size_ = L;
  gram_.assign(static_cast<size_t>(L) * L, RadScalar());
  for (int i = 0; i < L; ++i)
    for (int j = i; j < L; ++j) {
      Quad dot(0);
      for (int a = 0; a < n; ++a) dot += coords[i](a) * coords[j](a);
      RadScalar g(dot.sign(), dot * dot / (norm2[i] * norm2[j]));
      gram_[i * L + j] = gram_[j * L + i] = g;
    }
  for (int i = 0; i < L; ++i)
    if (gram(i, i) != RadScalar(1, Quad(1))) throw std::logic_error("lift not normalizable");
}

namespace {

VectorXe vec(std::vector<Quad> xs) {
  VectorXe v(xs.size());
  for (size_t i = 0; i < xs.size(); ++i) v(i) = xs[i];
  return v;
}

Code from_coords(std::string name, int n, Space space, bool antipodal, Rational q,
                 std::vector<VectorXe> coords, std::vector<Quad> norm2) {
  Code c;
  c.name = std::move(name);
  c.n = n;
  c.space = space;
  c.antipodal = antipodal;
  c.q = std::move(q);
  c.coords = std::move(coords);
  c.norm2 = std::move(norm2);
  c.compute_gram_from_coords();
  return c;
}

Code make_rhombic7() {
  std::vector<VectorXe> pts;
  std::vector<Quad> n2;
  for (int i = 0; i < 3; ++i) {
    VectorXe e = VectorXe::Zero(3);
    e(i) = 1;
    pts.push_back(e);
    n2.emplace_back(1);
  }
  // cube diagonals with an even number of minus signs
  for (auto s : {std::array<int, 3>{1, 1, 1}, {-1, -1, 1}, {-1, 1, -1}, {1, -1, -1}}) {
    pts.push_back(vec({Quad(s[0]), Quad(s[1]), Quad(s[2])}));
    n2.emplace_back(3);
  }
  return from_coords("rhombic7", 3, Space::projective, false, Rational(1, 3), std::move(pts),
                     std::move(n2));
}

Code make_cube4() {
  std::vector<VectorXe> pts;
  std::vector<Quad> n2;
  for (auto s : {std::array<int, 3>{1, 1, 1}, {1, 1, -1}, {1, -1, 1}, {1, -1, -1}}) {
    pts.push_back(vec({Quad(s[0]), Quad(s[1]), Quad(s[2])}));
    n2.emplace_back(3);
  }
  return from_coords("cube4", 3, Space::projective, false, 0, std::move(pts), std::move(n2));
}

Code make_icosa6() {
  const Quad phi(Rational(1, 2), Rational(1, 2), Rational(5));
  std::vector<VectorXe> pts = {vec({Quad(0), Quad(1), phi}),  vec({Quad(0), Quad(-1), phi}),
                               vec({Quad(1), phi, Quad(0)}),  vec({Quad(-1), phi, Quad(0)}),
                               vec({phi, Quad(0), Quad(1)}),  vec({phi, Quad(0), Quad(-1)})};
  std::vector<Quad> n2(6, Quad(2) + phi);
  return from_coords("icosa6", 3, Space::projective, false, Rational(5), std::move(pts),
                     std::move(n2));
}

Code make_icosaVF16() {
  const Quad phi(Rational(1, 2), Rational(1, 2), Rational(5));
  const Quad inv_phi = phi - Quad(1);
  std::vector<VectorXe> pts;
  std::vector<Quad> n2;
  // vertex lines of the icosahedron
  for (auto& v : {vec({Quad(0), Quad(1), phi}), vec({Quad(0), Quad(-1), phi}),
                  vec({Quad(1), phi, Quad(0)}), vec({Quad(-1), phi, Quad(0)}),
                  vec({phi, Quad(0), Quad(1)}), vec({phi, Quad(0), Quad(-1)})}) {
    pts.push_back(v);
    n2.push_back(Quad(2) + phi);
  }
  // face lines = dodecahedron vertex lines: cube diagonals ...
  for (auto s : {std::array<int, 3>{1, 1, 1}, {1, 1, -1}, {1, -1, 1}, {1, -1, -1}}) {
    pts.push_back(vec({Quad(s[0]), Quad(s[1]), Quad(s[2])}));
    n2.emplace_back(3);
  }
  // ... and cyclic (0, +-1/phi, phi)
  for (auto& v : {vec({Quad(0), inv_phi, phi}), vec({Quad(0), -inv_phi, phi}),
                  vec({inv_phi, phi, Quad(0)}), vec({-inv_phi, phi, Quad(0)}),
                  vec({phi, Quad(0), inv_phi}), vec({phi, Quad(0), -inv_phi})}) {
    pts.push_back(v);
    n2.emplace_back(3);
  }
  return from_coords("icosaVF16", 3, Space::projective, false, Rational(5), std::move(pts),
                     std::move(n2));
}

Code make_antipodal22() {
  const Quad r3 = Quad::sqrt_of(Rational(3));
  std::vector<VectorXe> pts;
  std::vector<Quad> n2;
  for (auto s : {std::array<int, 3>{1, 1, 1}, {1, 1, -1}, {1, -1, 1}, {1, -1, -1}}) {
    pts.push_back(vec({Quad(s[0]), Quad(s[1]), Quad(s[2]), Quad(0)}));
    n2.emplace_back(3);
  }
  pts.push_back(vec({Quad(0), Quad(0), Quad(0), Quad(1)}));
  n2.emplace_back(1);
  for (int axis = 0; axis < 3; ++axis)
    for (int s : {1, -1}) {
      std::vector<Quad> v(4, Quad(0));
      v[axis] = r3;
      v[3] = Quad(s);
      pts.push_back(vec(v));
      n2.emplace_back(4);
    }
  return from_coords("antipodal22_S3", 4, Space::sphere, true, Rational(3), std::move(pts),
                     std::move(n2));
}

Code make_petersen10() {
  // vertices = 2-subsets of {0..4}, adjacent iff disjoint;
  // Gram I - (2/3) A + (1/6)(J - I - A) has rank 4.
  std::vector<std::pair<int, int>> verts;
  for (int a = 0; a < 5; ++a)
    for (int b = a + 1; b < 5; ++b) verts.emplace_back(a, b);
  const int L = 10;
  std::vector<RadScalar> g(L * L);
  for (int i = 0; i < L; ++i)
    for (int j = 0; j < L; ++j) {
      if (i == j) {
        g[i * L + j] = RadScalar(1, Quad(1));
        continue;
      }
      bool disjoint = verts[i].first != verts[j].first && verts[i].first != verts[j].second &&
                      verts[i].second != verts[j].first && verts[i].second != verts[j].second;
      Rational val = disjoint ? Rational(-2, 3) : Rational(1, 6);
      g[i * L + j] = RadScalar::from_quad(Quad(val));
    }
  Code c;
  c.name = "petersen10_S3";
  c.n = 4;
  c.space = Space::projective;
  c.q = 0;
  c.set_gram(std::move(g), L);
  return c;
}

Code make_pentagons10() {
  // two regular pentagons of lines in orthogonal planes
  const Quad c72(Rational(-1, 4), Rational(1, 4), Rational(5));   // cos 72
  const Quad c144(Rational(-1, 4), Rational(-1, 4), Rational(5));  // cos 144
  const int L = 10;
  std::vector<RadScalar> g(L * L);
  for (int i = 0; i < L; ++i)
    for (int j = 0; j < L; ++j) {
      if (i == j) {
        g[i * L + j] = RadScalar(1, Quad(1));
      } else if (i / 5 != j / 5) {
        g[i * L + j] = RadScalar();
      } else {
        int d = std::abs(i - j) % 5;
        if (d > 2) d = 5 - d;
        g[i * L + j] = RadScalar::from_quad(d == 1 ? c72 : c144);
      }
    }
  Code c;
  c.name = "pentagons10_S3";
  c.n = 4;
  c.space = Space::projective;
  c.q = 5;
  c.set_gram(std::move(g), L);
  return c;
}

Code make_cell600() {
  const Quad phi(Rational(1, 2), Rational(1, 2), Rational(5));
  const Quad inv_phi = phi - Quad(1);
  std::vector<VectorXe> all;
  // doubled coordinates, squared norm 4
  for (int axis = 0; axis < 4; ++axis)
    for (int s : {1, -1}) {
      std::vector<Quad> v(4, Quad(0));
      v[axis] = Quad(2 * s);
      all.push_back(vec(v));
    }
  for (int mask = 0; mask < 16; ++mask) {
    std::vector<Quad> v(4);
    for (int a = 0; a < 4; ++a) v[a] = Quad((mask >> a) & 1 ? -1 : 1);
    all.push_back(vec(v));
  }
  static const int even_perms[12][4] = {{0, 1, 2, 3}, {0, 2, 3, 1}, {0, 3, 1, 2}, {1, 0, 3, 2},
                                        {1, 2, 0, 3}, {1, 3, 2, 0}, {2, 0, 1, 3}, {2, 1, 3, 0},
                                        {2, 3, 0, 1}, {3, 0, 2, 1}, {3, 1, 0, 2}, {3, 2, 1, 0}};
  for (auto& p : even_perms)
    for (int s1 : {1, -1})
      for (int s2 : {1, -1})
        for (int s3 : {1, -1}) {
          std::vector<Quad> base = {phi * Quad(s1), Quad(s2), inv_phi * Quad(s3), Quad(0)};
          std::vector<Quad> v(4);
          for (int a = 0; a < 4; ++a) v[p[a]] = base[a];
          all.push_back(vec(v));
        }
  if (all.size() != 120) throw std::logic_error("600-cell vertex count");
  // keep one lift per antipodal pair: first nonzero coordinate positive
  std::vector<VectorXe> pts;
  for (auto& v : all) {
    int s = 0;
    for (int a = 0; a < 4 && s == 0; ++a) s = v(a).sign();
    if (s > 0) pts.push_back(v);
  }
  if (pts.size() != 60) throw std::logic_error("600-cell lift count");
  std::vector<Quad> n2(60, Quad(4));
  return from_coords("cell600", 4, Space::sphere, true, Rational(5), std::move(pts),
                     std::move(n2));
}

Code make_antiprism8(const Rational& h) {
  const Quad s = Quad::sqrt_of(Rational(1, 2));
  std::vector<VectorXe> pts = {
      vec({Quad(1), Quad(0), Quad(h)}),  vec({Quad(0), Quad(1), Quad(h)}),
      vec({Quad(-1), Quad(0), Quad(h)}), vec({Quad(0), Quad(-1), Quad(h)}),
      vec({s, s, Quad(-h)}),             vec({-s, s, Quad(-h)}),
      vec({-s, -s, Quad(-h)}),           vec({s, -s, Quad(-h)})};
  std::vector<Quad> n2(8, Quad(Rational(1 + h * h)));
  std::ostringstream name;
  name << "antiprism8(" << to_string(h) << ")";
  return from_coords(name.str(), 3, Space::sphere, false, Rational(1, 2), std::move(pts),
                     std::move(n2));
}

Code make_orthogonal_lines(int n, int m) {
  if (m < 1 || m > n) throw std::invalid_argument("orthogonal_lines: need 1 <= m <= n");
  std::vector<VectorXe> pts;
  std::vector<Quad> n2;
  for (int i = 0; i < m; ++i) {
    VectorXe e = VectorXe::Zero(n);
    e(i) = 1;
    pts.push_back(e);
    n2.emplace_back(1);
  }
  std::ostringstream name;
  name << "orthogonal_lines(" << n << "," << m << ")";
  return from_coords(name.str(), n, Space::projective, false, 0, std::move(pts), std::move(n2));
}

Code make_simplex_lines(int n) {
  if (n < 2) throw std::invalid_argument("simplex_lines: need n >= 2");
  const int L = n + 1;  // regular simplex vertices as lines, <x,y> = -1/n
  std::vector<RadScalar> g(L * L);
  for (int i = 0; i < L; ++i)
    for (int j = 0; j < L; ++j)
      g[i * L + j] = i == j ? RadScalar(1, Quad(1))
                            : RadScalar::from_quad(Quad(Rational(-1, n)));
  Code c;
  std::ostringstream name;
  name << "simplex_lines(" << n << ")";
  c.name = name.str();
  c.n = n;
  c.space = Space::projective;
  c.q = 0;
  c.set_gram(std::move(g), L);
  return c;
}

std::vector<std::string> split_args(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (!isspace(static_cast<unsigned char>(ch))) {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace

Code builtin(const std::string& name) {
  std::string base = name;
  std::vector<std::string> args;
  auto open = name.find('(');
  if (open != std::string::npos) {
    if (name.back() != ')') throw std::invalid_argument("bad code name: " + name);
    base = name.substr(0, open);
    args = split_args(name.substr(open + 1, name.size() - open - 2));
  }
  auto want = [&](size_t k) {
    if (args.size() != k)
      throw std::invalid_argument("code " + base + ": expected " + std::to_string(k) +
                                  " parameter(s)");
  };
  if (base == "rhombic7") return want(0), make_rhombic7();
  if (base == "cube4") return want(0), make_cube4();
  if (base == "icosa6") return want(0), make_icosa6();
  if (base == "icosaVF16") return want(0), make_icosaVF16();
  if (base == "antipodal22_S3") return want(0), make_antipodal22();
  if (base == "petersen10_S3") return want(0), make_petersen10();
  if (base == "pentagons10_S3") return want(0), make_pentagons10();
  if (base == "cell600") return want(0), make_cell600();
  if (base == "antiprism8") return want(1), make_antiprism8(parse_rational(args[0]));
  if (base == "orthogonal_lines")
    return want(2), make_orthogonal_lines(std::stoi(args[0]), std::stoi(args[1]));
  if (base == "simplex_lines") return want(1), make_simplex_lines(std::stoi(args[0]));
  throw std::invalid_argument("unknown code: " + name);
}

std::vector<std::string> builtin_names() {
  return {"orthogonal_lines(n,m)", "simplex_lines(n)", "rhombic7",      "icosa6",
          "cube4",                 "antipodal22_S3",   "icosaVF16",     "petersen10_S3",
          "pentagons10_S3",        "cell600",          "antiprism8(h)"};
}

namespace {

PolyQ even_part_in_square(const PolyQ& p) {
  // p even: p(t) = g(t^2)
  std::vector<Rational> c;
  for (int i = 0; i <= p.degree(); i += 2) c.push_back(p.coeff(i));
  return PolyQ(std::move(c));
}

Quad linear_gram(const Code& c, int i, int j) {
  auto v = c.gram(i, j).in_field(c.q);
  if (!v)
    throw std::domain_error("code " + c.name +
                            ": inner products are not representable in the field");
  return *v;
}

}  // namespace

Quad energy(const Code& c, const PolyQ& f, EnergyConvention conv) {
  const int L = c.lifts();
  Quad acc(0);
  if (conv == EnergyConvention::E_hat) {
    if (!c.line_like()) throw std::invalid_argument("E_hat requires a projective/antipodal code");
    for (int i = 0; i < L; ++i)
      for (int j = i + 1; j < L; ++j) acc += f.eval<Quad>(c.gram2(i, j));
    return acc;
  }
  if (conv == EnergyConvention::E && c.space == Space::projective) {
    // squared chordal distance between lines is 1 - <x,y>^2
    for (int i = 0; i < L; ++i)
      for (int j = i + 1; j < L; ++j) acc += f.eval<Quad>(Quad(1) - c.gram2(i, j));
    return acc;
  }
  if (c.space == Space::projective)
    throw std::invalid_argument("E_tilde requires a spherical code");
  PolyQ g = conv == EnergyConvention::E ? f.compose(PolyQ(std::vector<Rational>{2, -2})) : f;
  if (c.antipodal) {
    for (int i = 0; i < L; ++i)
      for (int j = i + 1; j < L; ++j) {
        Quad u = linear_gram(c, i, j);
        acc += (g.eval<Quad>(u) + g.eval<Quad>(-u)) * Quad(2);
      }
    acc += g.eval<Quad>(Quad(-1)) * Quad(L);
    return acc;
  }
  for (int i = 0; i < L; ++i)
    for (int j = i + 1; j < L; ++j) acc += g.eval<Quad>(linear_gram(c, i, j));
  return acc;
}

Triple canonical_triple(Triple t, bool projective) {
  static const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                  {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  static const int flips[4][3] = {{1, 1, 1}, {-1, -1, 1}, {-1, 1, -1}, {1, -1, -1}};
  Triple best = t;
  bool first = true;
  const int nflips = projective ? 4 : 1;
  for (auto& p : perms)
    for (int fi = 0; fi < nflips; ++fi) {
      Triple cand;
      for (int a = 0; a < 3; ++a) {
        RadScalar x = t[p[a]];
        if (flips[fi][a] < 0) x = -x;
        cand[a] = x;
      }
      if (first || best < cand) {
        best = cand;
        first = false;
      }
    }
  return best;
}

TripleDistribution triple_distribution(const Code& c) {
  const int L = c.lifts();
  if (L < 3) throw std::invalid_argument("triple_distribution: need at least 3 points");
  TripleDistribution td;
  td.N = L;
  const bool proj = c.line_like();
  for (int i = 0; i < L; ++i)
    for (int j = 0; j < L; ++j)
      for (int k = 0; k < L; ++k) {
        Triple t = {c.gram(i, j), c.gram(j, k), c.gram(k, i)};
        ++td.raw[t];
        if (i != j && j != k && i != k) ++td.classes[canonical_triple(t, proj)];
      }
  return td;
}

int design_strength(const Code& c, int k_max) {
  if (k_max < 1) throw std::invalid_argument("design_strength: need k_max >= 1");
  const int L = c.lifts();
  for (int j = 1; j <= k_max; ++j) {
    Quad sum(0);
    if (c.line_like()) {
      PolyQ g = even_part_in_square(gegenbauer(c.n, 2 * j));
      sum += Quad(L);  // diagonal pairs, P(1) = 1
      for (int a = 0; a < L; ++a)
        for (int b = 0; b < L; ++b)
          if (a != b) sum += g.eval<Quad>(c.gram2(a, b));
      if (c.antipodal) sum *= Quad(4);  // both lifts of each line, even degree
    } else {
      PolyQ p = gegenbauer(c.n, j);
      for (int a = 0; a < L; ++a)
        for (int b = 0; b < L; ++b)
          sum += p.eval<Quad>(a == b ? Quad(1) : linear_gram(c, a, b));
    }
    if (!sum.is_zero()) return j - 1;
  }
  return k_max;
}

CodeReport verify_code(const Code& c, const RadScalar& t) {
  const int L = c.lifts();
  CodeReport r;
  bool first = true;
  for (int i = 0; i < L; ++i)
    for (int j = i + 1; j < L; ++j) {
      RadScalar v = c.line_like() ? c.gram(i, j).abs() : c.gram(i, j);
      if (first || r.max_cos < v) {
        r.max_cos = v;
        first = false;
      }
    }
  if (first) r.max_cos = RadScalar(-1, Quad(1));  // single point: vacuous
  r.satisfies = r.max_cos <= t;
  return r;
}

std::vector<Quad> squared_inner_products(const Code& c) {
  std::vector<Quad> vals;
  const int L = c.lifts();
  for (int i = 0; i < L; ++i)
    for (int j = i + 1; j < L; ++j) {
      const Quad& s = c.gram2(i, j);
      if (std::find(vals.begin(), vals.end(), s) == vals.end()) vals.push_back(s);
    }
  std::sort(vals.begin(), vals.end());
  return vals;
}

}  // namespace threept
