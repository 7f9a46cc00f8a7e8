#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "threept/codes.hpp"
#include "threept/gegenbauer.hpp"

using namespace threept;

namespace {

PolyQ poly(std::vector<Rational> c) { return PolyQ(std::move(c)); }

const PolyQ t_poly = poly({0, 1});

PolyQ basis_potential(int idx) {
  // 1, t, t^2, t^3, t^3(t-1/9), t^3(t-1/9)^2, t^3(t-1/9)^2(t-1/3)
  PolyQ t3 = poly({0, 0, 0, 1});
  PolyQ a = poly({Rational(-1, 9), 1});
  PolyQ b = poly({Rational(-1, 3), 1});
  switch (idx) {
    case 0: return PolyQ(Rational(1));
    case 1: return t_poly;
    case 2: return t_poly * t_poly;
    case 3: return t3;
    case 4: return t3 * a;
    case 5: return t3 * a * a;
    default: return t3 * a * a * b;
  }
}

// 1 + 2uvt - u^2 - v^2 - t^2 >= 0, decided exactly via RadScalar comparison
bool triple_in_closure(const Triple& t) {
  Quad rhs = t[0].square() + t[1].square() + t[2].square() - Quad(1);
  RadScalar lhs = t[0] * t[1] * t[2];
  return RadScalar::from_quad(rhs) <= RadScalar(lhs.sign(), lhs.square() * Quad(4));
}

void check_identities(const Code& c) {
  TripleDistribution td = triple_distribution(c);
  const long N = td.N;
  CAPTURE(c.name);
  // A_{1,1,1} = N
  RadScalar one(1, Quad(1));
  Triple diag = {one, one, one};
  REQUIRE(td.raw.count(diag) == 1);
  CHECK(td.raw.at(diag) == N);
  // total count N^3
  long total = 0;
  for (auto& [t, cnt] : td.raw) total += cnt;
  CHECK(total == N * N * N);
  // triples with a repeated middle point: sum of A_{u,1,u} over u is N^2
  long repeated = 0;
  for (auto& [t, cnt] : td.raw)
    if (t[1] == one) repeated += cnt;
  CHECK(repeated == N * N);
  // distinct triples
  CHECK(td.total_distinct() == N * (N - 1) * (N - 2));
  // supports lie in the domain D and are invariant under the canonical symmetry
  for (auto& [t, cnt] : td.classes) {
    CHECK(triple_in_closure(t));
    CHECK(canonical_triple(t, c.line_like()) == t);
    CHECK(cnt > 0);
  }
}

}  // namespace

TEST_CASE("catalog basics") {
  Code r = builtin("rhombic7");
  CHECK(r.lifts() == 7);
  CHECK(r.N() == 7);
  auto sq = squared_inner_products(r);
  CHECK(sq == std::vector<Quad>{Quad(0), Quad(Rational(1, 9)), Quad(Rational(1, 3))});

  Code o = builtin("orthogonal_lines(3,3)");
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(o.gram(i, j) == (i == j ? RadScalar(1, Quad(1)) : RadScalar()));

  CHECK(builtin("cube4").lifts() == 4);
  CHECK(builtin("icosa6").lifts() == 6);
  CHECK(builtin("icosaVF16").lifts() == 16);
  CHECK(builtin("petersen10_S3").lifts() == 10);
  CHECK(builtin("pentagons10_S3").lifts() == 10);
  CHECK(builtin("antiprism8(1/2)").lifts() == 8);
  CHECK_THROWS_AS(builtin("noSuchCode"), std::invalid_argument);
  CHECK_THROWS_AS(builtin("antiprism8"), std::invalid_argument);
}

TEST_CASE("antipodal22 inner products") {
  Code c = builtin("antipodal22_S3");
  CHECK(c.lifts() == 11);
  CHECK(c.N() == 22);
  bool third = false, quarter = false;
  for (int i = 0; i < 11; ++i)
    for (int j = i + 1; j < 11; ++j) {
      auto v = c.gram(i, j).in_field(c.q);
      REQUIRE(v.has_value());
      REQUIRE(v->is_rational());
      Rational x = v->rational_value();
      CHECK(boost::multiprecision::abs(x) <= Rational(1, 2));
      if (boost::multiprecision::abs(x) == Rational(1, 3)) third = true;
      if (boost::multiprecision::abs(x) == Rational(1, 4)) quarter = true;
    }
  CHECK(third);
  CHECK(quarter);
  auto rep = verify_code(c, RadScalar::from_quad(Quad(Rational(1, 2))));
  CHECK(rep.max_cos == RadScalar::from_quad(Quad(Rational(1, 2))));
  CHECK(rep.satisfies);
}

TEST_CASE("petersen gram is a rank-4 line system") {
  Code c = builtin("petersen10_S3");
  MatrixXq g(10, 10);
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) {
      auto v = c.gram(i, j).in_field(0);
      REQUIRE(v.has_value());
      g(i, j) = v->rational_value();
    }
  CHECK(psd_check(g));
  MatrixXq m = g;
  CHECK(rref(m).size() == 4);  // rank 4: genuinely lives in R^4
}

TEST_CASE("pentagons gram is a rank-4 line system") {
  Code c = builtin("pentagons10_S3");
  MatrixXe g(10, 10);
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) {
      auto v = c.gram(i, j).in_field(c.q);
      REQUIRE(v.has_value());
      g(i, j) = *v;
    }
  CHECK(psd_check(g));
}

TEST_CASE("cell600 construction") {
  Code c = builtin("cell600");
  CHECK(c.lifts() == 60);
  CHECK(c.N() == 120);
  // neighbors at cos 36 = phi/2, squared (3+sqrt5)/8
  auto rep = verify_code(c, RadScalar(1, Quad(Rational(3, 8), Rational(1, 8), Rational(5))));
  CHECK(rep.max_cos == RadScalar(1, Quad(Rational(3, 8), Rational(1, 8), Rational(5))));
  CHECK(rep.satisfies);
  // inner products land in {+-1? excluded by lifts}, 0, +-1/2, (+-1+-sqrt5)/4
  for (int i = 0; i < 60; ++i)
    for (int j = i + 1; j < 60; ++j) {
      auto v = c.gram(i, j).in_field(c.q);
      REQUIRE(v.has_value());
      Quad a = *v;
      bool known = a.is_zero() || a == Quad(Rational(1, 2)) || a == Quad(Rational(-1, 2)) ||
                   a == Quad(Rational(1, 4), Rational(1, 4), Rational(5)) ||
                   a == Quad(Rational(-1, 4), Rational(-1, 4), Rational(5)) ||
                   a == Quad(Rational(1, 4), Rational(-1, 4), Rational(5)) ||
                   a == Quad(Rational(-1, 4), Rational(1, 4), Rational(5));
      CHECK(known);
    }
}

TEST_CASE("rhombic energies") {
  Code r = builtin("rhombic7");
  CHECK(energy(r, t_poly, EnergyConvention::E_hat) == Quad(Rational(14, 3)));
  CHECK(energy(r, basis_potential(2), EnergyConvention::E_hat) == Quad(Rational(38, 27)));
  CHECK(energy(r, basis_potential(3), EnergyConvention::E_hat) == Quad(Rational(110, 243)));
  CHECK(energy(r, basis_potential(4), EnergyConvention::E_hat) == Quad(Rational(8, 81)));
  CHECK(energy(r, basis_potential(5), EnergyConvention::E_hat) == Quad(Rational(16, 729)));
  CHECK(energy(r, basis_potential(6), EnergyConvention::E_hat) == Quad(0));
  // constant potential: all 21 pairs
  CHECK(energy(r, PolyQ(Rational(1)), EnergyConvention::E_hat) == Quad(21));
}

TEST_CASE("energy conversions") {
  // E_hat_f = E_g with g(t) = f(1-t) on lines
  std::mt19937 rng(23);
  std::uniform_int_distribution<int> d(-4, 4);
  for (const char* name : {"rhombic7", "icosa6", "icosaVF16", "petersen10_S3"}) {
    Code c = builtin(name);
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<Rational> coeffs(1 + trial);
      for (auto& x : coeffs) x = Rational(d(rng));
      PolyQ f(coeffs);
      PolyQ g = f.compose(poly({1, -1}));
      CHECK(energy(c, f, EnergyConvention::E_hat) == energy(c, g, EnergyConvention::E));
    }
  }
  // E_g = E_tilde_f with f(t) = g(2-2t) on spheres
  Code a = builtin("antiprism8(1/2)");
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<Rational> coeffs(1 + trial);
    for (auto& x : coeffs) x = Rational(d(rng));
    PolyQ g(coeffs);
    PolyQ f = g.compose(poly({2, -2}));
    CHECK(energy(a, g, EnergyConvention::E) == energy(a, f, EnergyConvention::E_tilde));
  }
}

TEST_CASE("rhombic triple distribution classes") {
  Code r = builtin("rhombic7");
  TripleDistribution td = triple_distribution(r);
  CHECK(td.total_distinct() == 210);
  REQUIRE(td.classes.size() == 5);

  auto cls = [&](Quad u, Quad v, Quad t_) {
    auto mk = [](const Quad& x) { return RadScalar::from_quad(x); };
    auto mkroot = [](const Quad& s) { return RadScalar::sqrt_nonneg(s); };
    (void)mkroot;
    return canonical_triple({mk(u), mk(v), mk(t_)}, true);
  };
  const RadScalar root13 = RadScalar::sqrt_nonneg(Quad(Rational(1, 3)));
  auto cls_mixed = [&](Quad last) {
    return canonical_triple({RadScalar::from_quad(last), root13, root13}, true);
  };
  CHECK(td.classes.at(cls(Quad(0), Quad(0), Quad(0))) == 6);
  CHECK(td.classes.at(cls(Quad(Rational(-1, 3)), Quad(Rational(-1, 3)), Quad(Rational(-1, 3)))) ==
        24);
  CHECK(td.classes.at(cls_mixed(Quad(Rational(-1, 3)))) == 36);
  CHECK(td.classes.at(cls_mixed(Quad(0))) == 72);
  CHECK(td.classes.at(cls_mixed(Quad(Rational(1, 3)))) == 72);
}

TEST_CASE("orthogonal lines have one triple class") {
  TripleDistribution td = triple_distribution(builtin("orthogonal_lines(3,3)"));
  CHECK(td.classes.size() == 1);
  Triple zero = {RadScalar(), RadScalar(), RadScalar()};
  CHECK(td.classes.at(zero) == 6);
}

TEST_CASE("triple distribution identities for the catalog") {
  for (const char* name : {"rhombic7", "icosa6", "cube4", "icosaVF16", "petersen10_S3",
                           "pentagons10_S3", "antipodal22_S3", "antiprism8(1/2)",
                           "orthogonal_lines(4,4)", "simplex_lines(3)"})
    check_identities(builtin(name));
}

TEST_CASE("energy formula from triple distribution") {
  // E_hat_f = (1/(6(N-2))) sum_D A (f(u^2)+f(v^2)+f(t^2)) on line systems
  std::mt19937 rng(31);
  std::uniform_int_distribution<int> d(-3, 3);
  for (const char* name : {"rhombic7", "icosa6", "cube4", "icosaVF16", "petersen10_S3"}) {
    Code c = builtin(name);
    TripleDistribution td = triple_distribution(c);
    for (int trial = 0; trial < 4; ++trial) {
      std::vector<Rational> coeffs(1 + (trial * 2) % 7);
      for (auto& x : coeffs) x = Rational(d(rng));
      PolyQ f(coeffs);
      Quad sum(0);
      for (auto& [t, cnt] : td.classes) {
        Quad part = f.eval<Quad>(t[0].square()) + f.eval<Quad>(t[1].square()) +
                    f.eval<Quad>(t[2].square());
        sum += part * Quad(cnt);
      }
      sum = sum / Quad(Rational(6 * (td.N - 2)));
      CHECK(sum == energy(c, f, EnergyConvention::E_hat));
    }
  }
  // E_tilde version on a genuine spherical code
  Code a = builtin("antiprism8(2/3)");
  TripleDistribution td = triple_distribution(a);
  for (int trial = 0; trial < 4; ++trial) {
    std::vector<Rational> coeffs(1 + (trial * 2) % 7);
    for (auto& x : coeffs) x = Rational(d(rng));
    PolyQ f(coeffs);
    Quad sum(0);
    for (auto& [t, cnt] : td.classes) {
      Quad part(0);
      for (int i = 0; i < 3; ++i) {
        auto v = t[i].in_field(a.q);
        REQUIRE(v.has_value());
        part += f.eval<Quad>(*v);
      }
      sum += part * Quad(cnt);
    }
    sum = sum / Quad(Rational(6 * (td.N - 2)));
    CHECK(sum == energy(a, f, EnergyConvention::E_tilde));
  }
}

TEST_CASE("design strengths") {
  CHECK(design_strength(builtin("rhombic7"), 4) == 1);
  CHECK(design_strength(builtin("icosaVF16"), 3) == 2);
  CHECK(design_strength(builtin("icosa6"), 4) == 2);
}

TEST_CASE("design strength is lift independent") {
  Code r = builtin("rhombic7");
  // flip signs of a few stored lifts
  Code flipped = r;
  for (int i : {1, 4, 6}) flipped.coords[i] = -flipped.coords[i];
  flipped.compute_gram_from_coords();
  CHECK(design_strength(flipped, 4) == design_strength(r, 4));
  TripleDistribution a = triple_distribution(r), b = triple_distribution(flipped);
  CHECK(a.classes == b.classes);
}

TEST_CASE("verify_code") {
  Code r = builtin("rhombic7");
  RadScalar bound = RadScalar::sqrt_nonneg(Quad(Rational(1, 3)));
  auto rep = verify_code(r, bound);
  CHECK(rep.max_cos == bound);
  CHECK(rep.satisfies);
  CHECK(rep.max_cos.str() == "sqrt(1/3)");

  auto o = verify_code(builtin("orthogonal_lines(3,3)"), RadScalar());
  CHECK(o.max_cos == RadScalar());
  CHECK(o.satisfies);

  auto i6 = verify_code(builtin("icosa6"), RadScalar::sqrt_nonneg(Quad(Rational(1, 5))));
  CHECK(i6.max_cos == RadScalar::sqrt_nonneg(Quad(Rational(1, 5))));
  CHECK(i6.satisfies);
}
