#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "threept/exact_linalg.hpp"
#include "threept/symmetry.hpp"

using namespace threept;

namespace {

VectorXq random_lambda(int n, std::mt19937& rng) {
  std::uniform_int_distribution<int> num(-9, 9);
  VectorXq v(n);
  for (int i = 0; i < n; ++i) v(i) = Rational(num(rng), 1 + (num(rng) & 3));
  return v;
}

}  // namespace

TEST_CASE("monomials enumeration") {
  CHECK(monomials(0) == std::vector<Exponent>{{0, 0, 0}});
  CHECK(monomials(1).size() == 4);
  auto m7 = monomials(7);
  CHECK(m7.size() == 120);
  CHECK(std::is_sorted(m7.begin(), m7.end()));
  auto m14 = monomials(14);
  CHECK(m14.size() == 680);
}

TEST_CASE("signed permutation group") {
  const auto& g = signed_permutations();
  CHECK(g.size() == 24);
  // group closure on a sample exponent: images form orbits within the basis
  Exponent e{3, 2, 1};
  for (const auto& s : g) {
    Exponent f = s.apply(e);
    CHECK(f[0] + f[1] + f[2] == 6);
    CHECK((s.sign(e) == 1 || s.sign(e) == -1));
  }
}

TEST_CASE("sign classes partition the degree-7 monomials evenly") {
  SymmetryBasis b = build_symmetry_basis(7);
  REQUIRE(b.size() == 120);
  std::array<int, 4> counts{};
  for (int c : b.sign_class) counts[c]++;
  for (int c = 0; c < 4; ++c) CHECK(counts[c] == 30);
  // class 0 is preserved by the group; classes 1..3 are permuted among themselves
  for (const auto& s : signed_permutations())
    for (int a = 0; a < b.size(); ++a) {
      int ca = b.sign_class[a];
      int cb = b.sign_class[b.index_of(s.apply(b.monos[a]))];
      if (ca == 0)
        CHECK(cb == 0);
      else
        CHECK(cb >= 1);
    }
}

TEST_CASE("orbit entries stay within one sign class and never repeat") {
  SymmetryBasis b = build_symmetry_basis(5);
  std::set<std::pair<int, int>> used;
  for (const auto& o : b.orbits)
    for (const auto& [i, j, s] : o.entries) {
      CHECK(i <= j);
      CHECK(b.sign_class[i] == b.sign_class[j]);
      CHECK((s == 1 || s == -1));
      CHECK(used.insert({i, j}).second);
    }
}

TEST_CASE("assembled matrices are symmetric, block diagonal, and invariant") {
  std::mt19937 rng(23);
  for (int D : {3, 5, 7}) {
    SymmetryBasis b = build_symmetry_basis(D);
    VectorXq lam = random_lambda(static_cast<int>(b.orbits.size()), rng);
    MatrixXq m = b.assemble(lam);
    CHECK(is_symmetric(m));
    for (int i = 0; i < b.size(); ++i)
      for (int j = 0; j < b.size(); ++j)
        if (b.sign_class[i] != b.sign_class[j]) CHECK(m(i, j) == 0);
    for (const auto& g : signed_permutations())
      for (int i = 0; i < b.size(); ++i)
        for (int j = 0; j < b.size(); ++j) {
          int gi = b.index_of(g.apply(b.monos[i]));
          int gj = b.index_of(g.apply(b.monos[j]));
          Rational expect = m(i, j) * g.sign(b.monos[i]) * g.sign(b.monos[j]);
          CHECK(m(gi, gj) == expect);
        }
  }
}

TEST_CASE("orbit forms are symmetric and flip invariant") {
  SymmetryBasis b = build_symmetry_basis(4);
  for (const auto& o : b.orbits) {
    TriPoly f = b.orbit_form(o);
    CHECK(f == f.symmetrized());
    CHECK(f == f.sign_flipped({0, 1}));
    CHECK(f == f.sign_flipped({0, 2}));
    CHECK(f == f.sign_flipped({1, 2}));
  }
}

TEST_CASE("quadratic form matches orbit forms and apply_orbits") {
  std::mt19937 rng(31);
  SymmetryBasis b = build_symmetry_basis(3);
  VectorXq lam = random_lambda(static_cast<int>(b.orbits.size()), rng);
  MatrixXq m = b.assemble(lam);
  std::uniform_int_distribution<int> num(-4, 4);
  for (int trial = 0; trial < 5; ++trial) {
    Rational u(num(rng), 3), v(num(rng), 5), t(num(rng), 2);
    VectorXq z(b.size());
    for (int i = 0; i < b.size(); ++i) {
      const Exponent& e = b.monos[i];
      Rational val = 1;
      for (int p = 0; p < e[0]; ++p) val *= u;
      for (int p = 0; p < e[1]; ++p) val *= v;
      for (int p = 0; p < e[2]; ++p) val *= t;
      z(i) = val;
    }
    Rational quad = (z.transpose() * m * z)(0, 0);
    Rational sum = 0;
    for (size_t o = 0; o < b.orbits.size(); ++o)
      sum += lam(static_cast<Eigen::Index>(o)) *
             b.orbit_form(b.orbits[o]).eval<Quad>(Quad(u), Quad(v), Quad(t)).rational_value();
    CHECK(quad == sum);

    VectorXe ze(b.size());
    for (int i = 0; i < b.size(); ++i) ze(i) = Quad(z(i));
    MatrixXe sz = b.apply_orbits(ze);
    VectorXq mz = m * z;
    for (int i = 0; i < b.size(); ++i) {
      Quad acc(0);
      for (size_t o = 0; o < b.orbits.size(); ++o)
        acc += Quad(lam(static_cast<Eigen::Index>(o))) * sz(i, static_cast<Eigen::Index>(o));
      CHECK(acc == Quad(mz(i)));
    }
  }
}

TEST_CASE("orbit counts are stable") {
  // invariant symmetric matrix dimensions per degree, locked as regression data
  CHECK(build_symmetry_basis(3).orbits.size() == 18);
  CHECK(build_symmetry_basis(7).orbits.size() == 377);
}
