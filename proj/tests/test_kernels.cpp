#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "threept/kernels.hpp"

using namespace threept;

namespace {

MatrixXq to_rational(const MatrixXe& m) {
  MatrixXq r(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) r(i, j) = m(i, j).rational_value();
  return r;
}

using Vec3 = std::array<Rational, 3>;

Rational dot(const Vec3& x, const Vec3& y) {
  return x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
}

// rational unit vectors on S^2
const std::vector<Vec3> unit_pool = {
    {1, 0, 0},
    {0, 1, 0},
    {0, 0, 1},
    {Rational(2, 3), Rational(2, 3), Rational(1, 3)},
    {Rational(2, 7), Rational(3, 7), Rational(6, 7)},
    {Rational(1, 9), Rational(4, 9), Rational(8, 9)},
    {Rational(3, 5), Rational(-4, 5), 0},
    {Rational(12, 13), Rational(3, 13), Rational(4, 13)},
    {Rational(-2, 11), Rational(6, 11), Rational(9, 11)},
};

}  // namespace

TEST_CASE("sphere kernel base cases") {
  KernelMatrix s0 = sphere_S(5, 0, 1);
  CHECK(s0.entry(0, 0) == TriPoly(Rational(1)));

  KernelMatrix s1 = sphere_S(3, 1, 1);
  TriPoly u = TriPoly::u(), v = TriPoly::v(), t = TriPoly::t();
  TriPoly expect = (u + v + t - u * v - u * t - v * t) * Rational(1, 3);
  CHECK(s1.entry(0, 0) == expect);

  CHECK_THROWS_AS(sphere_S(2, 0, 1), std::invalid_argument);
}

TEST_CASE("kernel entries symmetric and permutation invariant") {
  for (int k = 0; k <= 3; ++k) {
    KernelMatrix K = sphere_S(4, k, 3);
    for (int i = 0; i < K.d; ++i)
      for (int j = 0; j < K.d; ++j) {
        CHECK(K.entry(i, j) == K.entry(j, i));
        CHECK(K.entry(i, j) == K.entry(i, j).symmetrized());
        // per-variable degree bound k + 2(d-1)
        int max_exp = 0;
        for (auto& [e, c] : K.entry(i, j).terms())
          max_exp = std::max({max_exp, e[0], e[1], e[2]});
        CHECK(max_exp <= k + 2 * (K.d - 1));
      }
  }
}

TEST_CASE("evaluation at (1,1,1)") {
  for (int n : {3, 4}) {
    MatrixXe j = eval_kernel(sphere_S(n, 0, 3), Quad(1), Quad(1), Quad(1));
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) CHECK(j(a, b) == Quad(1));
    for (int k = 1; k <= 3; ++k) {
      MatrixXe z = eval_kernel(sphere_S(n, k, 2), Quad(1), Quad(1), Quad(1));
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) CHECK(z(a, b).is_zero());
    }
  }
}

TEST_CASE("evaluation at the origin") {
  MatrixXe z = eval_kernel(sphere_S(3, 1, 1), Quad(0), Quad(0), Quad(0));
  CHECK(z(0, 0).is_zero());
}

TEST_CASE("projective kernel index parity") {
  KernelMatrix p0 = projective_S(3, 0, 2);
  CHECK(p0.indices == std::vector<int>{0, 2});
  KernelMatrix p1 = projective_S(3, 1, 1);
  CHECK(p1.indices == std::vector<int>{1});
  // entry (0,0) is the symmetrization of u v (t - uv)
  TriPoly u = TriPoly::u(), v = TriPoly::v(), t = TriPoly::t();
  CHECK(p1.entry(0, 0) == (u * v * (t - u * v)).symmetrized());
  KernelMatrix p5 = projective_S(3, 5, 2);
  CHECK(p5.indices == std::vector<int>{1, 3});
}

TEST_CASE("projective kernels invariant under double sign flips") {
  std::mt19937 rng(9);
  std::uniform_int_distribution<int> num(-5, 5);
  for (int k = 0; k <= 3; ++k) {
    KernelMatrix K = projective_S(3, k, 2);
    for (int i = 0; i < K.d; ++i)
      for (int j = 0; j < K.d; ++j) {
        const TriPoly& e = K.entry(i, j);
        CHECK(e.sign_flipped({0, 1}) == e);
        CHECK(e.sign_flipped({0, 2}) == e);
        CHECK(e.sign_flipped({1, 2}) == e);
      }
    for (int trial = 0; trial < 10; ++trial) {
      Quad u(Rational(num(rng), 7)), v(Rational(num(rng), 7)), t(Rational(num(rng), 7));
      MatrixXe a = eval_kernel(K, u, v, t);
      MatrixXe b = eval_kernel(K, -u, -v, t);
      for (int x = 0; x < K.d; ++x)
        for (int y = 0; y < K.d; ++y) CHECK(a(x, y) == b(x, y));
    }
  }
}

TEST_CASE("radicals cancel by parity at projective code points") {
  Quad s = Quad::sqrt_of(Rational(1, 3));
  for (int k = 0; k <= 5; ++k) {
    KernelMatrix K = projective_S(3, k, 2);
    MatrixXe m = eval_kernel(K, s, s, Quad(0));
    for (int i = 0; i < K.d; ++i)
      for (int j = 0; j < K.d; ++j) CHECK(m(i, j).is_rational());
  }
}

TEST_CASE("make_T") {
  KernelMatrix s0 = sphere_S(4, 0, 1);
  KernelMatrix t7 = make_T(s0, 7);
  CHECK(t7.entry(0, 0) == TriPoly(Rational(8)));  // (N-2) + 3 for constant entry 1

  // make_T(S, 3) = S(u,v,t) + the three diagonal sections
  KernelMatrix s1 = sphere_S(3, 1, 2);
  KernelMatrix t3 = make_T(s1, 3);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const TriPoly& e = s1.entry(i, j);
      TriPoly expect = e + e.diagonal_section(0) + e.diagonal_section(1) + e.diagonal_section(2);
      CHECK(t3.entry(i, j) == expect);
    }
  CHECK_THROWS_AS(make_T(s1, 2), std::invalid_argument);
}

TEST_CASE("triple sums over codes are PSD") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 12; ++trial) {
    std::vector<Vec3> code = unit_pool;
    std::shuffle(code.begin(), code.end(), rng);
    code.resize(3 + trial % 4);
    for (int k = 0; k <= 3; ++k) {
      int d = 1 + trial % 3;
      KernelMatrix K = sphere_S(3, k, d);
      MatrixXq sum = MatrixXq::Zero(d, d);
      for (const auto& x : code)
        for (const auto& y : code)
          for (const auto& z : code)
            sum += to_rational(
                eval_kernel(K, Quad(dot(x, y)), Quad(dot(y, z)), Quad(dot(z, x))));
      CHECK(psd_check(sum));
    }
  }
}
