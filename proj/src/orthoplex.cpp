#include "threept/orthoplex.hpp"

#include <stdexcept>

#include "threept/gegenbauer.hpp"

namespace threept {

std::string to_string(OrthoplexStatus s) {
  switch (s) {
    case OrthoplexStatus::meets:
      return "meets";
    case OrthoplexStatus::sharp:
      return "sharp";
    case OrthoplexStatus::violates:
      return "violates";
    case OrthoplexStatus::not_applicable:
      return "not_applicable";
  }
  return "?";
}

std::pair<bool, RadScalar> applicable_bound(int n, int N_antipodal) {
  if (n < 2) throw std::invalid_argument("applicable_bound: need n >= 2");
  if (N_antipodal % 2 != 0)
    throw std::invalid_argument("applicable_bound: antipodal code size must be even");
  const int half = N_antipodal / 2;
  bool applicable = n * (n + 1) / 2 < half && half <= n * (n + 1) - 2;
  return {applicable, RadScalar::sqrt_nonneg(Quad(Rational(1, n)))};
}

Quad phi_inner(const VectorXe& x, const VectorXe& y) {
  if (x.size() != y.size() || x.size() == 0)
    throw std::invalid_argument("phi_inner: dimension mismatch");
  const Eigen::Index n = x.size();
  const Rational inv_n(1, static_cast<long>(n));
  Quad acc(0);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      Quad a = x(i) * x(j), b = y(i) * y(j);
      if (i == j) {
        a -= Quad(inv_n);
        b -= Quad(inv_n);
      }
      acc += a * b;
    }
  return acc / Quad(Rational(1) - inv_n);
}

MatrixXe transform_code(const Code& c, const PolyQ& f) {
  if (f.eval<Rational>(Rational(1)) != 1)
    throw std::invalid_argument("transform_code: f(1) must equal 1");
  for (const Rational& a : gegenbauer_expansion(c.n, f))
    if (a < 0)
      throw std::invalid_argument("transform_code: negative Gegenbauer coefficient");
  const int L = c.lifts();
  MatrixXe gram(L, L);
  for (int i = 0; i < L; ++i)
    for (int j = 0; j < L; ++j) {
      auto t = c.gram(i, j).in_field(c.q);
      if (!t)
        throw std::domain_error("transform_code: inner product outside the quadratic field");
      gram(i, j) = f.eval<Quad>(*t);
    }
  return gram;
}

MatrixXe transform_code(const Code& c) { return transform_code(c, gegenbauer(c.n, 2)); }

OrthoplexVerdict check_code(const Code& c) {
  if (!c.line_like())
    throw std::invalid_argument("check_code: code must be antipodal or projective");
  OrthoplexVerdict v;
  auto [applicable, bound] = applicable_bound(c.n, 2 * c.lifts());
  v.applicable = applicable;
  v.bound_cos = bound;
  if (!applicable) return v;
  CodeReport rep = verify_code(c, bound);
  v.code_max_cos = rep.max_cos;
  if (rep.max_cos == bound)
    v.status = OrthoplexStatus::sharp;
  else if (rep.max_cos > bound)
    v.status = OrthoplexStatus::meets;
  else
    v.status = OrthoplexStatus::violates;
  return v;
}

}  // namespace threept
