#include "threept/kernels.hpp"

namespace threept {

namespace {

/// Unsymmetrized entry for monomial indices (i1, i2).  The Gegenbauer
/// polynomial has the parity of k, so each term
///   c_j (t - uv)^j ((1-u^2)(1-v^2))^{(k-j)/2}
/// is a genuine polynomial.
TriPoly raw_entry(int n, int k, int i1, int i2) {
  const PolyQ pk = gegenbauer(n - 1, k);
  const TriPoly u = TriPoly::u(), v = TriPoly::v(), t = TriPoly::t();
  const TriPoly w = (TriPoly(Rational(1)) - u * u) * (TriPoly(Rational(1)) - v * v);
  const TriPoly tuv = t - u * v;

  TriPoly acc;
  TriPoly tuv_pow(Rational(1));
  for (int j = 0; j <= pk.degree(); ++j) {
    if (j > 0) tuv_pow = tuv_pow * tuv;
    Rational c = pk.coeff(j);
    if (c == 0) continue;
    if ((k - j) % 2 != 0) throw std::logic_error("gegenbauer parity violated");
    TriPoly term = tuv_pow * c;
    for (int p = 0; p < (k - j) / 2; ++p) term = term * w;
    acc += term;
  }
  TriPoly prefix = TriPoly::monomial({i1, i2, 0}, Rational(1));
  return prefix * acc;
}

KernelMatrix build(int n, int k, std::vector<int> indices, Space parity) {
  KernelMatrix K;
  K.n = n;
  K.k = k;
  K.d = static_cast<int>(indices.size());
  K.parity = parity;
  K.indices = std::move(indices);
  K.entries.resize(static_cast<size_t>(K.d) * K.d);
  for (int i = 0; i < K.d; ++i)
    for (int j = i; j < K.d; ++j) {
      TriPoly e = raw_entry(n, k, K.indices[i], K.indices[j]).symmetrized();
      K.entry(i, j) = e;
      if (j != i) K.entry(j, i) = e;
    }
  return K;
}

}  // namespace

KernelMatrix sphere_S(int n, int k, int d) {
  if (n < 3) throw std::invalid_argument("sphere_S: need n >= 3");
  if (k < 0 || d < 1) throw std::invalid_argument("sphere_S: need k >= 0, d >= 1");
  std::vector<int> idx(d);
  for (int i = 0; i < d; ++i) idx[i] = i;
  return build(n, k, std::move(idx), Space::sphere);
}

KernelMatrix projective_S(int n, int k, int d) {
  if (n < 3) throw std::invalid_argument("projective_S: need n >= 3");
  if (k < 0 || d < 1) throw std::invalid_argument("projective_S: need k >= 0, d >= 1");
  std::vector<int> idx(d);
  for (int i = 0; i < d; ++i) idx[i] = k % 2 + 2 * i;
  return build(n, k, std::move(idx), Space::projective);
}

KernelMatrix make_T(const KernelMatrix& S, int N) {
  if (N < 3) throw std::invalid_argument("make_T: need N >= 3");
  KernelMatrix T = S;
  for (auto& e : T.entries) {
    TriPoly shifted = e * Rational(N - 2);
    shifted += e.diagonal_section(0);
    shifted += e.diagonal_section(1);
    shifted += e.diagonal_section(2);
    e = std::move(shifted);
  }
  return T;
}

MatrixXe eval_kernel(const KernelMatrix& K, const Quad& u, const Quad& v, const Quad& t) {
  MatrixXe m(K.d, K.d);
  for (int i = 0; i < K.d; ++i)
    for (int j = i; j < K.d; ++j) {
      m(i, j) = K.entry(i, j).eval<Quad>(u, v, t);
      if (j != i) m(j, i) = m(i, j);
    }
  return m;
}

}  // namespace threept
