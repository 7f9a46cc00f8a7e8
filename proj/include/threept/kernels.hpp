#pragma once

#include <vector>

#include "threept/exact_linalg.hpp"
#include "threept/gegenbauer.hpp"
#include "threept/poly.hpp"

namespace threept {

enum class Space { sphere, projective };

/// Matrix-valued three-point kernel: a d x d symmetric array of polynomials
/// in (u, v, t), each invariant under all permutations of the variables.
struct KernelMatrix {
  int n = 0;          // ambient dimension
  int k = 0;          // degree index
  int d = 0;          // truncation size
  Space parity = Space::sphere;
  std::vector<int> indices;    // the d monomial indices i1 retained
  std::vector<TriPoly> entries;  // row-major d x d

  const TriPoly& entry(int i, int j) const { return entries[i * d + j]; }
  TriPoly& entry(int i, int j) { return entries[i * d + j]; }
};

/// d x d truncation of the S_k^n kernel on the sphere S^{n-1}: entry (i, j)
/// is the symmetrization over permutations of (u,v,t) of
///   u^i v^j ((1-u^2)(1-v^2))^{k/2} P_k^{n-1}((t-uv)/sqrt((1-u^2)(1-v^2))).
KernelMatrix sphere_S(int n, int k, int d);

/// Projective variant: the submatrix of the sphere kernel with indices
/// congruent to k mod 2, truncated to the first d such indices.
KernelMatrix projective_S(int n, int k, int d);

/// Entrywise (N-2) S(u,v,t) + S(u,u,1) + S(v,v,1) + S(t,t,1).
KernelMatrix make_T(const KernelMatrix& S, int N);

/// Exact entrywise evaluation.
MatrixXe eval_kernel(const KernelMatrix& K, const Quad& u, const Quad& v, const Quad& t);

}  // namespace threept
