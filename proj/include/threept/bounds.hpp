#pragma once

#include <optional>
#include <string>
#include <vector>

#include "threept/affine.hpp"
#include "threept/codes.hpp"
#include "threept/symmetry.hpp"

namespace threept {

/// Root/multiplicity list for the potential perturbation.
using RootMultiset = std::vector<std::pair<Rational, int>>;

/// {0 cubed, 1/9 squared, 1/3 squared}.
RootMultiset default_perturbation_roots();

/// f - eps * prod (t - r)^m_r.
PolyQ perturb_potential(const PolyQ& f, const RootMultiset& roots, const Rational& eps);

/// Dual three-point program: unknowns are c, the entries of the kernel
/// multiplier blocks F_k, and the orbit coordinates of the invariant sum-of-
/// squares matrix M.  All constraints are exact linear equations; the
/// objective (N/2)((N-1)c - <F_0,J>) is to be maximized.
struct DualProgram {
  int N = 0;
  int n = 0;
  Space space = Space::projective;
  PolyQ f0;
  std::vector<std::pair<int, int>> blocks;  // (k, truncation d)
  int sos_degree = 0;
  Rational q = 0;  // quadratic context of the target code's data

  std::vector<KernelMatrix> That;  // one per block
  SymmetryBasis sym;               // monomials of degree <= sos_degree

  std::vector<LinExpr> constraints;  // each expression = 0
  int coefficient_equations = 0;     // matching equations of degree <= 2*sos_degree
  LinExpr objective;

  // target-code sharpness data (empty when no target was given)
  std::vector<std::array<Quad, 3>> target_triples;  // class representatives
  std::vector<Rational> target_counts;
  std::vector<MatrixXq> slack_matrices;  // N(N-2) delta_{k0} J + sum counts T_k

  // unknown layout
  int c_index() const { return 0; }
  int f_index(int block, int i, int j) const;  // entry (i,j), any order
  int orbit_index(int o) const;
  int unknown_count() const;
  std::vector<std::string> unknown_names() const;
  int block_dim(int b) const { return blocks[static_cast<size_t>(b)].second; }

  /// Reconstructs full matrices from an assignment of all unknowns.
  Rational c_of(const VectorXq& x) const { return x(0); }
  MatrixXq f_block_of(const VectorXq& x, int b) const;
  MatrixXq m_of(const VectorXq& x) const;
};

/// Exact dual certificate: the full matrices, reconstructed from whatever
/// parameterization produced them.
struct Certificate {
  Rational c;
  std::vector<MatrixXq> F;
  MatrixXq M;
  std::vector<Exponent> monomial_order;  // lexicographic
};

DualProgram build_dual_program(int N, int n, Space space, const PolyQ& f0,
                               const std::vector<std::pair<int, int>>& blocks,
                               int sos_degree, const Code* target_code);

/// The standard block sizes (5,4,4,3,3,2) for k = 0..5.
std::vector<std::pair<int, int>> rhombic_blocks();

/// Value + first-derivative equality of H with the symmetrized potential at
/// the given triples; equations over the program's unknowns (c and F only).
std::vector<LinExpr> tangency_constraints(const DualProgram& prog,
                                          const std::vector<std::array<Quad, 3>>& triples);

Rational bound_value(const Rational& c, const MatrixXq& F0, int N);

struct TwoPointResult {
  Rational bound;
  Rational c;
  std::vector<Rational> a;  // a[k] multiplies P_k^n, k >= 1
  bool exact = false;       // true when certified by an exact expansion
};

/// Yudin-style two-point bound for projective codes: c + sum a_k P_k(t) <=
/// f(t^2) with a_k >= 0, maximizing (N/2)((N-1)c - sum a_k).  Solved exactly
/// when f(t^2) itself has a nonnegative Gegenbauer expansion, numerically
/// (univariate sum-of-squares) otherwise.
TwoPointResult two_point_bound(int N, int n, const PolyQ& f, int max_degree);

/// Restricted primal: minimize the energy objective over triple weights
/// supported on the given classes, subject to the kernel sum constraints.
/// Returns a high-precision rational approximation of the optimum.
Rational primal_restricted(int N, int n, const PolyQ& f0,
                           const std::vector<std::array<Quad, 3>>& support,
                           const std::vector<std::pair<int, int>>& blocks,
                           unsigned precision_bits);

}  // namespace threept
