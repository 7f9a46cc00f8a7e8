#pragma once

#include <array>
#include <vector>

#include "threept/poly.hpp"

namespace threept {

/// All exponent triples (i,j,k) with i+j+k <= D, ordered lexicographically.
std::vector<Exponent> monomials(int D);

/// Signed symmetry of the monomial basis: a permutation of (u,v,t) followed
/// by negation of an even number of variables.  There are 24 such elements.
struct SignedPermutation {
  std::array<int, 3> perm;   // exponent slot i moves to slot perm[i]
  std::array<bool, 3> flip;  // negated variables (even count)

  Exponent apply(const Exponent& e) const {
    Exponent f{};
    for (int i = 0; i < 3; ++i) f[perm[i]] = e[i];
    return f;
  }
  int sign(const Exponent& e) const {  // sign picked up by the monomial
    Exponent f = apply(e);
    int parity = 0;
    for (int i = 0; i < 3; ++i)
      if (flip[i]) parity += f[i];
    return parity % 2 == 0 ? 1 : -1;
  }
};

const std::vector<SignedPermutation>& signed_permutations();

/// Basis of the space of symmetric matrices over the degree-<=D monomials
/// that are invariant under all 24 signed permutations, parameterized by
/// signed orbits of unordered monomial pairs.  Pairs whose orbit identifies
/// an entry with its own negation carry a forced-zero parameter and are
/// omitted.  Entries of distinct sign characters always cancel, so every
/// invariant matrix is block diagonal over the four character classes.
struct SymmetryBasis {
  struct Orbit {
    std::vector<std::array<int, 3>> entries;  // (i, j, sign) with i <= j
  };

  int D = 0;
  std::vector<Exponent> monos;   // lexicographic
  std::vector<int> sign_class;   // 0..3 per monomial (0 = all parities equal)
  std::vector<Orbit> orbits;

  int size() const { return static_cast<int>(monos.size()); }
  int index_of(const Exponent& e) const;

  /// z^T S_o z for the orbit's 0/±1 matrix S_o.
  TriPoly orbit_form(const Orbit& o) const;

  /// Full invariant matrix Sum_o lambda_o S_o.
  MatrixXq assemble(const VectorXq& lambda) const;

  /// Coefficients of the orbit matrices acting on a vector: returns S_o z
  /// for the given z, one column per orbit (used for kernel constraints).
  MatrixXe apply_orbits(const VectorXe& z) const;
};

SymmetryBasis build_symmetry_basis(int D);

}  // namespace threept
