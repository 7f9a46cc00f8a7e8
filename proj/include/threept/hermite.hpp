#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "threept/poly.hpp"

namespace threept {

/// Interpolation nodes with multiplicities; nodes distinct.
struct Multiset {
  std::vector<std::pair<Quad, int>> entries;  // (node, multiplicity), mult >= 1

  int total_multiplicity() const {
    int m = 0;
    for (auto& [t, k] : entries) m += k;
    return m;
  }
  /// Nodes expanded with repetition, equal nodes adjacent.
  std::vector<Quad> expanded() const {
    std::vector<Quad> z;
    for (auto& [t, k] : entries)
      for (int i = 0; i < k; ++i) z.push_back(t);
    return z;
  }
};

/// Each nonzero squared inner product twice, 0 with multiplicity mult_zero,
/// nondecreasing.  Values must lie in [0, 1).
inline Multiset reduction_multiset(std::vector<Quad> squared_inner_products, int mult_zero) {
  for (auto& x : squared_inner_products) {
    if (x.sign() < 0 || (x - Quad(1)).sign() >= 0)
      throw std::invalid_argument("reduction_multiset: squared inner products must lie in [0,1)");
  }
  std::sort(squared_inner_products.begin(), squared_inner_products.end());
  Multiset T;
  bool saw_zero = false;
  for (const auto& x : squared_inner_products) {
    if (x.is_zero()) {
      saw_zero = true;
      continue;
    }
    T.entries.emplace_back(x, 2);
  }
  if (saw_zero && mult_zero > 0) T.entries.insert(T.entries.begin(), {Quad(0), mult_zero});
  if (T.total_multiplicity() < 1) throw std::invalid_argument("reduction_multiset: empty multiset");
  return T;
}

/// [1, (t-t1), (t-t1)(t-t2), ..., prod_{i<M}(t-t_i)] for nodes t1..tM.
template <class S>
std::vector<Poly<S>> partial_products(const std::vector<S>& nodes) {
  if (nodes.empty()) throw std::invalid_argument("partial_products: empty node list");
  std::vector<Poly<S>> basis;
  Poly<S> acc(S(1));
  basis.push_back(acc);
  for (size_t i = 0; i + 1 < nodes.size(); ++i) {
    acc = acc * Poly<S>(std::vector<S>{-nodes[i], S(1)});
    basis.push_back(acc);
  }
  return basis;
}

/// Hermite interpolant of f on T: the unique polynomial of degree
/// < total multiplicity matching f to order mult(t) at every node t.
/// Confluent Newton divided differences.
inline PolyX hermite_interpolate(const Multiset& T, const PolyX& f) {
  if (T.entries.empty()) throw std::invalid_argument("hermite_interpolate: empty multiset");
  const std::vector<Quad> z = T.expanded();
  const int M = static_cast<int>(z.size());

  // derivatives of f scaled by 1/j!
  int max_mult = 0;
  for (auto& [t, k] : T.entries) max_mult = std::max(max_mult, k);
  std::vector<PolyX> taylor(max_mult);
  {
    PolyX d = f;
    Rational jf = 1;
    for (int j = 0; j < max_mult; ++j) {
      if (j > 0) {
        d = d.derivative();
        jf *= j;
      }
      taylor[j] = d * Quad(Rational(1) / jf);
    }
  }

  // dd[w][i] = divided difference over z[i..i+w]
  std::vector<std::vector<Quad>> dd(M);
  dd[0].resize(M);
  for (int i = 0; i < M; ++i) dd[0][i] = f.eval<Quad>(z[i]);
  for (int w = 1; w < M; ++w) {
    dd[w].resize(M - w);
    for (int i = 0; i + w < M; ++i) {
      Quad span = z[i + w] - z[i];
      if (span.is_zero())
        dd[w][i] = taylor[w].eval<Quad>(z[i]);
      else
        dd[w][i] = (dd[w - 1][i + 1] - dd[w - 1][i]) / span;
    }
  }

  PolyX h;
  PolyX basis(Quad(1));
  for (int k = 0; k < M; ++k) {
    if (k > 0) basis = basis * PolyX(std::vector<Quad>{-z[k - 1], Quad(1)});
    h += basis * dd[k][0];
  }
  return h;
}

inline PolyQ hermite_interpolate(const Multiset& T, const PolyQ& f) {
  return to_rational_poly(hermite_interpolate(T, to_quad_poly(f)));
}

}  // namespace threept
