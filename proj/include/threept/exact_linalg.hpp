#pragma once

#include <numeric>
#include <vector>

#include "threept/quad.hpp"

namespace threept {

template <class S>
using DenseMatrix = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <class S>
using DenseVector = Eigen::Matrix<S, Eigen::Dynamic, 1>;

inline bool scalar_is_zero(const Rational& x) { return x == 0; }
inline bool scalar_is_zero(const Quad& x) { return x.is_zero(); }
inline int scalar_sign(const Rational& x) { return x.sign(); }
inline int scalar_sign(const Quad& x) { return x.sign(); }

template <class S>
bool is_symmetric(const DenseMatrix<S>& m) {
  if (m.rows() != m.cols()) return false;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = i + 1; j < m.cols(); ++j)
      if (!scalar_is_zero(S(m(i, j) - m(j, i)))) return false;
  return true;
}

namespace detail {

inline void lcm_accumulate(Integer& l, const Rational& x) {
  l = boost::multiprecision::lcm(l, denominator(x));
}
inline void lcm_accumulate(Integer& l, const Quad& x) {
  l = boost::multiprecision::lcm(l, denominator(x.a()));
  l = boost::multiprecision::lcm(l, denominator(x.b()));
}

/// Positive scale that clears all denominators; scaling preserves PSD.
template <class S>
Rational denominator_lcm(const DenseMatrix<S>& m) {
  Integer l = 1;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) lcm_accumulate(l, m(i, j));
  return Rational(l);
}

}  // namespace detail

/// Characteristic polynomial det(xI - m) by the Berkowitz method
/// (division-free).  Coefficients ascending; leading coefficient 1.
template <class S>
std::vector<S> charpoly(const DenseMatrix<S>& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("charpoly: matrix not square");
  const Eigen::Index n = m.rows();
  if (n == 0) return {S(1)};
  // descending coefficients of charpoly of leading principal blocks
  std::vector<S> poly = {S(1), S(-m(0, 0))};
  for (Eigen::Index r = 1; r < n; ++r) {
    // block A_{r+1} = [[M, C],[R, a]]
    std::vector<S> col(r + 2);
    col[0] = S(1);
    col[1] = S(-m(r, r));
    DenseVector<S> w = m.block(0, r, r, 1);  // C, then M^k C
    for (Eigen::Index k = 0; k + 2 <= r + 1; ++k) {
      S dot(0);
      for (Eigen::Index i = 0; i < r; ++i) dot += m(r, i) * w(i);
      col[k + 2] = -dot;
      if (k + 3 <= r + 1) {
        DenseVector<S> next(r);
        for (Eigen::Index i = 0; i < r; ++i) {
          S acc(0);
          for (Eigen::Index j = 0; j < r; ++j) acc += m(i, j) * w(j);
          next(i) = acc;
        }
        w = next;
      }
    }
    // multiply by the lower-triangular Toeplitz matrix with first column `col`
    std::vector<S> next(r + 2, S(0));
    for (size_t i = 0; i < col.size(); ++i)
      for (size_t j = 0; j < poly.size() && i + j < next.size(); ++j) next[i + j] += col[i] * poly[j];
    poly = std::move(next);
  }
  std::vector<S> asc(poly.rbegin(), poly.rend());
  return asc;
}

/// Exact PSD decision by symmetric elimination: zero pivots force zero rows.
template <class S>
bool psd_by_factorization(DenseMatrix<S> m) {
  const Eigen::Index n = m.rows();
  for (Eigen::Index k = 0; k < n; ++k) {
    int s = scalar_sign(m(k, k));
    if (s < 0) return false;
    if (s == 0) {
      for (Eigen::Index j = k + 1; j < n; ++j)
        if (!scalar_is_zero(m(k, j))) return false;
      continue;
    }
    for (Eigen::Index i = k + 1; i < n; ++i) {
      if (scalar_is_zero(m(i, k))) continue;
      S f = m(i, k) / m(k, k);
      for (Eigen::Index j = k; j < n; ++j) m(i, j) -= f * m(k, j);
    }
  }
  return true;
}

namespace detail {

/// Sign test on the characteristic polynomial: m is PSD iff
/// (-1)^d p(-x) has no negative coefficients.
template <class S>
bool psd_by_charpoly(const DenseMatrix<S>& block) {
  DenseMatrix<S> scaled = block * S(denominator_lcm(block));
  std::vector<S> p = charpoly(scaled);
  const int d = static_cast<int>(p.size()) - 1;
  for (int k = 0; k <= d; ++k) {
    int s = scalar_sign(p[k]);
    if (((d - k) % 2 == 0 && s < 0) || ((d - k) % 2 == 1 && s > 0)) return false;
  }
  return true;
}

}  // namespace detail

/// Exact positive-semidefiniteness of a symmetric matrix.  Decided by the
/// charpoly sign test and cross-checked by exact factorization; the matrix is
/// first split into connected components of its nonzero pattern.
template <class S>
bool psd_check(const DenseMatrix<S>& m) {
  if (!is_symmetric(m)) throw std::invalid_argument("psd_check: matrix not symmetric");
  const Eigen::Index n = m.rows();
  std::vector<int> comp(n, -1);
  int ncomp = 0;
  for (Eigen::Index s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    std::vector<Eigen::Index> stack = {s};
    comp[s] = ncomp;
    while (!stack.empty()) {
      Eigen::Index i = stack.back();
      stack.pop_back();
      for (Eigen::Index j = 0; j < n; ++j)
        if (comp[j] < 0 && !scalar_is_zero(m(i, j))) {
          comp[j] = ncomp;
          stack.push_back(j);
        }
    }
    ++ncomp;
  }
  for (int c = 0; c < ncomp; ++c) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index i = 0; i < n; ++i)
      if (comp[i] == c) idx.push_back(i);
    DenseMatrix<S> block(idx.size(), idx.size());
    for (size_t i = 0; i < idx.size(); ++i)
      for (size_t j = 0; j < idx.size(); ++j) block(i, j) = m(idx[i], idx[j]);
    bool by_poly = detail::psd_by_charpoly(block);
    bool by_fact = psd_by_factorization(block);
    if (by_poly != by_fact)
      throw std::logic_error("psd_check: charpoly and factorization disagree");
    if (!by_poly) return false;
  }
  return true;
}

/// <a, b> = tr(ab) = entrywise sum for symmetric matrices.
template <class S>
S mat_inner(const DenseMatrix<S>& a, const DenseMatrix<S>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("mat_inner: dimension mismatch");
  if (!is_symmetric(a) || !is_symmetric(b))
    throw std::invalid_argument("mat_inner: operands must be symmetric");
  S acc(0);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) acc += a(i, j) * b(i, j);
  return acc;
}

/// In-place reduced row echelon form over the rationals.
/// Returns pivot columns.
std::vector<Eigen::Index> rref(MatrixXq& m);

/// Basis for the right kernel of a, as matrix columns.
MatrixXq kernel_basis(const MatrixXq& a);

/// Basis for the column space of a, as matrix columns.
MatrixXq column_space_basis(const MatrixXq& a);

inline std::vector<Eigen::Index> rref(MatrixXq& m) {
  std::vector<Eigen::Index> pivots;
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < m.cols() && row < m.rows(); ++col) {
    Eigen::Index piv = -1;
    for (Eigen::Index i = row; i < m.rows(); ++i)
      if (m(i, col) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    m.row(row).swap(m.row(piv));
    m.row(row) /= m(row, col);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (i != row && m(i, col) != 0) m.row(i) -= m(i, col) * m.row(row);
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

inline MatrixXq kernel_basis(const MatrixXq& a) {
  MatrixXq m = a;
  std::vector<Eigen::Index> pivots = rref(m);
  std::vector<bool> is_pivot(a.cols(), false);
  for (Eigen::Index p : pivots) is_pivot[p] = true;
  MatrixXq basis(a.cols(), a.cols() - static_cast<Eigen::Index>(pivots.size()));
  Eigen::Index bc = 0;
  for (Eigen::Index free = 0; free < a.cols(); ++free) {
    if (is_pivot[free]) continue;
    VectorXq v = VectorXq::Zero(a.cols());
    v(free) = 1;
    for (size_t r = 0; r < pivots.size(); ++r) v(pivots[r]) = -m(static_cast<Eigen::Index>(r), free);
    basis.col(bc++) = v;
  }
  return basis;
}

inline MatrixXq column_space_basis(const MatrixXq& a) {
  MatrixXq m = a.transpose();
  rref(m);
  std::vector<Eigen::Index> nonzero;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    bool zero = true;
    for (Eigen::Index j = 0; j < m.cols() && zero; ++j) zero = (m(i, j) == 0);
    if (!zero) nonzero.push_back(i);
  }
  MatrixXq basis(a.rows(), static_cast<Eigen::Index>(nonzero.size()));
  for (size_t k = 0; k < nonzero.size(); ++k) basis.col(static_cast<Eigen::Index>(k)) = m.row(nonzero[k]).transpose();
  return basis;
}

}  // namespace threept
