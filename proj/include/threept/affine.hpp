#pragma once

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "threept/exact_linalg.hpp"

namespace threept {

/// Sparse linear expression over indexed unknowns, plus a constant term.
struct LinExpr {
  std::map<int, Rational> coeffs;
  Rational constant = 0;

  void add(int unknown, const Rational& c) {
    if (c == 0) return;
    auto [it, fresh] = coeffs.try_emplace(unknown, c);
    if (!fresh) {
      it->second += c;
      if (it->second == 0) coeffs.erase(it);
    }
  }
  LinExpr& operator+=(const LinExpr& o) {
    constant += o.constant;
    for (auto& [k, v] : o.coeffs) add(k, v);
    return *this;
  }
  LinExpr& operator*=(const Rational& s) {
    if (s == 0) {
      coeffs.clear();
      constant = 0;
      return *this;
    }
    constant *= s;
    for (auto& [k, v] : coeffs) v *= s;
    return *this;
  }
  friend LinExpr operator*(LinExpr e, const Rational& s) { return e *= s; }
  friend LinExpr operator+(LinExpr a, const LinExpr& b) { return a += b; }
  bool is_constant() const { return coeffs.empty(); }
};

struct AffineSolution {
  std::vector<std::string> unknowns;  // column labels
  VectorXq particular;
  MatrixXq basis;  // homogeneous directions as columns; 0 columns = unique solution

  VectorXq assignment(const VectorXq& lambda) const { return particular + basis * lambda; }
};

/// Thrown for inconsistent systems; carries a combination of input equations
/// that reduces to 0 = nonzero.
class InconsistentSystem : public std::runtime_error {
 public:
  InconsistentSystem(std::map<int, Rational> combination, Rational residual)
      : std::runtime_error("inconsistent linear system"),
        certificate_row(std::move(combination)),
        residual(std::move(residual)) {}
  std::map<int, Rational> certificate_row;  // equation index -> multiplier
  Rational residual;                        // the contradictory right-hand side
};

/// Exact affine linear system over named unknowns.
class LinearSystem {
 public:
  int unknown(const std::string& name) {
    auto [it, fresh] = index_.try_emplace(name, static_cast<int>(names_.size()));
    if (fresh) names_.push_back(name);
    return it->second;
  }
  int num_unknowns() const { return static_cast<int>(names_.size()); }
  int num_equations() const { return static_cast<int>(equations_.size()); }
  const std::vector<std::string>& unknown_names() const { return names_; }

  /// Adds the equation expr = 0 (the constant term is the negated rhs).
  void add_equation(LinExpr expr) { equations_.push_back(std::move(expr)); }

  /// Disables the per-row provenance bookkeeping (inconsistency errors then
  /// carry no certificate); worthwhile for systems with thousands of rows.
  void set_track_provenance(bool on) { track_provenance_ = on; }

  AffineSolution solve() const;

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> index_;
  std::vector<LinExpr> equations_;
  bool track_provenance_ = true;
};

inline AffineSolution LinearSystem::solve() const {
  const int ncols = num_unknowns();
  struct Row {
    std::vector<Rational> lhs;
    Rational rhs;
    std::map<int, Rational> prov;  // combination of original equations
  };
  std::vector<Row> rows;
  rows.reserve(equations_.size());
  for (size_t e = 0; e < equations_.size(); ++e) {
    Row r;
    r.lhs.assign(ncols, Rational(0));
    for (auto& [k, v] : equations_[e].coeffs) r.lhs[k] = v;
    r.rhs = -equations_[e].constant;
    if (track_provenance_) r.prov[static_cast<int>(e)] = 1;
    rows.push_back(std::move(r));
  }

  auto normalize = [&](Row& r) {
    // divide out the gcd of numerators over the lcm of denominators
    Integer num_gcd = 0, den_lcm = 1;
    for (const auto& x : r.lhs) {
      if (x == 0) continue;
      num_gcd = boost::multiprecision::gcd(num_gcd, numerator(x));
      den_lcm = boost::multiprecision::lcm(den_lcm, denominator(x));
    }
    if (r.rhs != 0) {
      num_gcd = boost::multiprecision::gcd(num_gcd, numerator(r.rhs));
      den_lcm = boost::multiprecision::lcm(den_lcm, denominator(r.rhs));
    }
    if (num_gcd == 0) return;
    Rational scale = Rational(den_lcm, num_gcd);
    for (auto& x : r.lhs)
      if (x != 0) x *= scale;
    r.rhs *= scale;
    for (auto& [k, v] : r.prov) v *= scale;
  };
  for (auto& r : rows) normalize(r);

  std::vector<int> pivot_row_of_col(ncols, -1);
  int rank = 0;
  for (int col = 0; col < ncols && rank < static_cast<int>(rows.size()); ++col) {
    int piv = -1;
    for (int i = rank; i < static_cast<int>(rows.size()); ++i)
      if (rows[i].lhs[col] != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(rows[rank], rows[piv]);
    {
      Rational inv = Rational(1) / rows[rank].lhs[col];
      for (auto& x : rows[rank].lhs) x *= inv;
      rows[rank].rhs *= inv;
      for (auto& [k, v] : rows[rank].prov) v *= inv;
    }
    for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
      if (i == rank || rows[i].lhs[col] == 0) continue;
      Rational f = rows[i].lhs[col];
      for (int j = 0; j < ncols; ++j)
        if (rows[rank].lhs[j] != 0) rows[i].lhs[j] -= f * rows[rank].lhs[j];
      rows[i].rhs -= f * rows[rank].rhs;
      for (auto& [k, v] : rows[rank].prov) {
        rows[i].prov[k] -= f * v;
        if (rows[i].prov[k] == 0) rows[i].prov.erase(k);
      }
      normalize(rows[i]);
    }
    pivot_row_of_col[col] = rank;
    ++rank;
  }

  for (int i = rank; i < static_cast<int>(rows.size()); ++i)
    if (rows[i].rhs != 0) throw InconsistentSystem(rows[i].prov, rows[i].rhs);

  // normalization may have rescaled pivot rows; divide out pivot coefficients
  AffineSolution sol;
  sol.unknowns = names_;
  sol.particular = VectorXq::Zero(ncols);
  for (int col = 0; col < ncols; ++col) {
    int r = pivot_row_of_col[col];
    if (r >= 0) sol.particular(col) = rows[r].rhs / rows[r].lhs[col];
  }

  const int nfree = ncols - rank;
  sol.basis = MatrixXq::Zero(ncols, nfree);
  int bc = 0;
  for (int free = 0; free < ncols; ++free) {
    if (pivot_row_of_col[free] >= 0) continue;
    sol.basis(free, bc) = 1;
    for (int col = 0; col < ncols; ++col) {
      int r = pivot_row_of_col[col];
      if (r >= 0) sol.basis(col, bc) = -rows[r].lhs[free] / rows[r].lhs[col];
    }
    ++bc;
  }
  return sol;
}

}  // namespace threept
