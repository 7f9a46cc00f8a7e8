#pragma once

#include <array>
#include <map>
#include <vector>

#include "threept/quad.hpp"

namespace threept {

/// Dense univariate polynomial, coefficients ascending by degree.
template <class S>
class Poly {
 public:
  Poly() = default;
  Poly(const S& c) { coeffs_.push_back(c); normalize(); }  // NOLINT: implicit
  explicit Poly(std::vector<S> coeffs) : coeffs_(std::move(coeffs)) { normalize(); }

  static Poly variable() { return Poly(std::vector<S>{S(0), S(1)}); }

  bool is_zero() const { return coeffs_.empty(); }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }  // -1 for zero poly
  S coeff(int k) const {
    return (k >= 0 && k < static_cast<int>(coeffs_.size())) ? coeffs_[k] : S(0);
  }
  const std::vector<S>& coeffs() const { return coeffs_; }

  Poly& operator+=(const Poly& o) {
    if (coeffs_.size() < o.coeffs_.size()) coeffs_.resize(o.coeffs_.size(), S(0));
    for (size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    normalize();
    return *this;
  }
  Poly& operator-=(const Poly& o) { return *this += -o; }
  Poly operator-() const {
    Poly r = *this;
    for (auto& c : r.coeffs_) c = -c;
    return r;
  }
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    std::vector<S> c(a.coeffs_.size() + b.coeffs_.size() - 1, S(0));
    for (size_t i = 0; i < a.coeffs_.size(); ++i)
      for (size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return Poly(std::move(c));
  }
  friend Poly operator*(Poly a, const S& s) {
    for (auto& c : a.coeffs_) c = c * s;
    a.normalize();
    return a;
  }
  Poly& operator/=(const S& s) {
    for (auto& c : coeffs_) c = c / s;
    return *this;
  }
  friend bool operator==(const Poly& a, const Poly& b) { return a.coeffs_ == b.coeffs_; }

  template <class T>
  T eval(const T& x) const {
    T acc(0);
    for (size_t i = coeffs_.size(); i-- > 0;) acc = acc * x + T(coeffs_[i]);
    return acc;
  }

  Poly derivative() const {
    if (coeffs_.size() <= 1) return Poly();
    std::vector<S> c(coeffs_.size() - 1);
    for (size_t i = 1; i < coeffs_.size(); ++i) c[i - 1] = coeffs_[i] * S(static_cast<long>(i));
    return Poly(std::move(c));
  }

  /// Composition this(g(t)).
  Poly compose(const Poly& g) const {
    Poly acc;
    for (size_t i = coeffs_.size(); i-- > 0;) acc = acc * g + Poly(coeffs_[i]);
    return acc;
  }

 private:
  void normalize() {
    while (!coeffs_.empty() && scalar_is_zero_poly(coeffs_.back())) coeffs_.pop_back();
  }
  static bool scalar_is_zero_poly(const Rational& x) { return x == 0; }
  static bool scalar_is_zero_poly(const Quad& x) { return x.is_zero(); }

  std::vector<S> coeffs_;
};

using PolyQ = Poly<Rational>;
using PolyX = Poly<Quad>;

inline PolyX to_quad_poly(const PolyQ& p) {
  std::vector<Quad> c;
  c.reserve(p.coeffs().size());
  for (const auto& x : p.coeffs()) c.emplace_back(x);
  return PolyX(std::move(c));
}

/// Converts a polynomial with rational-valued Quad coefficients back to PolyQ.
inline PolyQ to_rational_poly(const PolyX& p) {
  std::vector<Rational> c;
  c.reserve(p.coeffs().size());
  for (const auto& x : p.coeffs()) c.push_back(x.rational_value());
  return PolyQ(std::move(c));
}

using Exponent = std::array<int, 3>;  // powers of (u, v, t)

/// Sparse trivariate polynomial in u, v, t.
template <class S>
class TriPolyT {
 public:
  TriPolyT() = default;
  TriPolyT(const S& c) {  // NOLINT: implicit
    if (!is_zero_scalar(c)) terms_[{0, 0, 0}] = c;
  }

  static TriPolyT monomial(const Exponent& e, const S& c) {
    TriPolyT p;
    if (!is_zero_scalar(c)) p.terms_[e] = c;
    return p;
  }
  static TriPolyT u() { return monomial({1, 0, 0}, S(1)); }
  static TriPolyT v() { return monomial({0, 1, 0}, S(1)); }
  static TriPolyT t() { return monomial({0, 0, 1}, S(1)); }

  const std::map<Exponent, S>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  S coeff(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? S(0) : it->second;
  }
  int total_degree() const {
    int d = -1;
    for (auto& [e, c] : terms_) d = std::max(d, e[0] + e[1] + e[2]);
    return d;
  }

  void add_term(const Exponent& e, const S& c) {
    if (is_zero_scalar(c)) return;
    auto [it, fresh] = terms_.try_emplace(e, c);
    if (!fresh) {
      it->second += c;
      if (is_zero_scalar(it->second)) terms_.erase(it);
    }
  }

  TriPolyT& operator+=(const TriPolyT& o) {
    for (auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  TriPolyT& operator-=(const TriPolyT& o) {
    for (auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  friend TriPolyT operator+(TriPolyT a, const TriPolyT& b) { return a += b; }
  friend TriPolyT operator-(TriPolyT a, const TriPolyT& b) { return a -= b; }
  friend TriPolyT operator*(const TriPolyT& a, const TriPolyT& b) {
    TriPolyT r;
    for (auto& [ea, ca] : a.terms_)
      for (auto& [eb, cb] : b.terms_)
        r.add_term({ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]}, ca * cb);
    return r;
  }
  friend TriPolyT operator*(TriPolyT a, const S& s) {
    TriPolyT r;
    for (auto& [e, c] : a.terms_) r.add_term(e, c * s);
    return r;
  }
  friend bool operator==(const TriPolyT& a, const TriPolyT& b) { return a.terms_ == b.terms_; }

  template <class T>
  T eval(const T& u, const T& v, const T& t) const {
    T acc(0);
    for (auto& [e, c] : terms_) acc += T(c) * ipow(u, e[0]) * ipow(v, e[1]) * ipow(t, e[2]);
    return acc;
  }

  TriPolyT derivative(int var) const {
    TriPolyT r;
    for (auto& [e, c] : terms_) {
      if (e[var] == 0) continue;
      Exponent d = e;
      d[var] -= 1;
      r.add_term(d, c * S(static_cast<long>(e[var])));
    }
    return r;
  }

  /// Image under a permutation of the variables: exponent i goes to slot perm[i].
  TriPolyT permuted(const std::array<int, 3>& perm) const {
    TriPolyT r;
    for (auto& [e, c] : terms_) {
      Exponent f{};
      for (int i = 0; i < 3; ++i) f[perm[i]] = e[i];
      r.add_term(f, c);
    }
    return r;
  }

  /// Average over the 6 permutations of (u, v, t).
  TriPolyT symmetrized() const {
    static const std::array<std::array<int, 3>, 6> perms = {
        {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
    TriPolyT acc;
    for (auto& p : perms) acc += permuted(p);
    return acc * (S(1) / S(6));
  }

  /// Negates the variables listed in `flips` (e.g. {0,1} for u,v -> -u,-v).
  TriPolyT sign_flipped(std::initializer_list<int> flips) const {
    TriPolyT r;
    for (auto& [e, c] : terms_) {
      int parity = 0;
      for (int f : flips) parity += e[f];
      r.add_term(e, (parity % 2 == 0) ? c : -c);
    }
    return r;
  }

  /// Substitutes (u,v,t) -> (x,x,1) where x is the variable with index `var`:
  /// each monomial u^i v^j t^k becomes x^(i+j).
  TriPolyT diagonal_section(int var) const {
    TriPolyT r;
    for (auto& [e, c] : terms_) {
      Exponent f{0, 0, 0};
      f[var] = e[0] + e[1];
      r.add_term(f, c);
    }
    return r;
  }

 private:
  static bool is_zero_scalar(const Rational& x) { return x == 0; }
  static bool is_zero_scalar(const Quad& x) { return x.is_zero(); }
  template <class T>
  static T ipow(const T& x, int k) {
    T acc(1);
    for (int i = 0; i < k; ++i) acc = acc * x;
    return acc;
  }

  std::map<Exponent, S> terms_;
};

using TriPoly = TriPolyT<Rational>;

}  // namespace threept
