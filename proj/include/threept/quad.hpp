#pragma once

#include <Eigen/Dense>
#include <array>
#include <boost/multiprecision/eigen.hpp>
#include <ostream>

#include "threept/rational.hpp"

namespace threept {

/// Element a + b*sqrt(q) of the quadratic extension Q(sqrt(q)).
///
/// A purely rational value carries b = 0 and q = 0, and is compatible with any
/// context.  Mixing two values with distinct nonzero q is an error: each
/// arithmetic context uses a single radical.
class Quad {
 public:
  Quad() : a_(0), b_(0), q_(0) {}
  Quad(const Rational& a) : a_(a), b_(0), q_(0) {}  // NOLINT: implicit
  Quad(long a) : a_(a), b_(0), q_(0) {}             // NOLINT: implicit
  Quad(const Rational& a, const Rational& b, const Rational& q) : a_(a), b_(b), q_(q) {
    normalize();
  }

  static Quad sqrt_of(const Rational& q) { return Quad(0, 1, q); }

  const Rational& a() const { return a_; }
  const Rational& b() const { return b_; }
  const Rational& q() const { return q_; }
  bool is_rational() const { return b_ == 0; }

  static Rational join_context(const Rational& p, const Rational& q) {
    if (p == 0) return q;
    if (q == 0) return p;
    if (p != q) throw std::invalid_argument("quadratic context mismatch: sqrt(" + threept::to_string(p) +
                                            ") vs sqrt(" + threept::to_string(q) + ")");
    return p;
  }

  Quad operator-() const { return Quad(-a_, -b_, q_); }

  Quad& operator+=(const Quad& o) {
    q_ = join_context(q_, o.q_);
    a_ += o.a_;
    b_ += o.b_;
    normalize();
    return *this;
  }
  Quad& operator-=(const Quad& o) { return *this += (-o); }
  Quad& operator*=(const Quad& o) {
    Rational q = join_context(q_, o.q_);
    Rational a = a_ * o.a_ + b_ * o.b_ * q;
    Rational b = a_ * o.b_ + b_ * o.a_;
    a_ = a;
    b_ = b;
    q_ = q;
    normalize();
    return *this;
  }
  Quad& operator/=(const Quad& o) { return *this *= o.inverse(); }

  Quad inverse() const {
    if (is_zero()) throw std::domain_error("division by zero");
    Rational n = a_ * a_ - b_ * b_ * q_;
    return Quad(a_ / n, -b_ / n, q_);
  }

  Quad conj() const { return Quad(a_, -b_, q_); }

  bool is_zero() const { return a_ == 0 && b_ == 0; }

  /// Exact sign of a + b*sqrt(q).
  int sign() const {
    if (b_ == 0) return threept::sign(a_);
    if (a_ == 0) return threept::sign(b_);
    int sa = threept::sign(a_), sb = threept::sign(b_);
    if (sa == sb) return sa;
    // a and b*sqrt(q) compete: sign is that of a^2 - b^2 q, carried by a.
    return sa * threept::sign(a_ * a_ - b_ * b_ * q_);
  }

  /// Exact square root within the same field, if one exists.
  bool sqrt_in_field(Quad& out) const {
    if (sign() < 0) return false;
    if (b_ == 0) {
      Rational c;
      if (rational_sqrt(a_, c)) {
        out = Quad(c);
        return true;
      }
      if (q_ == 0) {
        // try a = d^2 * q for any caller-supplied context later; without a
        // context a pure rational non-square has no root here
        return false;
      }
      Rational d2 = a_ / q_, d;
      if (rational_sqrt(d2, d)) {
        out = Quad(0, d, q_);
        return true;
      }
      return false;
    }
    Rational disc = a_ * a_ - b_ * b_ * q_, s;
    if (!rational_sqrt(disc, s)) return false;
    const std::array<Rational, 2> halves = {Rational((a_ + s) / 2), Rational((a_ - s) / 2)};
    for (const Rational& c2 : halves) {
      Rational c;
      if (c2 >= 0 && rational_sqrt(c2, c) && c != 0) {
        Rational d = b_ / (2 * c);
        Quad cand(c, d, q_);
        if (cand * cand == *this && cand.sign() >= 0) {
          out = cand;
          return true;
        }
        cand = -cand;
        if (cand * cand == *this && cand.sign() >= 0) {
          out = cand;
          return true;
        }
      }
    }
    return false;
  }

  /// Like sqrt_in_field but may adopt a caller-provided context for pure
  /// rational non-squares (e.g. sqrt(1/3) with q = 1/3).
  bool sqrt_in_context(const Rational& q, Quad& out) const {
    if (sign() < 0) return false;
    if (b_ == 0) {
      Rational c;
      if (rational_sqrt(a_, c)) {
        out = Quad(c);
        return true;
      }
      if (q != 0) {
        Rational d;
        if (rational_sqrt(a_ / q, d)) {
          out = Quad(0, d, q);
          return true;
        }
      }
      return false;
    }
    join_context(q_, q);
    return sqrt_in_field(out);
  }

  friend Quad operator+(Quad x, const Quad& y) { return x += y; }
  friend Quad operator-(Quad x, const Quad& y) { return x -= y; }
  friend Quad operator*(Quad x, const Quad& y) { return x *= y; }
  friend Quad operator/(Quad x, const Quad& y) { return x /= y; }
  friend bool operator==(const Quad& x, const Quad& y) {
    return x.a_ == y.a_ && x.b_ == y.b_ && (x.b_ == 0 || x.q_ == y.q_);
  }
  friend bool operator!=(const Quad& x, const Quad& y) { return !(x == y); }
  friend bool operator<(const Quad& x, const Quad& y) { return (x - y).sign() < 0; }
  friend bool operator<=(const Quad& x, const Quad& y) { return (x - y).sign() <= 0; }
  friend bool operator>(const Quad& x, const Quad& y) { return (x - y).sign() > 0; }
  friend bool operator>=(const Quad& x, const Quad& y) { return (x - y).sign() >= 0; }

  friend std::ostream& operator<<(std::ostream& os, const Quad& x) {
    if (x.b_ == 0) return os << threept::to_string(x.a_);
    os << threept::to_string(x.a_) << (x.b_ > 0 ? "+" : "") << threept::to_string(x.b_) << "*sqrt("
       << threept::to_string(x.q_) << ")";
    return os;
  }

  /// Rational part must carry the whole value; throws otherwise.
  Rational rational_value() const {
    if (b_ != 0) throw std::domain_error("value is irrational");
    return a_;
  }

 private:
  void normalize() {
    if (b_ == 0) q_ = 0;
  }

  Rational a_, b_, q_;
};

inline Quad abs(const Quad& x) { return x.sign() < 0 ? -x : x; }

using MatrixXq = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;
using VectorXq = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;
using MatrixXe = Eigen::Matrix<Quad, Eigen::Dynamic, Eigen::Dynamic>;
using VectorXe = Eigen::Matrix<Quad, Eigen::Dynamic, 1>;

}  // namespace threept

namespace Eigen {
template <>
struct NumTraits<threept::Quad> {
  using Real = threept::Quad;
  using NonInteger = threept::Quad;
  using Nested = threept::Quad;
  using Literal = long;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 10,
    AddCost = 50,
    MulCost = 100
  };
  static int digits10() { return 0; }
};
}  // namespace Eigen
