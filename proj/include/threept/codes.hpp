#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "threept/kernels.hpp"
#include "threept/poly.hpp"

namespace threept {

/// Value sgn * sqrt(sq) with sq in the quadratic field.  Squared inner
/// products of catalog codes always live in the field even when the inner
/// products themselves do not (e.g. mixed vertex/face pairs of icosaVF16).
class RadScalar {
 public:
  RadScalar() : sgn_(0), sq_(0) {}
  RadScalar(int sgn, Quad sq) : sgn_(sgn), sq_(std::move(sq)) {
    if (sq_.sign() < 0) throw std::invalid_argument("RadScalar: negative square");
    if (sq_.is_zero()) sgn_ = 0;
    if (!sq_.is_zero() && sgn_ == 0)
      throw std::invalid_argument("RadScalar: zero sign with nonzero square");
  }
  static RadScalar from_quad(const Quad& x) { return RadScalar(x.sign(), x * x); }
  static RadScalar sqrt_nonneg(const Quad& sq) { return RadScalar(sq.sign() > 0 ? 1 : 0, sq); }

  int sign() const { return sgn_; }
  const Quad& square() const { return sq_; }
  bool is_zero() const { return sgn_ == 0; }

  RadScalar operator-() const {
    RadScalar r = *this;
    r.sgn_ = -r.sgn_;
    return r;
  }
  friend RadScalar operator*(const RadScalar& a, const RadScalar& b) {
    return RadScalar(a.sgn_ * b.sgn_, a.sq_ * b.sq_);
  }
  RadScalar abs() const { return RadScalar(sgn_ == 0 ? 0 : 1, sq_); }

  /// Exact value as a field element when the square root exists there.
  std::optional<Quad> in_field(const Rational& q) const {
    Quad root;
    if (!sq_.sqrt_in_context(q, root)) return std::nullopt;
    return sgn_ < 0 ? -root : root;
  }

  friend bool operator==(const RadScalar& a, const RadScalar& b) {
    return a.sgn_ == b.sgn_ && a.sq_ == b.sq_;
  }
  friend bool operator!=(const RadScalar& a, const RadScalar& b) { return !(a == b); }
  friend bool operator<(const RadScalar& a, const RadScalar& b) {
    if (a.sgn_ != b.sgn_) return a.sgn_ < b.sgn_;
    if (a.sgn_ >= 0) return a.sq_ < b.sq_;
    return b.sq_ < a.sq_;
  }
  friend bool operator<=(const RadScalar& a, const RadScalar& b) { return a < b || a == b; }
  friend bool operator>(const RadScalar& a, const RadScalar& b) { return b < a; }
  friend bool operator>=(const RadScalar& a, const RadScalar& b) { return b <= a; }

  std::string str() const;

 private:
  int sgn_;
  Quad sq_;
};

/// Ordered inner-product triple (u, v, t) = (<x,y>, <y,z>, <z,x>).
using Triple = std::array<RadScalar, 3>;

/// Exact point configuration.  The Gram matrix of the stored lifts is the
/// source of truth; raw coordinates (unnormalized, with squared norms) are
/// kept when a coordinate model exists in the field.
struct Code {
  std::string name;
  int n = 0;                  // ambient dimension
  Space space = Space::projective;
  bool antipodal = false;     // spherical code closed under negation, one lift per pair
  Rational q = 0;             // radical of the coordinate/Gram field (0 = rational)
  std::vector<VectorXe> coords;  // optional raw lifts
  std::vector<Quad> norm2;       // squared norms of the raw lifts
  std::vector<RadScalar> gram_;  // row-major L x L

  int lifts() const { return gram_size_; }
  /// Number of lines (projective) or points (sphere; antipodal counts both lifts).
  int N() const { return space == Space::sphere && antipodal ? 2 * lifts() : lifts(); }
  bool line_like() const { return space == Space::projective || antipodal; }

  const RadScalar& gram(int i, int j) const { return gram_[i * gram_size_ + j]; }
  /// Squared inner product of lifts i and j (lift-independent for lines).
  const Quad& gram2(int i, int j) const { return gram(i, j).square(); }

  void set_gram(std::vector<RadScalar> g, int size) {
    gram_ = std::move(g);
    gram_size_ = size;
  }
  void compute_gram_from_coords();

  int gram_size_ = 0;
};

/// Catalog lookup; names may carry parameters, e.g. "orthogonal_lines(3,3)",
/// "simplex_lines(4)", "antiprism8(1/2)", or be plain: "rhombic7", "icosa6",
/// "cube4", "antipodal22_S3", "icosaVF16", "petersen10_S3", "pentagons10_S3",
/// "cell600".
Code builtin(const std::string& name);
std::vector<std::string> builtin_names();

enum class EnergyConvention { E, E_tilde, E_hat };

/// Half-sum over ordered distinct pairs of f at: squared distance (E; chordal
/// for lines), inner product (E_tilde), or squared inner product (E_hat).
Quad energy(const Code& c, const PolyQ& f, EnergyConvention conv);

/// Canonical representative: lexicographically largest image under the 6
/// permutations (and the 4 even sign-flip patterns when projective).
Triple canonical_triple(Triple t, bool projective);

struct TripleDistribution {
  int N = 0;
  std::map<Triple, long> raw;      // all ordered lift triples, keys lift-fixed
  std::map<Triple, long> classes;  // canonical classes of ordered distinct triples
  long total_distinct() const {
    long s = 0;
    for (auto& [t, c] : classes) s += c;
    return s;
  }
};

TripleDistribution triple_distribution(const Code& c);

/// Largest m <= k_max with sum over ordered pairs of P_{2j}^n (projective)
/// or P_j^n (sphere) vanishing for all 1 <= j <= m.
int design_strength(const Code& c, int k_max);

struct CodeReport {
  RadScalar max_cos;
  bool satisfies = false;
};

/// Exact maximal inner product over distinct points (lines: maximal |<x,y>|),
/// compared against t.
CodeReport verify_code(const Code& c, const RadScalar& t);

/// Distinct squared inner products over distinct lifts, ascending.
std::vector<Quad> squared_inner_products(const Code& c);

}  // namespace threept
