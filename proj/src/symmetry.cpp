#include "threept/symmetry.hpp"

#include <map>
#include <stdexcept>

namespace threept {

std::vector<Exponent> monomials(int D) {
  if (D < 0) throw std::invalid_argument("monomials: negative degree");
  std::vector<Exponent> out;
  for (int i = 0; i <= D; ++i)
    for (int j = 0; i + j <= D; ++j)
      for (int k = 0; i + j + k <= D; ++k) out.push_back({i, j, k});
  return out;
}

const std::vector<SignedPermutation>& signed_permutations() {
  static const std::vector<SignedPermutation> group = [] {
    static const std::array<std::array<int, 3>, 6> perms = {
        {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
    static const std::array<std::array<bool, 3>, 4> flips = {
        {{false, false, false},
         {true, true, false},
         {true, false, true},
         {false, true, true}}};
    std::vector<SignedPermutation> g;
    for (const auto& p : perms)
      for (const auto& f : flips) g.push_back({p, f});
    return g;
  }();
  return group;
}

int SymmetryBasis::index_of(const Exponent& e) const {
  // lexicographic order admits binary search
  auto it = std::lower_bound(monos.begin(), monos.end(), e);
  if (it == monos.end() || *it != e)
    throw std::invalid_argument("SymmetryBasis: exponent outside basis");
  return static_cast<int>(it - monos.begin());
}

TriPoly SymmetryBasis::orbit_form(const Orbit& o) const {
  TriPoly acc;
  for (const auto& [i, j, s] : o.entries) {
    const Exponent &a = monos[i], &b = monos[j];
    Exponent e{a[0] + b[0], a[1] + b[1], a[2] + b[2]};
    acc.add_term(e, Rational(s * (i == j ? 1 : 2)));
  }
  return acc;
}

MatrixXq SymmetryBasis::assemble(const VectorXq& lambda) const {
  if (lambda.size() != static_cast<Eigen::Index>(orbits.size()))
    throw std::invalid_argument("SymmetryBasis::assemble: wrong parameter count");
  MatrixXq m = MatrixXq::Zero(size(), size());
  for (size_t o = 0; o < orbits.size(); ++o)
    for (const auto& [i, j, s] : orbits[o].entries) {
      m(i, j) = lambda(static_cast<Eigen::Index>(o)) * s;
      m(j, i) = m(i, j);
    }
  return m;
}

MatrixXe SymmetryBasis::apply_orbits(const VectorXe& z) const {
  if (z.size() != size())
    throw std::invalid_argument("SymmetryBasis::apply_orbits: wrong vector size");
  MatrixXe out(size(), static_cast<Eigen::Index>(orbits.size()));
  out.setConstant(Quad(0));
  for (size_t o = 0; o < orbits.size(); ++o)
    for (const auto& [i, j, s] : orbits[o].entries) {
      Quad c = Quad(Rational(s));
      out(i, static_cast<Eigen::Index>(o)) += c * z(j);
      if (i != j) out(j, static_cast<Eigen::Index>(o)) += c * z(i);
    }
  return out;
}

SymmetryBasis build_symmetry_basis(int D) {
  SymmetryBasis basis;
  basis.D = D;
  basis.monos = monomials(D);
  const int n = basis.size();
  const auto& group = signed_permutations();

  // precompute index images and signs per group element
  std::vector<std::vector<int>> image(group.size(), std::vector<int>(n));
  std::vector<std::vector<int>> sgn(group.size(), std::vector<int>(n));
  for (size_t g = 0; g < group.size(); ++g)
    for (int a = 0; a < n; ++a) {
      image[g][a] = basis.index_of(group[g].apply(basis.monos[a]));
      sgn[g][a] = group[g].sign(basis.monos[a]);
    }

  // character class: parities under the three double sign flips
  basis.sign_class.resize(n);
  auto class_of = [](const Exponent& e) {
    int b01 = (e[0] + e[1]) % 2, b02 = (e[0] + e[2]) % 2, b12 = (e[1] + e[2]) % 2;
    if (b01 == 0 && b02 == 0) return 0;  // all parities equal
    if (b01 == 0) return 1;              // t differs
    if (b02 == 0) return 2;              // v differs
    (void)b12;
    return 3;                            // u differs
  };
  for (int a = 0; a < n; ++a) basis.sign_class[a] = class_of(basis.monos[a]);

  // signed orbits of unordered pairs
  auto key = [n](int i, int j) { return i <= j ? i * n + j : j * n + i; };
  std::map<int, int> seen;  // pair key -> sign within current orbit
  std::vector<bool> done(static_cast<size_t>(n) * n, false);
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      if (done[key(a, b)]) continue;
      seen.clear();
      seen[key(a, b)] = 1;
      std::vector<std::pair<std::pair<int, int>, int>> frontier = {{{a, b}, 1}};
      std::vector<std::array<int, 3>> entries;
      bool dead = false;
      while (!frontier.empty()) {
        auto [pr, s] = frontier.back();
        frontier.pop_back();
        for (size_t g = 0; g < group.size(); ++g) {
          int i2 = image[g][pr.first], j2 = image[g][pr.second];
          int s2 = s * sgn[g][pr.first] * sgn[g][pr.second];
          auto [it, fresh] = seen.try_emplace(key(i2, j2), s2);
          if (fresh)
            frontier.push_back({{std::min(i2, j2), std::max(i2, j2)}, s2});
          else if (it->second != s2)
            dead = true;  // entry identified with its own negation
        }
        if (dead) break;
      }
      for (const auto& [k, s] : seen) {
        done[k] = true;
        if (!dead) entries.push_back({k / n, k % n, s});
      }
      if (!dead) basis.orbits.push_back({std::move(entries)});
    }
  return basis;
}

}  // namespace threept
