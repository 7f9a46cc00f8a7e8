#include "threept/bounds.hpp"

#include <algorithm>
#include <sstream>

#include "threept/gegenbauer.hpp"
#include "threept/solver.hpp"

namespace threept {

namespace {

int tri_count(int d) { return d * (d + 1) / 2; }

/// Linear expression with coefficients in the quadratic field; splits into
/// rational-part and radical-part equations.
struct QuadLinExpr {
  std::map<int, Quad> coeffs;
  Quad constant = Quad(0);

  void add(int unknown, const Quad& c) {
    if (c.is_zero()) return;
    auto [it, fresh] = coeffs.try_emplace(unknown, c);
    if (!fresh) {
      it->second += c;
      if (it->second.is_zero()) coeffs.erase(it);
    }
  }
  /// Rational-part equation always emitted (even if trivial, to keep one row
  /// per source equation); the radical part only when it actually appears.
  void split_into(std::vector<LinExpr>& out) const {
    LinExpr ra, rb;
    ra.constant = constant.a();
    rb.constant = constant.b();
    for (const auto& [k, c] : coeffs) {
      ra.add(k, c.a());
      rb.add(k, c.b());
    }
    out.push_back(std::move(ra));
    if (!(rb.coeffs.empty() && rb.constant == 0)) out.push_back(std::move(rb));
  }
};

/// Symmetrized potential (f0(u^2)+f0(v^2)+f0(t^2))/3 (projective) or
/// (f0(u)+f0(v)+f0(t))/3 (sphere) as a polynomial.
TriPoly potential_average(const PolyQ& f0, Space space) {
  TriPoly acc;
  int step = space == Space::projective ? 2 : 1;
  for (int var = 0; var < 3; ++var)
    for (int i = 0; i <= f0.degree(); ++i) {
      Exponent e{0, 0, 0};
      e[var] = step * i;
      acc.add_term(e, f0.coeff(i) / 3);
    }
  return acc;
}

VectorXe monomial_values(const std::vector<Exponent>& monos, const std::array<Quad, 3>& x) {
  VectorXe z(static_cast<Eigen::Index>(monos.size()));
  for (size_t i = 0; i < monos.size(); ++i) {
    Quad val(1);
    for (int v = 0; v < 3; ++v)
      for (int p = 0; p < monos[i][v]; ++p) val *= x[static_cast<size_t>(v)];
    z(static_cast<Eigen::Index>(i)) = val;
  }
  return z;
}

}  // namespace

RootMultiset default_perturbation_roots() {
  return {{Rational(0), 3}, {Rational(1, 9), 2}, {Rational(1, 3), 2}};
}

PolyQ perturb_potential(const PolyQ& f, const RootMultiset& roots, const Rational& eps) {
  if (eps < 0) throw std::invalid_argument("perturb_potential: negative eps");
  PolyQ prod{Rational(1)};
  PolyQ t = PolyQ::variable();
  for (const auto& [r, m] : roots)
    for (int i = 0; i < m; ++i) prod = prod * (t - PolyQ(r));
  return f - prod * eps;
}

int DualProgram::f_index(int block, int i, int j) const {
  if (i > j) std::swap(i, j);
  int off = 1;
  for (int b = 0; b < block; ++b) off += tri_count(block_dim(b));
  int d = block_dim(block);
  if (j >= d) throw std::out_of_range("DualProgram::f_index");
  return off + i * d - i * (i - 1) / 2 + (j - i);
}

int DualProgram::orbit_index(int o) const {
  int off = 1;
  for (size_t b = 0; b < blocks.size(); ++b) off += tri_count(blocks[b].second);
  return off + o;
}

int DualProgram::unknown_count() const {
  return orbit_index(static_cast<int>(sym.orbits.size()));
}

std::vector<std::string> DualProgram::unknown_names() const {
  std::vector<std::string> names(static_cast<size_t>(unknown_count()));
  names[0] = "c";
  for (size_t b = 0; b < blocks.size(); ++b)
    for (int i = 0; i < blocks[b].second; ++i)
      for (int j = i; j < blocks[b].second; ++j) {
        std::ostringstream os;
        os << "F" << blocks[b].first << "[" << i << "," << j << "]";
        names[static_cast<size_t>(f_index(static_cast<int>(b), i, j))] = os.str();
      }
  for (size_t o = 0; o < sym.orbits.size(); ++o)
    names[static_cast<size_t>(orbit_index(static_cast<int>(o)))] =
        "M[" + std::to_string(o) + "]";
  return names;
}

MatrixXq DualProgram::f_block_of(const VectorXq& x, int b) const {
  int d = block_dim(b);
  MatrixXq m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) m(i, j) = m(j, i) = x(f_index(b, i, j));
  return m;
}

MatrixXq DualProgram::m_of(const VectorXq& x) const {
  VectorXq lam(static_cast<Eigen::Index>(sym.orbits.size()));
  for (size_t o = 0; o < sym.orbits.size(); ++o)
    lam(static_cast<Eigen::Index>(o)) = x(orbit_index(static_cast<int>(o)));
  return sym.assemble(lam);
}

std::vector<std::pair<int, int>> rhombic_blocks() {
  return {{0, 5}, {1, 4}, {2, 4}, {3, 3}, {4, 3}, {5, 2}};
}

std::vector<LinExpr> tangency_constraints(const DualProgram& prog,
                                          const std::vector<std::array<Quad, 3>>& triples) {
  std::vector<LinExpr> out;
  const PolyQ fd = prog.f0.derivative();
  for (const auto& x : triples) {
    // D membership: entries in [-1,1), Gram determinant condition nonnegative
    Quad det = Quad(1) + Quad(2) * x[0] * x[1] * x[2] - x[0] * x[0] - x[1] * x[1] - x[2] * x[2];
    for (const auto& xi : x)
      if ((xi - Quad(1)).sign() > 0 || (xi + Quad(1)).sign() < 0)
        throw std::invalid_argument("tangency_constraints: triple outside D");
    if (det.sign() < 0) throw std::invalid_argument("tangency_constraints: triple outside D");

    for (int eq = 0; eq < 4; ++eq) {  // 0 = value, 1..3 = d/du, d/dv, d/dt
      QuadLinExpr e;
      if (eq == 0) {
        e.add(prog.c_index(), Quad(1));
        Quad rhs(0);
        for (int v = 0; v < 3; ++v) {
          Quad arg = prog.space == Space::projective
                         ? x[static_cast<size_t>(v)] * x[static_cast<size_t>(v)]
                         : x[static_cast<size_t>(v)];
          rhs += prog.f0.eval<Quad>(arg);
        }
        e.constant -= rhs / Quad(3);
      } else {
        int var = eq - 1;
        const Quad& xv = x[static_cast<size_t>(var)];
        Quad rhs = prog.space == Space::projective
                       ? Quad(2) * xv * fd.eval<Quad>(xv * xv) / Quad(3)
                       : fd.eval<Quad>(xv) / Quad(3);
        e.constant -= rhs;
      }
      for (size_t b = 0; b < prog.blocks.size(); ++b) {
        int d = prog.blocks[b].second;
        for (int i = 0; i < d; ++i)
          for (int j = i; j < d; ++j) {
            const TriPoly& entry = prog.That[b].entry(i, j);
            TriPoly p = eq == 0 ? entry : entry.derivative(eq - 1);
            Quad val = p.eval<Quad>(x[0], x[1], x[2]);
            Rational w(i == j ? 1 : 2);
            e.add(prog.f_index(static_cast<int>(b), i, j), val * Quad(w));
          }
      }
      e.split_into(out);
    }
  }
  return out;
}

DualProgram build_dual_program(int N, int n, Space space, const PolyQ& f0,
                               const std::vector<std::pair<int, int>>& blocks,
                               int sos_degree, const Code* target_code) {
  if (N < 3) throw std::invalid_argument("build_dual_program: N < 3");
  DualProgram prog;
  prog.N = N;
  prog.n = n;
  prog.space = space;
  prog.f0 = f0;
  prog.blocks = blocks;
  prog.sos_degree = sos_degree;
  prog.sym = build_symmetry_basis(sos_degree);

  for (const auto& [k, d] : blocks) {
    KernelMatrix S = space == Space::projective ? projective_S(n, k, d) : sphere_S(n, k, d);
    prog.That.push_back(make_T(S, N));
  }

  // identity degree check: the sum-of-squares side must reach the potential's
  TriPoly rhs = potential_average(f0, space);
  if (rhs.total_degree() > 2 * sos_degree)
    throw std::invalid_argument("build_dual_program: sos_degree too small for f0");

  // coefficient matching over every monomial that can appear
  std::map<Exponent, LinExpr> eq;
  for (const Exponent& e : monomials(2 * sos_degree)) eq[e];  // ensure presence
  eq[{0, 0, 0}].add(prog.c_index(), Rational(1));
  for (size_t b = 0; b < blocks.size(); ++b) {
    int d = blocks[b].second;
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) {
        Rational w(i == j ? 1 : 2);
        for (const auto& [e, c] : prog.That[b].entry(i, j).terms())
          eq[e].add(prog.f_index(static_cast<int>(b), i, j), w * c);
      }
  }
  for (size_t o = 0; o < prog.sym.orbits.size(); ++o) {
    TriPoly form = prog.sym.orbit_form(prog.sym.orbits[o]);
    for (const auto& [e, c] : form.terms())
      eq[e].add(prog.orbit_index(static_cast<int>(o)), c);
  }
  for (const auto& [e, c] : rhs.terms()) eq[e].constant -= c;

  const int total_deg_cap = 2 * sos_degree;
  for (auto& [e, expr] : eq) {
    if (e[0] + e[1] + e[2] <= total_deg_cap) ++prog.coefficient_equations;
    if (!(expr.coeffs.empty() && expr.constant == 0))
      prog.constraints.push_back(std::move(expr));
  }

  // objective: (N/2)((N-1)c - <F_0, J>) over the k=0 block, if present
  prog.objective.add(prog.c_index(), Rational(N, 2) * Rational(N - 1));
  for (size_t b = 0; b < blocks.size(); ++b)
    if (blocks[b].first == 0) {
      int d = blocks[b].second;
      for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j)
          prog.objective.add(prog.f_index(static_cast<int>(b), i, j),
                             -Rational(N, 2) * Rational(i == j ? 1 : 2));
    }

  if (target_code != nullptr) {
    const Code& code = *target_code;
    if ((space == Space::projective) != code.line_like())
      throw std::invalid_argument("build_dual_program: code/space mismatch");
    prog.q = code.q;
    TripleDistribution dist = triple_distribution(code);
    for (const auto& [tri, cnt] : dist.classes) {
      std::array<Quad, 3> x;
      for (int i = 0; i < 3; ++i) {
        auto val = tri[static_cast<size_t>(i)].in_field(prog.q);
        if (!val)
          throw std::domain_error("build_dual_program: triple outside the quadratic field");
        x[static_cast<size_t>(i)] = *val;
      }
      prog.target_triples.push_back(x);
      prog.target_counts.push_back(Rational(cnt));
    }

    // complementary slackness: F_k annihilates the range of the primal sum
    for (size_t b = 0; b < blocks.size(); ++b) {
      int d = blocks[b].second;
      MatrixXe acc(d, d);
      acc.setConstant(blocks[b].first == 0 ? Quad(Rational(N) * Rational(N - 2)) : Quad(0));
      for (size_t i = 0; i < prog.target_triples.size(); ++i) {
        const auto& x = prog.target_triples[i];
        MatrixXe t = eval_kernel(prog.That[b], x[0], x[1], x[2]);
        for (int r = 0; r < d; ++r)
          for (int cc = 0; cc < d; ++cc)
            acc(r, cc) += Quad(prog.target_counts[i]) * t(r, cc);
      }
      MatrixXq P(d, d);
      for (int r = 0; r < d; ++r)
        for (int cc = 0; cc < d; ++cc) P(r, cc) = acc(r, cc).rational_value();
      prog.slack_matrices.push_back(P);
      MatrixXq range = column_space_basis(P);
      for (int r = 0; r < d; ++r)
        for (Eigen::Index col = 0; col < range.cols(); ++col) {
          LinExpr e;
          for (int j = 0; j < d; ++j)
            e.add(prog.f_index(static_cast<int>(b), r, j), range(j, col));
          if (!e.coeffs.empty()) prog.constraints.push_back(std::move(e));
        }
    }

    // tangency of H against the symmetrized potential
    for (LinExpr& e : tangency_constraints(prog, prog.target_triples))
      prog.constraints.push_back(std::move(e));

    // the sum-of-squares form must vanish to second order: M z(x) = 0
    for (const auto& x : prog.target_triples) {
      VectorXe z = monomial_values(prog.sym.monos, x);
      MatrixXe sz = prog.sym.apply_orbits(z);
      for (int row = 0; row < prog.sym.size(); ++row) {
        QuadLinExpr e;
        for (size_t o = 0; o < prog.sym.orbits.size(); ++o)
          e.add(prog.orbit_index(static_cast<int>(o)), sz(row, static_cast<Eigen::Index>(o)));
        std::vector<LinExpr> rows;
        e.split_into(rows);
        for (LinExpr& r : rows) prog.constraints.push_back(std::move(r));
      }
    }
  }
  return prog;
}

Rational bound_value(const Rational& c, const MatrixXq& F0, int N) {
  Rational inner = 0;
  for (Eigen::Index i = 0; i < F0.rows(); ++i)
    for (Eigen::Index j = 0; j < F0.cols(); ++j) inner += F0(i, j);
  return Rational(N, 2) * (Rational(N - 1) * c - inner);
}

TwoPointResult two_point_bound(int N, int n, const PolyQ& f, int max_degree) {
  PolyQ t2({std::vector<Rational>{0, 0, 1}});
  PolyQ g = f.compose(t2);
  if (g.degree() > max_degree)
    throw std::invalid_argument("two_point_bound: degree budget too small");

  std::vector<Rational> a = gegenbauer_expansion(n, g);
  bool nonneg = true;
  for (size_t k = 1; k < a.size(); ++k)
    if (a[k] < 0) nonneg = false;
  if (nonneg) {
    TwoPointResult res;
    res.exact = true;
    res.c = a.empty() ? Rational(0) : a[0];
    res.a.assign(a.begin() + (a.empty() ? 0 : 1), a.end());
    Rational sum = 0;
    for (const Rational& x : res.a) sum += x;
    res.bound = Rational(N, 2) * (Rational(N - 1) * res.c - sum);
    return res;
  }

  // numeric: maximize the bound over h(t) = c + sum a_k P_k(t) <= g(t) on
  // [-1,1], certified by g - h = z0^T Q0 z0 + (1-t^2) z1^T Q1 z1
  int D0 = std::max(1, (g.degree() + 1) / 2);
  int K = std::max(2, g.degree());
  LinearSystem sys;
  int c_idx = sys.unknown("c");
  std::vector<int> a_idx;
  for (int k = 1; k <= K; ++k) a_idx.push_back(sys.unknown("a" + std::to_string(k)));
  auto q_idx = [&sys](int which, int i, int j) {
    return sys.unknown("Q" + std::to_string(which) + "[" + std::to_string(std::min(i, j)) +
                       "," + std::to_string(std::max(i, j)) + "]");
  };
  std::vector<PolyQ> gege;
  for (int k = 0; k <= K; ++k) gege.push_back(gegenbauer(n, k));

  std::vector<LinExpr> rows(static_cast<size_t>(2 * D0 + 1));
  for (int p = 0; p <= 2 * D0; ++p) rows[static_cast<size_t>(p)].constant = -g.coeff(p);
  rows[0].add(c_idx, 1);
  for (int k = 1; k <= K; ++k)
    for (int p = 0; p <= k; ++p)
      rows[static_cast<size_t>(p)].add(a_idx[static_cast<size_t>(k - 1)], gege[static_cast<size_t>(k)].coeff(p));
  for (int i = 0; i <= D0; ++i)
    for (int j = 0; j <= D0; ++j) rows[static_cast<size_t>(i + j)].add(q_idx(0, i, j), 1);
  for (int i = 0; i < D0; ++i)
    for (int j = 0; j < D0; ++j) {
      rows[static_cast<size_t>(i + j)].add(q_idx(1, i, j), 1);
      rows[static_cast<size_t>(i + j + 2)].add(q_idx(1, i, j), -1);
    }
  for (LinExpr& r : rows) sys.add_equation(std::move(r));
  AffineSolution param = sys.solve();

  const int U = sys.num_unknowns();
  auto unknown_matrix = [&](const VectorXq& x, int which, int dim) {
    MatrixXq m(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) m(i, j) = x(q_idx(which, i, j));
    return m;
  };
  SdpProblem sdp;
  sdp.objective = VectorXq::Zero(param.basis.cols());
  VectorXq obj_u = VectorXq::Zero(U);
  obj_u(c_idx) = Rational(N, 2) * Rational(N - 1);
  for (int k = 1; k <= K; ++k) obj_u(a_idx[static_cast<size_t>(k - 1)]) = -Rational(N, 2);
  sdp.objective = param.basis.transpose() * obj_u;
  sdp.objective_constant = (obj_u.transpose() * param.particular)(0, 0);

  auto add_block = [&](const std::string& name, auto builder) {
    SdpBlock blk;
    blk.name = name;
    blk.offset = builder(param.particular);
    for (Eigen::Index cidx = 0; cidx < param.basis.cols(); ++cidx)
      blk.dirs.push_back(builder(VectorXq(param.basis.col(cidx))));
    sdp.blocks.push_back(std::move(blk));
  };
  add_block("Q0", [&](const VectorXq& x) { return unknown_matrix(x, 0, D0 + 1); });
  add_block("Q1", [&](const VectorXq& x) { return unknown_matrix(x, 1, D0); });
  for (int k = 1; k <= K; ++k)
    add_block("a" + std::to_string(k), [&](const VectorXq& x) {
      MatrixXq m(1, 1);
      m(0, 0) = x(a_idx[static_cast<size_t>(k - 1)]);
      return m;
    });

  SolveOptions opts;
  SolveResult res = solve_numeric(sdp, opts);
  if (!res.feasible) throw std::runtime_error("two_point_bound: no feasible certificate found");
  VectorXq lam(param.basis.cols());
  for (Eigen::Index i = 0; i < lam.size(); ++i) lam(i) = res.lambda[static_cast<size_t>(i)];
  VectorXq x = param.assignment(lam);
  TwoPointResult out;
  out.exact = false;
  out.c = x(c_idx);
  for (int k = 1; k <= K; ++k) out.a.push_back(x(a_idx[static_cast<size_t>(k - 1)]));
  out.bound = res.objective;
  return out;
}

Rational primal_restricted(int N, int n, const PolyQ& f0,
                           const std::vector<std::array<Quad, 3>>& support,
                           const std::vector<std::pair<int, int>>& blocks,
                           unsigned precision_bits) {
  if (support.empty()) throw std::invalid_argument("primal_restricted: empty support");
  const int s = static_cast<int>(support.size());
  std::vector<KernelMatrix> That;
  for (const auto& [k, d] : blocks) That.push_back(make_T(projective_S(n, k, d), N));

  // objective weights and kernel evaluations (all rational by parity)
  VectorXq w(s);
  for (int i = 0; i < s; ++i) {
    Quad acc(0);
    for (int v = 0; v < 3; ++v) {
      const Quad& xv = support[static_cast<size_t>(i)][static_cast<size_t>(v)];
      acc += f0.eval<Quad>(xv * xv);
    }
    w(i) = acc.rational_value() / (Rational(6) * Rational(N - 2));
  }
  std::vector<std::vector<MatrixXq>> T_eval(blocks.size());
  for (size_t b = 0; b < blocks.size(); ++b)
    for (int i = 0; i < s; ++i) {
      const auto& x = support[static_cast<size_t>(i)];
      MatrixXe m = eval_kernel(That[b], x[0], x[1], x[2]);
      MatrixXq r(m.rows(), m.cols());
      for (Eigen::Index a = 0; a < m.rows(); ++a)
        for (Eigen::Index c = 0; c < m.cols(); ++c) r(a, c) = m(a, c).rational_value();
      T_eval[b].push_back(std::move(r));
    }

  // A = particular + basis mu with sum A = N(N-1)(N-2)
  LinearSystem sys;
  std::vector<int> a_idx;
  for (int i = 0; i < s; ++i) a_idx.push_back(sys.unknown("A" + std::to_string(i)));
  LinExpr total;
  for (int i = 0; i < s; ++i) total.add(a_idx[static_cast<size_t>(i)], 1);
  total.constant = -Rational(N) * Rational(N - 1) * Rational(N - 2);
  sys.add_equation(std::move(total));
  AffineSolution param = sys.solve();

  // The PSD constraints pin the weights to the code's distribution within the
  // width of the relaxation below, so the analytic center of the feasible set
  // already determines the optimum to far better than the reporting
  // tolerance; a zero objective keeps the barrier solve a pure centering.
  SdpProblem sdp;
  sdp.objective = VectorXq::Zero(param.basis.cols());
  auto build = [&](const VectorXq& A, bool with_offset) {
    std::vector<MatrixXq> out;
    for (size_t b = 0; b < blocks.size(); ++b) {
      int d = blocks[b].second;
      MatrixXq m = MatrixXq::Zero(d, d);
      if (with_offset && blocks[b].first == 0)
        m.setConstant(Rational(N) * Rational(N - 2));
      for (int i = 0; i < s; ++i) m += A(i) * T_eval[b][static_cast<size_t>(i)];
      out.push_back(std::move(m));
    }
    return out;
  };
  std::vector<MatrixXq> offsets = build(param.particular, true);
  std::vector<std::vector<MatrixXq>> dirs;
  for (Eigen::Index cidx = 0; cidx < param.basis.cols(); ++cidx)
    dirs.push_back(build(VectorXq(param.basis.col(cidx)), false));
  // every feasible weight vector shares the kernel common to the offset and
  // all directions; project it out so the interior is visible to the barrier,
  // then add a tiny relaxation for the boundary touched at the sharp optimum
  // (its effect on the value is far below the reporting tolerance)
  const Rational relax = Rational(1, boost::multiprecision::pow(Integer(10), 25));
  for (size_t b = 0; b < blocks.size(); ++b) {
    const int d = blocks[b].second;
    MatrixXq stacked(static_cast<Eigen::Index>(1 + dirs.size()) * d, d);
    stacked.topRows(d) = offsets[b];
    for (size_t c = 0; c < dirs.size(); ++c)
      stacked.middleRows(static_cast<Eigen::Index>(c + 1) * d, d) = dirs[c][b];
    MatrixXq common = kernel_basis(stacked);
    MatrixXq comp = common.cols() == 0 ? MatrixXq(MatrixXq::Identity(d, d))
                                       : kernel_basis(MatrixXq(common.transpose()));
    if (comp.cols() == 0) continue;
    SdpBlock blk;
    blk.name = "T" + std::to_string(blocks[b].first);
    blk.offset = comp.transpose() * offsets[b] * comp +
                 relax * MatrixXq::Identity(comp.cols(), comp.cols());
    for (auto& dv : dirs) blk.dirs.push_back(comp.transpose() * dv[b] * comp);
    sdp.blocks.push_back(std::move(blk));
  }
  for (int i = 0; i < s; ++i) {
    SdpBlock blk;
    blk.name = "A" + std::to_string(i);
    blk.offset = MatrixXq::Constant(1, 1, param.particular(i));
    for (Eigen::Index cidx = 0; cidx < param.basis.cols(); ++cidx)
      blk.dirs.push_back(MatrixXq::Constant(1, 1, param.basis(i, cidx)));
    sdp.blocks.push_back(std::move(blk));
  }

  SolveOptions opts;
  opts.precision_bits = precision_bits;
  opts.strict_margin_log2 = -90;  // the interior is only `relax` wide
  opts.max_iter = 4000;           // thin-interior centering converges slowly
  SolveResult res = solve_numeric(sdp, opts);
  if (!res.feasible)
    throw std::runtime_error("primal_restricted: infeasible support (" + res.message + ")");
  VectorXq lam(param.basis.cols());
  for (Eigen::Index i = 0; i < lam.size(); ++i) lam(i) = res.lambda[static_cast<size_t>(i)];
  VectorXq A = param.assignment(lam);
  return Rational((w.transpose() * A)(0, 0));
}

}  // namespace threept
