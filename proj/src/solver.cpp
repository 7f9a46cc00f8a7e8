#include "threept/solver.hpp"

#include <algorithm>
#include <boost/multiprecision/mpfr.hpp>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace threept {

namespace {

using Real = boost::multiprecision::mpfr_float;
using MatrixXr = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
using VectorXr = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

Real to_real(const Rational& r) {
  return Real(numerator(r)) / Real(denominator(r));
}

MatrixXr to_real(const MatrixXq& m) {
  MatrixXr r(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) r(i, j) = to_real(m(i, j));
  return r;
}

/// Truncation at 40 decimal digits; exact enough for any downstream rounding.
Rational to_rational(const Real& x) {
  static const Integer den = boost::multiprecision::pow(Integer(10), 40);
  Real scaled = x * Real(den);
  Integer num = scaled.convert_to<Integer>();
  return Rational(num, den);
}

/// Barrier subproblem: fixed linear objective plus log-det barrier over the
/// listed blocks (all sharing the same variable vector).
struct BarrierBlocks {
  std::vector<MatrixXr> offset;
  std::vector<std::vector<MatrixXr>> dirs;  // [block][variable]

  int nvars() const { return offset.empty() ? 0 : static_cast<int>(dirs[0].size()); }
  Real barrier_parameter() const {
    Real nu(0);
    for (const auto& o : offset) nu += Real(o.rows());
    return nu;
  }
  MatrixXr assemble(size_t b, const VectorXr& lambda) const {
    MatrixXr x = offset[b];
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
      const MatrixXr& d = dirs[b][static_cast<size_t>(i)];
      if (d.size() > 0) x += lambda(i) * d;
    }
    return x;
  }
  /// log det of all blocks at lambda; false if any block is not PD.
  bool log_det(const VectorXr& lambda, Real& out) const {
    out = 0;
    for (size_t b = 0; b < offset.size(); ++b) {
      Eigen::LLT<MatrixXr> llt(assemble(b, lambda));
      if (llt.info() != Eigen::Success) return false;
      MatrixXr l = llt.matrixL();
      for (Eigen::Index i = 0; i < l.rows(); ++i) out += 2 * log(l(i, i));
    }
    return true;
  }
};

/// Damped Newton minimization of tobj . lambda - sum_b log det X_b(lambda)
/// from a strictly feasible start.  Returns false on iteration exhaustion.
bool center(const BarrierBlocks& blocks, const VectorXr& tobj, VectorXr& lambda,
            const Real& tol, int max_iter, int& iters_used, std::string& message) {
  const int m = static_cast<int>(lambda.size());
  Real logdet;
  if (!blocks.log_det(lambda, logdet)) {
    message = "centering started from an infeasible point";
    return false;
  }
  auto phi = [&](const VectorXr& l, Real& out) {
    Real ld;
    if (!blocks.log_det(l, ld)) return false;
    out = -ld;
    for (Eigen::Index i = 0; i < l.size(); ++i) out += tobj(i) * l(i);
    return true;
  };
  Real value;
  phi(lambda, value);

  for (int iter = 0; iter < max_iter; ++iter) {
    ++iters_used;
    VectorXr grad = tobj;
    MatrixXr hess = MatrixXr::Zero(m, m);
    for (size_t b = 0; b < blocks.offset.size(); ++b) {
      Eigen::LLT<MatrixXr> llt(blocks.assemble(b, lambda));
      if (llt.info() != Eigen::Success) {
        message = "interior lost during centering";
        return false;
      }
      std::vector<MatrixXr> u(static_cast<size_t>(m));
      for (int i = 0; i < m; ++i) {
        const MatrixXr& d = blocks.dirs[b][static_cast<size_t>(i)];
        if (d.size() == 0) continue;
        u[static_cast<size_t>(i)] = llt.solve(d);
        grad(i) -= u[static_cast<size_t>(i)].trace();
      }
      for (int i = 0; i < m; ++i) {
        if (u[static_cast<size_t>(i)].size() == 0) continue;
        for (int j = i; j < m; ++j) {
          if (u[static_cast<size_t>(j)].size() == 0) continue;
          const MatrixXr& ui = u[static_cast<size_t>(i)];
          const MatrixXr& uj = u[static_cast<size_t>(j)];
          Real t(0);
          for (Eigen::Index a = 0; a < ui.rows(); ++a)
            for (Eigen::Index bb = 0; bb < ui.cols(); ++bb) t += ui(a, bb) * uj(bb, a);
          hess(i, j) += t;
          if (i != j) hess(j, i) += t;
        }
      }
    }
    // tiny ridge keeps the Newton system solvable along unconstrained directions
    Real ridge = (hess.trace() + Real(1)) *
                 pow(Real(2), Real(-3.0 * static_cast<double>(Real::default_precision())));
    for (int k = 0; k < 8; ++k) {
      MatrixXr h = hess + ridge * MatrixXr::Identity(m, m);
      Eigen::LLT<MatrixXr> hllt(h);
      if (hllt.info() == Eigen::Success) {
        VectorXr step = hllt.solve((-grad).eval());
        Real dec2 = Real(0);
        for (int i = 0; i < m; ++i) dec2 -= grad(i) * step(i);
        if (dec2 < tol * tol) return true;
        // backtracking line search with feasibility and sufficient decrease
        Real alpha(1);
        bool moved = false;
        for (int ls = 0; ls < 120; ++ls) {
          VectorXr cand = lambda + alpha * step;
          Real cand_value;
          if (phi(cand, cand_value) && cand_value <= value - alpha * dec2 / 4) {
            lambda = cand;
            value = cand_value;
            moved = true;
            break;
          }
          alpha /= 2;
        }
        if (!moved) return true;  // stalled at numerical floor; current point stands
        break;
      }
      ridge *= Real(1024);
    }
  }
  message = "centering iteration limit reached";
  return false;
}

/// Hard box |lambda_i| <= R as 1x1 blocks, keeping every barrier subproblem
/// bounded; R is far beyond any certificate entry this pipeline produces.
void add_box(BarrierBlocks& blocks, int m, const Real& radius) {
  for (int i = 0; i < m; ++i)
    for (int s : {1, -1}) {
      blocks.offset.push_back(MatrixXr::Constant(1, 1, radius));
      std::vector<MatrixXr> dirs(static_cast<size_t>(m));
      dirs[static_cast<size_t>(i)] = MatrixXr::Constant(1, 1, Real(s));
      blocks.dirs.push_back(std::move(dirs));
    }
}


}  // namespace

SolveResult solve_numeric(const SdpProblem& prob, const SolveOptions& opts) {
  if (opts.precision_bits < 64)
    throw std::invalid_argument("solve_numeric: precision_bits < 64");
  const unsigned digits10 = static_cast<unsigned>(opts.precision_bits * 0.30103) + 4;
  unsigned saved_precision = Real::default_precision();
  Real::default_precision(digits10);
  SolveResult res;
  try {
    const int m = prob.dim();
    BarrierBlocks base;
    for (const auto& blk : prob.blocks) {
      base.offset.push_back(to_real(blk.offset));
      std::vector<MatrixXr> dirs;
      for (const auto& d : blk.dirs) dirs.push_back(to_real(d));
      base.dirs.push_back(std::move(dirs));
    }
    const Real box_radius = pow(Real(2), Real(24));
    const Real tol = pow(Real(2), Real(-static_cast<double>(opts.precision_bits) / 3));

    // ---- phase 1: minimize the uniform shift s with X_b + s I > 0 ----
    BarrierBlocks ext = base;
    for (size_t b = 0; b < ext.offset.size(); ++b)
      ext.dirs[b].push_back(MatrixXr::Identity(ext.offset[b].rows(), ext.offset[b].cols()));
    add_box(ext, m + 1, box_radius);
    VectorXr lx = VectorXr::Zero(m + 1);
    lx(m) = 1;
    {
      Real ld;
      while (!ext.log_det(lx, ld)) {
        lx(m) *= 4;
        if (lx(m) > box_radius / 4) {
          res.message = "no strictly feasible start found (initial shift diverged)";
          Real::default_precision(saved_precision);
          return res;
        }
      }
    }
    VectorXr tobj = VectorXr::Zero(m + 1);
    Real t(1);
    bool strict = false;
    for (int stage = 0; stage < 200; ++stage) {
      tobj(m) = t;
      std::string msg;
      if (!center(ext, tobj, lx, tol, opts.max_iter, res.iterations, msg)) {
        res.message = "phase 1: " + msg;
        Real::default_precision(saved_precision);
        return res;
      }
      if (lx(m) < -pow(Real(2), Real(opts.strict_margin_log2))) {
        strict = true;
        break;
      }
      if (ext.barrier_parameter() / t <
          pow(Real(2), Real(-static_cast<double>(opts.precision_bits) / 2)))
        break;
      t *= 8;
    }
    if (!strict) {
      res.message = "no strictly feasible point (best shift " + lx(m).str(8) + ")";
      Real::default_precision(saved_precision);
      return res;
    }
    VectorXr lambda = lx.head(m);

    // ---- phase 2 ----
    BarrierBlocks full = base;
    add_box(full, m, box_radius);
    bool zero_objective = true;
    VectorXr obj(m);
    for (int i = 0; i < m; ++i) {
      obj(i) = to_real(prob.objective(i));
      if (prob.objective(i) != 0) zero_objective = false;
    }
    if (zero_objective) {
      VectorXr zero = VectorXr::Zero(m);
      std::string msg;
      if (!center(full, zero, lambda, tol, opts.max_iter, res.iterations, msg)) {
        res.message = "phase 2: " + msg;
        Real::default_precision(saved_precision);
        return res;
      }
      res.message = "analytic center";
    } else {
      Real t2(1);
      const Real gap_target = pow(Real(2), Real(-static_cast<double>(opts.precision_bits) / 2));
      for (int stage = 0; stage < 400; ++stage) {
        VectorXr tobj2 = -t2 * obj;  // maximize objective
        std::string msg;
        if (!center(full, tobj2, lambda, tol, opts.max_iter, res.iterations, msg)) {
          res.message = "phase 2: " + msg;
          Real::default_precision(saved_precision);
          return res;
        }
        if (full.barrier_parameter() / t2 < gap_target) break;
        t2 *= 8;
      }
      res.message = "path following converged";
    }

    res.feasible = true;
    res.lambda.resize(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) res.lambda[static_cast<size_t>(i)] = to_rational(lambda(i));
    res.objective = prob.objective_constant;
    for (int i = 0; i < m; ++i)
      res.objective += prob.objective(i) * res.lambda[static_cast<size_t>(i)];
  } catch (...) {
    Real::default_precision(saved_precision);
    throw;
  }
  Real::default_precision(saved_precision);
  return res;
}

AffineSolution parameterize(const DualProgram& prog) {
  LinearSystem sys;
  for (const std::string& name : prog.unknown_names()) sys.unknown(name);
  sys.set_track_provenance(prog.constraints.size() <= 200);
  for (const LinExpr& e : prog.constraints) sys.add_equation(e);
  return sys.solve();
}

SdpProblem reduce_program(const DualProgram& prog, const AffineSolution& param) {
  SdpProblem sdp;
  const Eigen::Index m = param.basis.cols();
  VectorXq obj_u = VectorXq::Zero(param.particular.size());
  for (const auto& [k, v] : prog.objective.coeffs) obj_u(k) = v;
  sdp.objective = param.basis.transpose() * obj_u;
  sdp.objective_constant =
      (obj_u.transpose() * param.particular)(0, 0) + prog.objective.constant;

  auto push_block = [&](const std::string& name, const MatrixXq& offset,
                        std::vector<MatrixXq> dirs, const MatrixXq& forced_kernel) {
    MatrixXq c;
    if (forced_kernel.cols() == 0)
      c = MatrixXq::Identity(offset.rows(), offset.rows());
    else
      c = kernel_basis(MatrixXq(forced_kernel.transpose()));
    if (c.cols() == 0) return;  // block fully forced to zero
    SdpBlock blk;
    blk.name = name;
    blk.offset = c.transpose() * offset * c;
    for (MatrixXq& d : dirs) blk.dirs.push_back(c.transpose() * d * c);
    sdp.blocks.push_back(std::move(blk));
  };

  for (size_t b = 0; b < prog.blocks.size(); ++b) {
    int d = prog.block_dim(static_cast<int>(b));
    MatrixXq offset = prog.f_block_of(param.particular, static_cast<int>(b));
    std::vector<MatrixXq> dirs;
    for (Eigen::Index j = 0; j < m; ++j)
      dirs.push_back(prog.f_block_of(VectorXq(param.basis.col(j)), static_cast<int>(b)));
    MatrixXq forced(d, 0);
    if (!prog.slack_matrices.empty()) forced = column_space_basis(prog.slack_matrices[b]);
    push_block("F" + std::to_string(prog.blocks[b].first), offset, std::move(dirs), forced);
  }

  // the invariant SOS matrix splits over the four sign-character classes
  MatrixXq m0 = prog.m_of(param.particular);
  std::vector<MatrixXq> mdirs;
  for (Eigen::Index j = 0; j < m; ++j) mdirs.push_back(prog.m_of(VectorXq(param.basis.col(j))));

  // forced kernel of M: monomial vectors at the target triples and all their
  // images under the signed-permutation group (invariance propagates them)
  std::vector<std::vector<VectorXq>> class_kernel(4);
  for (const auto& x : prog.target_triples)
    for (const SignedPermutation& g : signed_permutations()) {
      std::array<Quad, 3> y;
      for (int i = 0; i < 3; ++i)
        y[static_cast<size_t>(g.perm[static_cast<size_t>(i)])] =
            g.flip[static_cast<size_t>(g.perm[static_cast<size_t>(i)])]
                ? -x[static_cast<size_t>(i)]
                : x[static_cast<size_t>(i)];
      std::array<VectorXq, 2> parts;  // rational and radical components
      for (auto& p : parts) p = VectorXq::Zero(prog.sym.size());
      for (int i = 0; i < prog.sym.size(); ++i) {
        Quad val(1);
        const Exponent& e = prog.sym.monos[static_cast<size_t>(i)];
        for (int v = 0; v < 3; ++v)
          for (int p = 0; p < e[static_cast<size_t>(v)]; ++p) val *= y[static_cast<size_t>(v)];
        parts[0](i) = val.a();
        parts[1](i) = val.b();
      }
      for (int c = 0; c < 4; ++c) {
        std::vector<int> idx;
        for (int i = 0; i < prog.sym.size(); ++i)
          if (prog.sym.sign_class[static_cast<size_t>(i)] == c) idx.push_back(i);
        for (const VectorXq& p : parts) {
          VectorXq sub(static_cast<Eigen::Index>(idx.size()));
          bool nonzero = false;
          for (size_t i = 0; i < idx.size(); ++i) {
            sub(static_cast<Eigen::Index>(i)) = p(idx[i]);
            if (p(idx[i]) != 0) nonzero = true;
          }
          if (nonzero) class_kernel[static_cast<size_t>(c)].push_back(std::move(sub));
        }
      }
    }

  for (int c = 0; c < 4; ++c) {
    std::vector<int> idx;
    for (int i = 0; i < prog.sym.size(); ++i)
      if (prog.sym.sign_class[static_cast<size_t>(i)] == c) idx.push_back(i);
    const Eigen::Index d = static_cast<Eigen::Index>(idx.size());
    if (d == 0) continue;
    auto restrict_m = [&](const MatrixXq& full) {
      MatrixXq sub(d, d);
      for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
          sub(i, j) = full(idx[static_cast<size_t>(i)], idx[static_cast<size_t>(j)]);
      return sub;
    };
    MatrixXq offset = restrict_m(m0);
    std::vector<MatrixXq> dirs;
    for (const MatrixXq& md : mdirs) dirs.push_back(restrict_m(md));
    MatrixXq forced(d, 0);
    if (!class_kernel[static_cast<size_t>(c)].empty()) {
      MatrixXq vecs(d, static_cast<Eigen::Index>(class_kernel[static_cast<size_t>(c)].size()));
      for (size_t j = 0; j < class_kernel[static_cast<size_t>(c)].size(); ++j)
        vecs.col(static_cast<Eigen::Index>(j)) = class_kernel[static_cast<size_t>(c)][j];
      forced = column_space_basis(vecs);
    }
    push_block("M" + std::to_string(c), offset, std::move(dirs), forced);
  }
  return sdp;
}

Certificate round_certificate(const DualProgram& prog, const AffineSolution& param,
                              const std::vector<Rational>& lambda, int digits) {
  if (digits < 1) throw std::invalid_argument("round_certificate: digits < 1");
  if (static_cast<Eigen::Index>(lambda.size()) != param.basis.cols())
    throw std::invalid_argument("round_certificate: lambda dimension mismatch");
  const Integer den = boost::multiprecision::pow(Integer(10), static_cast<unsigned>(digits));
  auto floor_q = [](const Rational& r) {
    Integer q = numerator(r) / denominator(r);
    if (r < 0 && q * denominator(r) != numerator(r)) q -= 1;
    return q;
  };
  VectorXq lam(static_cast<Eigen::Index>(lambda.size()));
  for (size_t i = 0; i < lambda.size(); ++i)
    lam(static_cast<Eigen::Index>(i)) =
        Rational(floor_q(Rational(lambda[i] * den + Rational(1, 2))), den);
  VectorXq x = param.assignment(lam);
  Certificate cert;
  cert.c = prog.c_of(x);
  for (size_t b = 0; b < prog.blocks.size(); ++b)
    cert.F.push_back(prog.f_block_of(x, static_cast<int>(b)));
  cert.M = prog.m_of(x);
  cert.monomial_order = prog.sym.monos;
  return cert;
}

}  // namespace threept
