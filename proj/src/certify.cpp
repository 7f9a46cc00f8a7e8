#include "threept/certify.hpp"

#include <atomic>
#include <set>
#include <sstream>
#include <thread>

#include "threept/exact_linalg.hpp"
#include "threept/solver.hpp"

namespace threept {

namespace {

/// (f0(u^2)+f0(v^2)+f0(t^2))/3 or the sphere analogue, as a polynomial.
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

TriPoly h_polynomial(const Certificate& cert, const DualProgram& prog) {
  TriPoly h(cert.c);
  for (size_t b = 0; b < prog.blocks.size(); ++b) {
    int d = prog.block_dim(static_cast<int>(b));
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        if (cert.F[b](i, j) != 0) h += prog.That[b].entry(i, j) * cert.F[b](i, j);
  }
  return h;
}

TriPoly sos_polynomial(const Certificate& cert) {
  TriPoly sos;
  const auto& monos = cert.monomial_order;
  for (size_t i = 0; i < monos.size(); ++i)
    for (size_t j = 0; j < monos.size(); ++j) {
      const Rational& m = cert.M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (m == 0) continue;
      sos.add_term({monos[i][0] + monos[j][0], monos[i][1] + monos[j][1],
                    monos[i][2] + monos[j][2]},
                   m);
    }
  return sos;
}

Quad h_value(const Certificate& cert, const DualProgram& prog, const std::array<Quad, 3>& x) {
  Quad acc(cert.c);
  for (size_t b = 0; b < prog.blocks.size(); ++b) {
    MatrixXe t = eval_kernel(prog.That[b], x[0], x[1], x[2]);
    for (Eigen::Index i = 0; i < t.rows(); ++i)
      for (Eigen::Index j = 0; j < t.cols(); ++j) acc += Quad(cert.F[b](i, j)) * t(i, j);
  }
  return acc;
}

Rational exact_energy(const Code& code, const PolyQ& f) {
  return energy(code, f, EnergyConvention::E_hat).rational_value();
}

int k0_block(const DualProgram& prog) {
  for (size_t b = 0; b < prog.blocks.size(); ++b)
    if (prog.blocks[b].first == 0) return static_cast<int>(b);
  return -1;
}

}  // namespace

VerificationReport verify_certificate(const Certificate& cert, const DualProgram& prog,
                                      const Rational& target) {
  VerificationReport rep;
  rep.target = target;
  if (cert.F.size() != prog.blocks.size())
    throw std::invalid_argument("verify_certificate: block count mismatch");
  for (size_t b = 0; b < cert.F.size(); ++b)
    if (cert.F[b].rows() != prog.block_dim(static_cast<int>(b)))
      throw std::invalid_argument("verify_certificate: block dimension mismatch");
  if (cert.M.rows() != prog.sym.size())
    throw std::invalid_argument("verify_certificate: SOS dimension mismatch");

  // (a) symmetry and positive semidefiniteness, block by block
  for (size_t b = 0; b < cert.F.size(); ++b) {
    std::string name = "F" + std::to_string(prog.blocks[b].first);
    bool ok = is_symmetric(cert.F[b]) && psd_check(cert.F[b]);
    rep.psd_results.emplace_back(name, ok);
    if (!ok) rep.failures.push_back(name + " is not positive semidefinite");
  }
  {
    bool ok = is_symmetric(cert.M) && psd_check(cert.M);
    rep.psd_results.emplace_back("M", ok);
    if (!ok) rep.failures.push_back("M is not positive semidefinite");
  }

  // (b) the polynomial identity, by direct subtraction (independent of the
  // coefficient-matching rows used to build the program)
  TriPoly gap = potential_average(prog.f0, prog.space) - h_polynomial(cert, prog);
  rep.identity_ok = gap == sos_polynomial(cert);
  if (!rep.identity_ok) rep.failures.push_back("polynomial identity fails");

  // (c) complementary slackness, directly from the kernel sums
  rep.slackness_ok = true;
  for (size_t b = 0; b < prog.slack_matrices.size(); ++b) {
    if (mat_inner(cert.F[b], prog.slack_matrices[b]) != 0) {
      rep.slackness_ok = false;
      rep.failures.push_back("slackness fails for F" + std::to_string(prog.blocks[b].first));
    }
  }

  // (d) tangency: value and all first partials of H match the potential
  // average at every target triple
  rep.tangency_ok = true;
  const PolyQ fd = prog.f0.derivative();
  for (const auto& x : prog.target_triples) {
    Quad avg(0), hv = h_value(cert, prog, x);
    for (const auto& xi : x)
      avg += prog.space == Space::projective ? prog.f0.eval<Quad>(xi * xi)
                                             : prog.f0.eval<Quad>(xi);
    if (hv != avg / Quad(3)) {
      rep.tangency_ok = false;
      rep.failures.push_back("tangency value fails");
    }
    for (int var = 0; var < 3; ++var) {
      Quad dh(0);
      for (size_t b = 0; b < prog.blocks.size(); ++b) {
        int d = prog.block_dim(static_cast<int>(b));
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j)
            if (cert.F[b](i, j) != 0)
              dh += Quad(cert.F[b](i, j)) *
                    prog.That[b].entry(i, j).derivative(var).eval<Quad>(x[0], x[1], x[2]);
      }
      const Quad& xv = x[static_cast<size_t>(var)];
      Quad davg = prog.space == Space::projective
                      ? Quad(2) * xv * fd.eval<Quad>(xv * xv) / Quad(3)
                      : fd.eval<Quad>(xv) / Quad(3);
      if (dh != davg) {
        rep.tangency_ok = false;
        rep.failures.push_back("tangency derivative fails");
      }
    }
  }

  int b0 = k0_block(prog);
  MatrixXq f0mat = MatrixXq::Zero(0, 0);
  if (b0 >= 0) f0mat = cert.F[static_cast<size_t>(b0)];
  rep.bound = bound_value(cert.c, f0mat, prog.N);
  rep.bound_matches = rep.bound == target;
  if (!rep.bound_matches)
    rep.failures.push_back("bound " + to_string(rep.bound) + " != target " + to_string(target));

  rep.sharp = rep.identity_ok && rep.all_psd() && rep.bound_matches && rep.slackness_ok &&
              rep.tangency_ok;
  return rep;
}

std::vector<std::array<Quad, 3>> equality_set(const Certificate& cert, const DualProgram& prog,
                                              const std::vector<Rational>& candidate_squares) {
  std::vector<Quad> values;
  for (const Rational& s : candidate_squares) {
    if (s < 0) throw std::invalid_argument("equality_set: negative squared value");
    if (s > 1) continue;  // outside the domain for any triple
    Quad root;
    if (!Quad(s).sqrt_in_context(prog.q, root))
      throw std::domain_error("equality_set: candidate square root outside the field");
    values.push_back(root);
    if (!root.is_zero()) values.push_back(-root);
  }
  TriPoly gap = potential_average(prog.f0, prog.space) - h_polynomial(cert, prog);

  std::set<Triple> seen;
  std::vector<std::array<Quad, 3>> out;
  for (const Quad& u : values)
    for (const Quad& v : values)
      for (const Quad& t : values) {
        Quad det = Quad(1) + Quad(2) * u * v * t - u * u - v * v - t * t;
        if (det.sign() < 0) continue;
        if (gap.eval<Quad>(u, v, t).sign() != 0) continue;
        Triple tri = canonical_triple(
            {RadScalar::from_quad(u), RadScalar::from_quad(v), RadScalar::from_quad(t)},
            prog.space == Space::projective);
        if (!seen.insert(tri).second) continue;
        std::array<Quad, 3> rep;
        for (int i = 0; i < 3; ++i) {
          auto val = tri[static_cast<size_t>(i)].in_field(prog.q);
          if (!val) throw std::logic_error("equality_set: canonical value left the field");
          rep[static_cast<size_t>(i)] = *val;
        }
        out.push_back(rep);
      }
  return out;
}

std::vector<Rational> uniqueness_counts(const Certificate& cert, const DualProgram& prog) {
  const size_t s = prog.target_triples.size();
  if (s == 0) throw std::invalid_argument("uniqueness_counts: program has no target triples");
  LinearSystem sys;
  std::vector<int> idx;
  for (size_t i = 0; i < s; ++i) idx.push_back(sys.unknown("N" + std::to_string(i)));
  LinExpr total;
  for (int k : idx) total.add(k, 1);
  total.constant = -Rational(prog.N) * Rational(prog.N - 1) * Rational(prog.N - 2);
  sys.add_equation(std::move(total));

  for (size_t b = 0; b < prog.blocks.size(); ++b) {
    MatrixXe f(cert.F[b].rows(), cert.F[b].cols());
    for (Eigen::Index i = 0; i < f.rows(); ++i)
      for (Eigen::Index j = 0; j < f.cols(); ++j) f(i, j) = Quad(cert.F[b](i, j));
    Quad constant(0);
    if (prog.blocks[b].first == 0) {
      Rational sum = 0;
      for (Eigen::Index i = 0; i < cert.F[b].rows(); ++i)
        for (Eigen::Index j = 0; j < cert.F[b].cols(); ++j) sum += cert.F[b](i, j);
      constant = Quad(Rational(prog.N) * Rational(prog.N - 2) * sum);
    }
    std::vector<Quad> coef(s);
    for (size_t i = 0; i < s; ++i) {
      const auto& x = prog.target_triples[i];
      coef[i] = mat_inner<Quad>(f, eval_kernel(prog.That[b], x[0], x[1], x[2]));
    }
    for (int part = 0; part < 2; ++part) {  // rational and radical components
      LinExpr e;
      e.constant = part == 0 ? constant.a() : constant.b();
      bool nontrivial = e.constant != 0;
      for (size_t i = 0; i < s; ++i) {
        Rational c = part == 0 ? coef[i].a() : coef[i].b();
        e.add(idx[i], c);
        if (c != 0) nontrivial = true;
      }
      if (nontrivial) sys.add_equation(std::move(e));
    }
  }
  AffineSolution sol = sys.solve();
  if (sol.basis.cols() != 0)
    throw std::runtime_error("uniqueness_counts: system is underdetermined (free dimension " +
                             std::to_string(sol.basis.cols()) + ")");
  std::vector<Rational> counts;
  for (size_t i = 0; i < s; ++i) counts.push_back(sol.particular(idx[i]));
  return counts;
}

namespace {

PotentialReport three_point_job(const Code& code, const PolyQ& f, const RootMultiset& roots,
                                const PipelineOptions& opts) {
  PotentialReport rep;
  rep.potential = f;
  rep.method = "three-point";
  rep.target = exact_energy(code, f);
  try {
    PolyQ f0 = perturb_potential(f, roots, opts.eps);
    auto prog = std::make_shared<DualProgram>(build_dual_program(
        code.N(), code.n, code.space, f0, opts.blocks, opts.sos_degree, &code));
    AffineSolution param = parameterize(*prog);
    SdpProblem sdp = reduce_program(*prog, param);
    SolveOptions sopts;
    sopts.precision_bits = opts.precision_bits;
    SolveResult res = solve_numeric(sdp, sopts);
    if (!res.feasible) {
      rep.detail = "solver: " + res.message;
      return rep;
    }
    for (int digits = opts.digits_min; digits <= opts.digits_max; ++digits) {
      Certificate cert = round_certificate(*prog, param, res.lambda, digits);
      VerificationReport v = verify_certificate(cert, *prog, rep.target);
      if (v.sharp) {
        rep.certified = true;
        rep.digits_used = digits;
        rep.bound = v.bound;
        rep.detail = "verified sharp at " + std::to_string(digits) + " digits";
        rep.program = prog;
        rep.certificate = std::make_shared<Certificate>(std::move(cert));
        return rep;
      }
      if (digits == opts.digits_max) {
        rep.detail = "rounding failed at all digit choices; last failures:";
        for (const auto& fmsg : v.failures) rep.detail += " " + fmsg + ";";
      }
    }
  } catch (const std::exception& e) {
    rep.detail = std::string("error: ") + e.what();
  }
  return rep;
}

}  // namespace

PipelineReport universal_optimality_pipeline(const Code& code, const PipelineOptions& opts) {
  PipelineReport report;
  if (!code.line_like())
    throw std::invalid_argument("universal_optimality_pipeline: code must be projective");

  std::vector<Quad> squares = squared_inner_products(code);
  std::vector<Rational> sq_rational;
  for (const Quad& s : squares) {
    if (!s.is_rational())
      throw std::domain_error(
          "universal_optimality_pipeline: irrational squared inner products are unsupported");
    sq_rational.push_back(s.rational_value());
  }
  Multiset T = reduction_multiset(std::vector<Quad>(squares.begin(), squares.end()),
                                  opts.mult_zero);
  RootMultiset roots;
  for (const auto& [node, mult] : T.entries) roots.emplace_back(node.rational_value(), mult);

  std::vector<Quad> nodes = T.expanded();
  std::vector<PolyQ> basis;
  {
    std::vector<Rational> rnodes;
    for (const Quad& z : nodes) rnodes.push_back(z.rational_value());
    for (const auto& p : partial_products(rnodes)) basis.push_back(p);
  }

  report.potentials.resize(basis.size());
  auto run_one = [&](size_t i) {
    const PolyQ& f = basis[i];
    std::ostringstream name;
    name << "basis[" << i << "] (degree " << f.degree() << ")";
    if (f.degree() <= 0) {
      PotentialReport rep;
      rep.potential = f;
      rep.method = "trivial";
      rep.target = exact_energy(code, f);
      rep.bound = rep.target;  // constant potentials give every code the same energy
      rep.certified = true;
      rep.detail = "constant potential";
      rep.name = name.str();
      report.potentials[i] = std::move(rep);
    } else if (f.degree() == 1) {
      PotentialReport rep;
      rep.potential = f;
      rep.method = "two-point";
      rep.target = exact_energy(code, f);
      try {
        TwoPointResult two = two_point_bound(code.N(), code.n, f, 2 * opts.sos_degree);
        rep.bound = two.bound;
        rep.certified = two.exact && two.bound == rep.target;
        rep.detail = two.exact ? "exact expansion" : "numeric certificate";
        if (!rep.certified)
          rep.detail += "; bound " + to_string(two.bound) + " != energy " + to_string(rep.target);
      } catch (const std::exception& e) {
        rep.detail = std::string("error: ") + e.what();
      }
      rep.name = name.str();
      report.potentials[i] = std::move(rep);
    } else {
      PotentialReport rep = three_point_job(code, f, roots, opts);
      rep.name = name.str();
      report.potentials[i] = std::move(rep);
    }
  };

  if (opts.jobs <= 1) {
    for (size_t i = 0; i < basis.size(); ++i) run_one(i);
  } else {
    std::vector<std::thread> pool;
    std::atomic<size_t> next{0};
    int nthreads = std::min<int>(opts.jobs, static_cast<int>(basis.size()));
    for (int th = 0; th < nthreads; ++th)
      pool.emplace_back([&]() {
        for (size_t i = next.fetch_add(1); i < basis.size(); i = next.fetch_add(1)) run_one(i);
      });
    for (auto& th : pool) th.join();
  }

  report.certified = true;
  for (const auto& rep : report.potentials) report.certified = report.certified && rep.certified;
  report.verdict = report.certified ? "universal optimality certified"
                                    : "certification incomplete";
  return report;
}

std::string format_report(const PipelineReport& report) {
  std::ostringstream os;
  for (const auto& rep : report.potentials) {
    os << rep.name << ": method " << rep.method << ", target " << to_string(rep.target)
       << ", bound " << to_string(rep.bound) << ", "
       << (rep.certified ? "certified" : "NOT certified");
    if (rep.digits_used > 0) os << " (digits " << rep.digits_used << ")";
    if (!rep.detail.empty()) os << " -- " << rep.detail;
    os << "\n";
  }
  os << report.verdict << "\n";
  return os.str();
}

}  // namespace threept
