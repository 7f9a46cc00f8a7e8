#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "threept/certify.hpp"
#include "threept/solver.hpp"

using namespace threept;

namespace {

PolyQ tvar() { return PolyQ::variable(); }

struct RhombicFixture {
  std::shared_ptr<DualProgram> prog;
  Certificate cert;
};

// One numeric solve shared by every test that needs a genuine certificate.
const RhombicFixture& rhombic_certificate() {
  static RhombicFixture fix = [] {
    RhombicFixture f;
    PolyQ f0 = perturb_potential(tvar() * tvar(), default_perturbation_roots(),
                                 Rational(1, 1000));
    Code code = builtin("rhombic7");
    f.prog = std::make_shared<DualProgram>(
        build_dual_program(7, 3, Space::projective, f0, rhombic_blocks(), 7, &code));
    AffineSolution param = parameterize(*f.prog);
    SdpProblem sdp = reduce_program(*f.prog, param);
    SolveOptions sopts;
    sopts.precision_bits = 256;
    SolveResult res = solve_numeric(sdp, sopts);
    REQUIRE(res.feasible);
    f.cert = round_certificate(*f.prog, param, res.lambda, 8);
    return f;
  }();
  return fix;
}

Triple canon_of(const std::array<Quad, 3>& x) {
  return canonical_triple(
      {RadScalar::from_quad(x[0]), RadScalar::from_quad(x[1]), RadScalar::from_quad(x[2])},
      true);
}

}  // namespace

TEST_CASE("constant-potential certificate verifies sharp") {
  PolyQ f0(Rational(3, 2));
  DualProgram prog = build_dual_program(7, 3, Space::projective, f0, {}, 0, nullptr);
  Certificate cert;
  cert.c = Rational(3, 2);
  cert.M = MatrixXq::Zero(1, 1);
  cert.monomial_order = {{0, 0, 0}};
  VerificationReport rep = verify_certificate(cert, prog, Rational(63, 2));
  CHECK(rep.identity_ok);
  CHECK(rep.all_psd());
  CHECK(rep.slackness_ok);  // vacuously, no target data
  CHECK(rep.tangency_ok);
  CHECK(rep.bound == Rational(63, 2));
  CHECK(rep.sharp);
  // wrong target: bound mismatch only
  VerificationReport bad = verify_certificate(cert, prog, Rational(1));
  CHECK(bad.identity_ok);
  CHECK_FALSE(bad.bound_matches);
  CHECK_FALSE(bad.sharp);
  CHECK_FALSE(bad.failures.empty());
}

TEST_CASE("rhombic certificate is sharp at 38/27") {
  const auto& fix = rhombic_certificate();
  VerificationReport rep = verify_certificate(fix.cert, *fix.prog, Rational(38, 27));
  CHECK(rep.identity_ok);
  CHECK(rep.all_psd());
  CHECK(rep.slackness_ok);
  CHECK(rep.tangency_ok);
  CHECK(rep.bound == Rational(38, 27));
  CHECK(rep.sharp);
  CHECK(rep.failures.empty());
}

TEST_CASE("zero certificate fails the identity") {
  const auto& fix = rhombic_certificate();
  Certificate zero = fix.cert;
  zero.c = 0;
  for (auto& f : zero.F) f.setZero();
  zero.M.setZero();
  VerificationReport rep = verify_certificate(zero, *fix.prog, Rational(38, 27));
  CHECK_FALSE(rep.identity_ok);
  CHECK(rep.all_psd());  // zero matrices are PSD
  CHECK_FALSE(rep.sharp);
}

TEST_CASE("a perturbed entry is detected") {
  const auto& fix = rhombic_certificate();
  const Rational tiny(1, Integer("1000000000"));
  {
    Certificate c = fix.cert;
    c.M(0, 0) += tiny;
    VerificationReport rep = verify_certificate(c, *fix.prog, Rational(38, 27));
    CHECK_FALSE(rep.identity_ok);
    CHECK_FALSE(rep.sharp);
  }
  {
    Certificate c = fix.cert;
    c.F[0](1, 2) += tiny;
    c.F[0](2, 1) += tiny;
    VerificationReport rep = verify_certificate(c, *fix.prog, Rational(38, 27));
    CHECK_FALSE(rep.sharp);
    CHECK_FALSE(rep.identity_ok);
  }
}

TEST_CASE("equality set of the rhombic certificate") {
  const auto& fix = rhombic_certificate();
  CHECK(equality_set(fix.cert, *fix.prog, {}).empty());
  // only the orthogonal triple survives when 0 is the sole candidate
  auto zeros = equality_set(fix.cert, *fix.prog, {Rational(0)});
  REQUIRE(zeros.size() == 1);
  for (const Quad& x : zeros[0]) CHECK(x.is_zero());
  // the full candidate set recovers exactly the five code classes
  auto all = equality_set(fix.cert, *fix.prog,
                          {Rational(0), Rational(1, 9), Rational(1, 3)});
  CHECK(all.size() == 5);
  std::set<Triple> found, expected;
  for (const auto& x : all) found.insert(canon_of(x));
  for (const auto& x : fix.prog->target_triples) expected.insert(canon_of(x));
  CHECK(found == expected);
}

TEST_CASE("uniqueness counts solve to the code's class sizes") {
  const auto& fix = rhombic_certificate();
  std::vector<Rational> counts = uniqueness_counts(fix.cert, *fix.prog);
  CHECK(counts == fix.prog->target_counts);
  std::multiset<Rational> ms(counts.begin(), counts.end());
  CHECK(ms == std::multiset<Rational>{6, 24, 36, 72, 72});
  // scaling the multipliers rescales the equations but not the solution
  Certificate scaled = fix.cert;
  for (auto& f : scaled.F) f *= Rational(2);
  CHECK(uniqueness_counts(scaled, *fix.prog) == counts);
  // without the slackness equations the system is underdetermined
  Certificate blank = fix.cert;
  for (auto& f : blank.F) f.setZero();
  CHECK_THROWS_AS(uniqueness_counts(blank, *fix.prog), std::runtime_error);
}

TEST_CASE("last basis potential has nonpositive energy on tight codes") {
  // f(s) = s^3 (s - 1/9)^2 (s - 1/3) is <= 0 on [0, 1/3], so any code whose
  // squared inner products stay below 1/3 has nonpositive energy
  PolyQ s = tvar();
  PolyQ f = s * s * s * (s - PolyQ(Rational(1, 9))) * (s - PolyQ(Rational(1, 9))) *
            (s - PolyQ(Rational(1, 3)));
  for (const char* name : {"rhombic7", "icosa6", "orthogonal_lines(3,3)"}) {
    Code code = builtin(name);
    auto sq = squared_inner_products(code);
    REQUIRE(!sq.empty());
    REQUIRE(sq.back() <= Quad(Rational(1, 3)));
    CHECK(energy(code, f, EnergyConvention::E_hat).sign() <= 0);
  }
  CHECK(energy(builtin("rhombic7"), f, EnergyConvention::E_hat).is_zero());
}

TEST_CASE("pipeline on orthogonal lines needs no three-point step") {
  Code code = builtin("orthogonal_lines(3,3)");
  PipelineOptions opts;
  opts.mult_zero = 2;
  PipelineReport report = universal_optimality_pipeline(code, opts);
  REQUIRE(report.potentials.size() == 2);
  CHECK(report.potentials[0].method == "trivial");
  CHECK(report.potentials[0].target == Rational(3));
  CHECK(report.potentials[1].method == "two-point");
  CHECK(report.potentials[1].target == Rational(0));
  CHECK(report.potentials[1].bound == Rational(0));
  for (const auto& p : report.potentials) CHECK(p.certified);
  CHECK(report.certified);
  CHECK(report.verdict == "universal optimality certified");
  CHECK(format_report(report).find("universal optimality certified") != std::string::npos);
}

TEST_CASE("pipeline rejects non-projective input") {
  Code code = builtin("petersen10_S3");
  if (!code.line_like())
    CHECK_THROWS_AS(universal_optimality_pipeline(code), std::invalid_argument);
}
