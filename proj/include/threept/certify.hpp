#pragma once

#include <memory>
#include <string>
#include <vector>

#include "threept/bounds.hpp"
#include "threept/hermite.hpp"

namespace threept {

/// Outcome of the exact certificate checks; sharp requires every one of them.
struct VerificationReport {
  std::vector<std::pair<std::string, bool>> psd_results;
  bool identity_ok = false;
  bool slackness_ok = false;
  bool tangency_ok = false;
  Rational bound = 0;
  Rational target = 0;
  bool bound_matches = false;
  bool sharp = false;
  std::vector<std::string> failures;  // append-only audit log

  bool all_psd() const {
    for (const auto& [name, ok] : psd_results)
      if (!ok) return false;
    return true;
  }
};

/// Exact verification: PSD of every block, the polynomial identity by direct
/// subtraction, slackness and tangency at the program's target triples, and
/// the bound against the claimed target.  All arithmetic is rational.
VerificationReport verify_certificate(const Certificate& cert, const DualProgram& prog,
                                      const Rational& target);

/// Canonical triples in D with squared entries drawn from the candidate set
/// at which the certificate's gap (potential average minus H) vanishes.
std::vector<std::array<Quad, 3>> equality_set(const Certificate& cert, const DualProgram& prog,
                                              const std::vector<Rational>& candidate_squares);

/// Exact solution of the slackness system for the class counts N_i:
/// sum N_i = N(N-1)(N-2) and <F_k, N(N-2) delta_{k0} J + sum N_i T_k(x_i)> = 0.
/// Throws if the system is underdetermined or inconsistent.
std::vector<Rational> uniqueness_counts(const Certificate& cert, const DualProgram& prog);

struct PotentialReport {
  std::string name;
  PolyQ potential;
  std::string method;  // "trivial", "two-point", or "three-point"
  Rational target = 0;
  Rational bound = 0;
  bool certified = false;
  int digits_used = 0;
  std::string detail;
  std::shared_ptr<DualProgram> program;  // three-point jobs only
  std::shared_ptr<Certificate> certificate;
};

struct PipelineReport {
  std::vector<PotentialReport> potentials;
  bool certified = false;
  std::string verdict;
};

struct PipelineOptions {
  unsigned precision_bits = 256;
  int jobs = 1;
  Rational eps = Rational(1, 1000);
  int digits_min = 8;
  int digits_max = 12;
  int mult_zero = 3;  // multiplicity of 0 in the reduction multiset
  std::vector<std::pair<int, int>> blocks = rhombic_blocks();
  int sos_degree = 7;
};

/// End-to-end universal-optimality proof: Hermite reduction to the partial-
/// product basis, then trivial/two-point/three-point certification per basis
/// potential.  The verdict is "universal optimality certified" only when every
/// basis potential is certified sharp against the code's exact energy.
PipelineReport universal_optimality_pipeline(const Code& code, const PipelineOptions& opts = {});

std::string format_report(const PipelineReport& report);

}  // namespace threept
