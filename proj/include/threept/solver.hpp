#pragma once

#include <string>
#include <vector>

#include "threept/bounds.hpp"

namespace threept {

/// Generic dense SDP over free parameters lambda: each block
/// offset + sum_i lambda_i dirs[i] must be PSD; objective . lambda + constant
/// is maximized (zero objective = pure feasibility/centering).
struct SdpBlock {
  std::string name;
  MatrixXq offset;
  std::vector<MatrixXq> dirs;
};

struct SdpProblem {
  VectorXq objective;
  Rational objective_constant = 0;
  std::vector<SdpBlock> blocks;
  int dim() const { return static_cast<int>(objective.size()); }
};

struct SolveOptions {
  unsigned precision_bits = 256;
  int max_iter = 400;
  // phase 1 declares strict feasibility once the shift drops below
  // -2^strict_margin_log2; programs whose interior is only a tiny explicit
  // relaxation wide need a smaller margin than the default
  int strict_margin_log2 = -20;
};

struct SolveResult {
  bool feasible = false;
  std::vector<Rational> lambda;  // high-precision rational image of the iterate
  Rational objective = 0;
  int iterations = 0;
  std::string message;
};

/// Interior-point solve: phase-1 shift minimization to find a strictly
/// feasible point, then analytic centering (zero objective) or barrier
/// path-following (nonzero objective) at the requested mantissa precision.
SolveResult solve_numeric(const SdpProblem& prob, const SolveOptions& opts);

/// Exact affine parameterization of a dual program's linear constraints.
AffineSolution parameterize(const DualProgram& prog);

/// Expresses the program's semidefinite blocks over the free parameters of
/// the parameterization, with the kernels forced by slackness and tangency
/// projected out exactly before any numeric work.
SdpProblem reduce_program(const DualProgram& prog, const AffineSolution& param);

/// Rounds the free parameters to denominator 10^digits (values below half an
/// ulp snap to zero) and rebuilds the exact certificate.
Certificate round_certificate(const DualProgram& prog, const AffineSolution& param,
                              const std::vector<Rational>& lambda, int digits);

/// SDPA sparse format (.dat-s) exchange.
void sdpa_export(const SdpProblem& prob, const std::string& path);
SdpProblem sdpa_import_problem(const std::string& path);
/// Parses a solver output file (xVec = {...} or plain numbers) into lambda.
std::vector<Rational> sdpa_import_solution(const std::string& path, int expected_dim);

}  // namespace threept
