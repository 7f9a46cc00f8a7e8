#pragma once

#include <optional>
#include <string>
#include <utility>

#include "threept/codes.hpp"

namespace threept {

enum class OrthoplexStatus { meets, sharp, violates, not_applicable };

std::string to_string(OrthoplexStatus s);

struct OrthoplexVerdict {
  bool applicable = false;
  RadScalar bound_cos;                    // 1/sqrt(n)
  std::optional<RadScalar> code_max_cos;  // largest |<x,y>| over distinct lines
  OrthoplexStatus status = OrthoplexStatus::not_applicable;
};

/// Rankin applicability for an N-point antipodal code in S^{n-1}:
/// applicable iff n(n+1)/2 < N/2 <= n(n+1) - 2, with bound 1/sqrt(n).
std::pair<bool, RadScalar> applicable_bound(int n, int N_antipodal);

/// <phi(x), phi(y)> for phi(x) = (x tensor x - I/n)/sqrt(1 - 1/n), computed
/// from the explicit tensor (not by evaluating P_2^n).  Inputs must be unit
/// vectors of the same dimension.
Quad phi_inner(const VectorXe& x, const VectorXe& y);

/// Gram matrix with entries f(<x,y>) over one representative per line.
/// Requires f(1) = 1 and a nonnegative Gegenbauer expansion in dimension c.n;
/// the overload without f uses P_2^n, reproducing the Gram of the phi images.
MatrixXe transform_code(const Code& c, const PolyQ& f);
MatrixXe transform_code(const Code& c);

/// Orthoplex verdict for an antipodal (line-like) code.
OrthoplexVerdict check_code(const Code& c);

}  // namespace threept
