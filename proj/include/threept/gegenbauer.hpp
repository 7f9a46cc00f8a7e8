#pragma once

#include "threept/poly.hpp"

namespace threept {

/// Gegenbauer polynomial P_k^n on [-1,1], weight (1-t^2)^((n-3)/2),
/// normalized so that P_k^n(1) = 1.  Three-term recurrence:
///   (k+n-2) P_{k+1} = (2k+n-2) t P_k - k P_{k-1}.
inline PolyQ gegenbauer(int n, int k) {
  if (n < 2) throw std::invalid_argument("gegenbauer: need n >= 2");
  if (k < 0) throw std::invalid_argument("gegenbauer: need k >= 0");
  PolyQ prev(Rational(1));
  if (k == 0) return prev;
  PolyQ cur = PolyQ::variable();
  const PolyQ t = PolyQ::variable();
  for (int j = 1; j < k; ++j) {
    PolyQ next = t * cur * Rational(2 * j + n - 2) - prev * Rational(j);
    next /= Rational(j + n - 2);
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

/// Coefficients a_k of f = sum a_k P_k^n, k = 0..deg(f).
inline std::vector<Rational> gegenbauer_expansion(int n, const PolyQ& f) {
  PolyQ rem = f;
  int d = std::max(rem.degree(), 0);
  std::vector<Rational> a(d + 1, Rational(0));
  for (int k = d; k >= 0; --k) {
    if (rem.degree() < k) continue;
    PolyQ pk = gegenbauer(n, k);
    Rational c = rem.coeff(k) / pk.coeff(k);
    a[k] = c;
    rem -= pk * c;
  }
  if (!rem.is_zero()) throw std::logic_error("gegenbauer_expansion: nonzero remainder");
  return a;
}

}  // namespace threept
