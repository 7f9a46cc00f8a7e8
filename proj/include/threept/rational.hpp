#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <stdexcept>
#include <string>

namespace threept {

using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

inline Integer numerator(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Integer denominator(const Rational& r) { return boost::multiprecision::denominator(r); }

inline int sign(const Rational& r) { return r.sign(); }

/// Serialize as "p" or "p/q" in lowest terms.
inline std::string to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

/// Parse "p" or "p/q".
inline Rational parse_rational(const std::string& s) {
  auto pos = s.find('/');
  try {
    if (pos == std::string::npos) return Rational(Integer(s));
    return Rational(Integer(s.substr(0, pos)), Integer(s.substr(pos + 1)));
  } catch (const std::exception&) {
    throw std::invalid_argument("bad rational literal: " + s);
  }
}

/// Exact square root if r is a perfect square of a rational; returns false otherwise.
inline bool rational_sqrt(const Rational& r, Rational& out) {
  if (r < 0) return false;
  Integer n = numerator(r), d = denominator(r);
  Integer sn = boost::multiprecision::sqrt(n), sd = boost::multiprecision::sqrt(d);
  if (sn * sn != n || sd * sd != d) return false;
  out = Rational(sn, sd);
  return true;
}

}  // namespace threept
