#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "nilgeo/errors.hpp"

namespace nilgeo {

// Exact arithmetic scalar. mpq_class keeps values canonicalized through
// arithmetic, so equality is plain comparison.
using Rational = mpq_class;

using VecQ = std::vector<Rational>;

inline Rational rat(long num, long den = 1) {
  if (den == 0)
    throw InputError("rational with zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

// Accepts "p", "-p", "p/q" with optional whitespace trimmed by the caller.
inline Rational parse_rational(const std::string &text) {
  if (text.empty())
    throw InputError("empty rational literal");
  try {
    Rational r(text);
    r.canonicalize();
    if (r.get_den() == 0)
      throw InputError("zero denominator in rational literal '" + text + "'");
    return r;
  } catch (const std::invalid_argument &) {
    throw InputError("malformed rational literal '" + text + "'");
  }
}

inline std::string to_string(const Rational &r) { return r.get_str(); }

inline double to_double(const Rational &r) { return r.get_d(); }

inline Rational pow_rational(const Rational &base, long exp) {
  if (exp == 0)
    return Rational(1);
  Rational b = base;
  long e = exp;
  if (e < 0) {
    if (b == 0)
      throw Singular("zero raised to a negative power");
    b = Rational(1) / b;
    e = -e;
  }
  Rational acc(1);
  while (e > 0) {
    if (e & 1)
      acc *= b;
    b *= b;
    e >>= 1;
  }
  return acc;
}

inline Rational abs_rational(const Rational &r) { return r < 0 ? Rational(-r) : r; }

} // namespace nilgeo
