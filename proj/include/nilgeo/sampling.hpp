#pragma once

#include <cstdint>
#include <random>

#include "nilgeo/rational.hpp"

namespace nilgeo {

// Deterministic sampling helper. Raw engine output is mapped with modular
// arithmetic rather than std distributions so that streams are reproducible
// across standard libraries.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }

  // Uniform-ish integer in [lo, hi].
  long integer(long lo, long hi) {
    if (hi < lo)
      throw InputError("empty integer range");
    std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<long>(next() % span);
  }

  // Rational p/q with |p| <= max_num, 1 <= q <= max_den.
  Rational rational(long max_num, long max_den) {
    long p = integer(-max_num, max_num);
    long q = integer(1, max_den);
    return rat(p, q);
  }

  // Dyadic rational in [-1, 1] with denominator 2^bits.
  Rational dyadic(int bits = 16) {
    long den = 1L << bits;
    return rat(integer(-den, den), den);
  }

  double real(double lo, double hi) {
    double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
  }

  std::uint64_t fork() { return next() ^ 0x9e3779b97f4a7c15ull; }

private:
  std::mt19937_64 eng_;
};

} // namespace nilgeo
