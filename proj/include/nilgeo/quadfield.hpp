#pragma once

#include <array>
#include <optional>
#include <string>

#include "nilgeo/rational.hpp"

namespace nilgeo {

// Element of Q(sqrt2, sqrt3): a + b*sqrt2 + c*sqrt3 + d*sqrt6, all
// coefficients exact rationals. Closed under +,-,*,/; equality is
// coefficient-wise. sqrt6 = sqrt2*sqrt3.
struct QuadExt {
  Rational a{0}, b{0}, c{0}, d{0};

  QuadExt() = default;
  QuadExt(const Rational &r) : a(r) {}
  QuadExt(long n) : a(Rational(n)) {}
  QuadExt(Rational a_, Rational b_, Rational c_, Rational d_)
      : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)) {}

  bool is_zero() const { return a == 0 && b == 0 && c == 0 && d == 0; }
  bool is_rational() const { return b == 0 && c == 0 && d == 0; }

  friend QuadExt operator+(const QuadExt &x, const QuadExt &y) {
    return {x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d};
  }
  friend QuadExt operator-(const QuadExt &x, const QuadExt &y) {
    return {x.a - y.a, x.b - y.b, x.c - y.c, x.d - y.d};
  }
  friend QuadExt operator-(const QuadExt &x) { return {-x.a, -x.b, -x.c, -x.d}; }
  friend QuadExt operator*(const QuadExt &x, const QuadExt &y) {
    return {x.a * y.a + 2 * x.b * y.b + 3 * x.c * y.c + 6 * x.d * y.d,
            x.a * y.b + x.b * y.a + 3 * (x.c * y.d + x.d * y.c),
            x.a * y.c + x.c * y.a + 2 * (x.b * y.d + x.d * y.b),
            x.a * y.d + x.d * y.a + x.b * y.c + x.c * y.b};
  }
  QuadExt &operator+=(const QuadExt &y) { return *this = *this + y; }
  QuadExt &operator-=(const QuadExt &y) { return *this = *this - y; }
  QuadExt &operator*=(const QuadExt &y) { return *this = *this * y; }

  // Galois conjugates: flip the signs of sqrt2 and/or sqrt3.
  QuadExt conj2() const { return {a, -b, c, -d}; }
  QuadExt conj3() const { return {a, b, -c, -d}; }

  QuadExt inverse() const {
    if (is_zero())
      throw Singular("inverse of zero field element");
    QuadExt p = conj2() * conj3() * conj2().conj3();
    QuadExt norm = *this * p; // rational by Galois invariance
    return {p.a / norm.a, p.b / norm.a, p.c / norm.a, p.d / norm.a};
  }
  friend QuadExt operator/(const QuadExt &x, const QuadExt &y) {
    return x * y.inverse();
  }
  QuadExt &operator/=(const QuadExt &y) { return *this = *this / y; }

  friend bool operator==(const QuadExt &x, const QuadExt &y) {
    return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d;
  }
  friend bool operator!=(const QuadExt &x, const QuadExt &y) { return !(x == y); }
};

inline double to_double(const QuadExt &x) {
  return to_double(x.a) + to_double(x.b) * 1.41421356237309504880168872420969808 +
         to_double(x.c) * 1.73205080756887729352744634150587237 +
         to_double(x.d) * 2.44948974278317809819728407470589139;
}

inline std::string to_string(const QuadExt &x) {
  if (x.is_rational())
    return to_string(x.a);
  std::string s = to_string(x.a);
  auto append = [&s](const Rational &coef, const char *surd) {
    if (coef == 0)
      return;
    if (coef > 0)
      s += "+";
    s += to_string(coef) + "*" + surd;
  };
  append(x.b, "sqrt2");
  append(x.c, "sqrt3");
  append(x.d, "sqrt6");
  return s;
}

// Exact sign via shrinking rational enclosures of the surds.
inline int sign(const QuadExt &x) {
  if (x.is_zero())
    return 0;
  if (x.is_rational())
    return sgn(x.a);
  for (unsigned prec = 32;; prec *= 2) {
    mpz_class scale = mpz_class(1) << prec;
    auto bounds = [&](long n) {
      mpz_class lo;
      mpz_class target = n * scale * scale;
      mpz_sqrt(lo.get_mpz_t(), target.get_mpz_t());
      Rational l(lo, scale), u(lo + 1, scale);
      l.canonicalize();
      u.canonicalize();
      return std::pair<Rational, Rational>(l, u);
    };
    auto [s2l, s2u] = bounds(2);
    auto [s3l, s3u] = bounds(3);
    auto [s6l, s6u] = bounds(6);
    auto pick = [](const Rational &coef, const Rational &lo, const Rational &hi,
                   bool want_low) {
      return (coef >= 0) == want_low ? coef * lo : coef * hi;
    };
    Rational lo = x.a + pick(x.b, s2l, s2u, true) + pick(x.c, s3l, s3u, true) +
                  pick(x.d, s6l, s6u, true);
    Rational hi = x.a + pick(x.b, s2l, s2u, false) + pick(x.c, s3l, s3u, false) +
                  pick(x.d, s6l, s6u, false);
    if (lo > 0)
      return 1;
    if (hi < 0)
      return -1;
    if (prec > 4096)
      throw NonConvergent("sign enclosure did not separate from zero");
  }
}

inline bool operator<(const QuadExt &x, const QuadExt &y) {
  return sign(x - y) < 0;
}

inline QuadExt abs_field(const QuadExt &x) { return sign(x) < 0 ? -x : x; }

inline std::optional<Rational> rational_sqrt(const Rational &q) {
  if (q < 0)
    return std::nullopt;
  if (q == 0)
    return Rational(0);
  mpz_class num = q.get_num(), den = q.get_den(), rn, rd;
  mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
  if (rn * rn != num || rd * rd != den)
    return std::nullopt;
  Rational r(rn, rd);
  r.canonicalize();
  return r;
}

// Square root of alpha + beta*sqrt3 inside Q(sqrt3), as a coefficient pair.
inline std::optional<std::pair<Rational, Rational>>
sqrt_q3(const Rational &alpha, const Rational &beta) {
  if (beta == 0) {
    if (auto r = rational_sqrt(alpha))
      return std::make_pair(*r, Rational(0));
    if (auto r = rational_sqrt(alpha / 3))
      return std::make_pair(Rational(0), *r);
    return std::nullopt;
  }
  auto w = rational_sqrt(alpha * alpha - 3 * beta * beta);
  if (!w)
    return std::nullopt;
  for (int branch : {1, -1}) {
    auto p = rational_sqrt((alpha + branch * *w) / 2);
    if (p && *p != 0)
      return std::make_pair(*p, beta / (2 * *p));
  }
  return std::nullopt;
}

// Square root inside Q(sqrt2,sqrt3), found by descending through Q(sqrt3):
// write x = u + v*sqrt2 with u,v in Q(sqrt3) and solve (p + q*sqrt2)^2 = x.
// Returns the nonnegative root when one exists in the field.
inline std::optional<QuadExt> sqrt_in_field(const QuadExt &x) {
  int sg = sign(x);
  if (sg < 0)
    return std::nullopt;
  if (sg == 0)
    return QuadExt(Rational(0));
  auto finish = [&x](QuadExt root) -> std::optional<QuadExt> {
    if (root * root != x)
      return std::nullopt;
    if (sign(root) < 0)
      root = -root;
    return root;
  };
  if (x.b == 0 && x.d == 0) {
    if (auto p = sqrt_q3(x.a, x.c))
      if (auto r = finish(QuadExt(p->first, Rational(0), p->second, Rational(0))))
        return r;
    if (auto q = sqrt_q3(x.a / 2, x.c / 2))
      if (auto r = finish(QuadExt(Rational(0), q->first, Rational(0), q->second)))
        return r;
    return std::nullopt;
  }
  // u^2 - 2 v^2 must be the square of p^2 - 2 q^2 in Q(sqrt3).
  Rational t1 = x.a * x.a + 3 * x.c * x.c - 2 * (x.b * x.b + 3 * x.d * x.d);
  Rational t2 = 2 * x.a * x.c - 4 * x.b * x.d;
  auto w = sqrt_q3(t1, t2);
  if (!w)
    return std::nullopt;
  for (int branch : {1, -1}) {
    auto p = sqrt_q3((x.a + branch * w->first) / 2,
                     (x.c + branch * w->second) / 2);
    if (!p || (p->first == 0 && p->second == 0))
      continue;
    // q = v / (2p) computed inside Q(sqrt3).
    Rational nrm = 2 * (p->first * p->first - 3 * p->second * p->second);
    if (nrm == 0)
      continue;
    Rational q1 = (x.b * p->first - 3 * x.d * p->second) / nrm;
    Rational q2 = (x.d * p->first - x.b * p->second) / nrm;
    if (auto r = finish(QuadExt(p->first, q1, p->second, q2)))
      return r;
  }
  return std::nullopt;
}

} // namespace nilgeo
