#include "nilgeo/bch.hpp"

#include <map>
#include <mutex>

namespace nilgeo {

namespace {

Rational factorial(int k) {
  Rational r(1);
  for (int i = 2; i <= k; ++i)
    r *= i;
  return r;
}

// Appends every word X^{p1} Y^{q1} ... X^{pk} Y^{qk} of the given total
// degree, with coefficient (-1)^{k-1} / (k * degree * prod p_i! q_i!).
void emit_words(int degree, std::vector<DynkinWord> &out) {
  struct Block {
    int p, q;
  };
  std::vector<Block> blocks;
  std::function<void(int)> rec = [&](int remaining) {
    if (remaining == 0) {
      int k = static_cast<int>(blocks.size());
      std::vector<bool> letters;
      Rational denom = Rational(k) * Rational(degree);
      for (const auto &b : blocks) {
        for (int i = 0; i < b.p; ++i)
          letters.push_back(false);
        for (int i = 0; i < b.q; ++i)
          letters.push_back(true);
        denom *= factorial(b.p) * factorial(b.q);
      }
      // Left-nested bracket vanishes when the two innermost letters agree.
      int m = static_cast<int>(letters.size());
      if (m >= 2 && letters[m - 1] == letters[m - 2])
        return;
      Rational coef = Rational(k % 2 == 1 ? 1 : -1) / denom;
      out.push_back(DynkinWord{std::move(letters), coef});
      return;
    }
    for (int p = 0; p <= remaining; ++p)
      for (int q = 0; p + q <= remaining; ++q) {
        if (p + q == 0)
          continue;
        blocks.push_back({p, q});
        rec(remaining - p - q);
        blocks.pop_back();
      }
  };
  rec(degree);
}

} // namespace

const std::vector<DynkinWord> &dynkin_words(int max_degree) {
  static std::mutex mu;
  static std::map<int, std::vector<DynkinWord>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(max_degree);
  if (it != cache.end())
    return it->second;
  std::vector<DynkinWord> words;
  for (int degree = 2; degree <= max_degree; ++degree)
    emit_words(degree, words);
  return cache.emplace(max_degree, std::move(words)).first->second;
}

VecQ bch_multiply(const LieAlgebra &L, const VecQ &x, const VecQ &y) {
  int n = L.dim();
  if (static_cast<int>(x.size()) != n || static_cast<int>(y.size()) != n)
    throw IndexOutOfRange("group element dimension mismatch");
  VecQ z(n);
  for (int i = 0; i < n; ++i)
    z[i] = x[i] + y[i];
  if (L.nilpotency_class() < 2)
    return z;
  MatQ adx = L.ad(x), ady = L.ad(y);
  for (const auto &word : dynkin_words(L.nilpotency_class())) {
    int m = static_cast<int>(word.letters.size());
    VecQ v = word.letters[m - 1] ? y : x;
    for (int i = m - 2; i >= 0; --i)
      v = matvec(word.letters[i] ? ady : adx, v);
    bool zero = true;
    for (const auto &vi : v)
      if (vi != 0) {
        zero = false;
        break;
      }
    if (zero)
      continue;
    for (int i = 0; i < n; ++i)
      z[i] += word.coefficient * v[i];
  }
  return z;
}

FloatGroup::FloatGroup(const LieAlgebra &L)
    : n(L.dim()), cls(L.nilpotency_class()),
      table(static_cast<size_t>(n) * n * n, 0.0) {
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        table[(static_cast<size_t>(i) * n + j) * n + k] = to_double(L.c(i, j, k));
}

std::vector<double> FloatGroup::bracket(const std::vector<double> &x,
                                        const std::vector<double> &y) const {
  std::vector<double> z(n, 0.0);
  for (int i = 0; i < n; ++i) {
    if (x[i] == 0.0)
      continue;
    for (int j = 0; j < n; ++j) {
      if (y[j] == 0.0 || i == j)
        continue;
      double f = x[i] * y[j];
      for (int k = 0; k < n; ++k)
        z[k] += f * table[(static_cast<size_t>(i) * n + j) * n + k];
    }
  }
  return z;
}

std::vector<double> FloatGroup::multiply(const std::vector<double> &x,
                                         const std::vector<double> &y) const {
  std::vector<double> z(n);
  for (int i = 0; i < n; ++i)
    z[i] = x[i] + y[i];
  if (cls < 2)
    return z;
  for (const auto &word : dynkin_words(cls)) {
    int m = static_cast<int>(word.letters.size());
    std::vector<double> v = word.letters[m - 1] ? y : x;
    for (int i = m - 2; i >= 0; --i)
      v = bracket(word.letters[i] ? y : x, v);
    double coef = to_double(word.coefficient);
    for (int i = 0; i < n; ++i)
      z[i] += coef * v[i];
  }
  return z;
}

} // namespace nilgeo
