#include "nilgeo/lie_algebra.hpp"

#include <set>

namespace nilgeo {

LieAlgebra::LieAlgebra(int dim, std::vector<std::string> names,
                       const std::vector<BracketSpec> &brackets)
    : n_(dim), names_(std::move(names)),
      table_(static_cast<size_t>(dim) * dim * dim, Rational(0)) {
  if (n_ <= 0)
    throw InputError("algebra dimension must be positive");
  if (names_.empty()) {
    for (int i = 0; i < n_; ++i)
      names_.push_back("e" + std::to_string(i + 1));
  }
  if (static_cast<int>(names_.size()) != n_)
    throw InputError("basis name count does not match dimension");
  std::set<std::pair<int, int>> seen;
  for (const auto &b : brackets) {
    if (b.i < 0 || b.j < 0 || b.i >= n_ || b.j >= n_)
      throw IndexOutOfRange("bracket index out of range");
    if (b.i >= b.j)
      throw InputError("brackets must be listed with i < j only");
    if (!seen.insert({b.i, b.j}).second)
      throw InputError("duplicate bracket entry");
    for (const auto &t : b.result) {
      if (t.k < 0 || t.k >= n_)
        throw IndexOutOfRange("bracket target index out of range");
      table_[(static_cast<size_t>(b.i) * n_ + b.j) * n_ + t.k] += t.c;
      table_[(static_cast<size_t>(b.j) * n_ + b.i) * n_ + t.k] -= t.c;
    }
  }
  check_jacobi();
  compute_lcs();
}

VecQ LieAlgebra::bracket(const VecQ &x, const VecQ &y) const {
  if (static_cast<int>(x.size()) != n_ || static_cast<int>(y.size()) != n_)
    throw IndexOutOfRange("vector dimension mismatch");
  VecQ z(n_, Rational(0));
  for (int i = 0; i < n_; ++i) {
    if (x[i] == 0)
      continue;
    for (int j = 0; j < n_; ++j) {
      if (y[j] == 0 || i == j)
        continue;
      Rational f = x[i] * y[j];
      for (int k = 0; k < n_; ++k) {
        const Rational &cc = c(i, j, k);
        if (cc != 0)
          z[k] += f * cc;
      }
    }
  }
  return z;
}

MatQ LieAlgebra::ad(const VecQ &x) const {
  MatQ m(n_, n_);
  for (int j = 0; j < n_; ++j) {
    VecQ ej(n_, Rational(0));
    ej[j] = 1;
    VecQ col = bracket(x, ej);
    for (int i = 0; i < n_; ++i)
      m(i, j) = col[i];
  }
  return m;
}

SubspaceQ LieAlgebra::bracket_span(const SubspaceQ &s, const SubspaceQ &t) const {
  std::vector<VecQ> rows;
  for (int i = 0; i < s.dim(); ++i)
    for (int j = 0; j < t.dim(); ++j)
      rows.push_back(bracket(s.basis().row(i), t.basis().row(j)));
  if (rows.empty())
    return SubspaceQ(n_);
  return SubspaceQ::span_rows(rows);
}

bool LieAlgebra::is_subalgebra(const SubspaceQ &h) const {
  return h.contains(bracket_span(h, h));
}

bool LieAlgebra::is_ideal(const SubspaceQ &h) const {
  return h.contains(bracket_span(SubspaceQ::full(n_), h));
}

void LieAlgebra::check_jacobi() const {
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j)
      for (int k = j + 1; k < n_; ++k) {
        VecQ ei(n_, Rational(0)), ej(n_, Rational(0)), ek(n_, Rational(0));
        ei[i] = 1;
        ej[j] = 1;
        ek[k] = 1;
        VecQ s = bracket(ei, bracket(ej, ek));
        VecQ t = bracket(ej, bracket(ek, ei));
        VecQ u = bracket(ek, bracket(ei, ej));
        for (int m = 0; m < n_; ++m)
          if (s[m] + t[m] + u[m] != 0)
            throw InputError("Jacobi identity fails on basis triple (" +
                             names_[i] + "," + names_[j] + "," + names_[k] + ")");
      }
}

void LieAlgebra::compute_lcs() {
  lcs_.clear();
  SubspaceQ g = SubspaceQ::full(n_);
  lcs_.push_back(g);
  SubspaceQ cur = g;
  while (cur.dim() > 0) {
    SubspaceQ next = bracket_span(g, cur);
    if (next.dim() >= cur.dim())
      throw NotNilpotent("lower central series stalls at dimension " +
                         std::to_string(cur.dim()));
    lcs_.push_back(next);
    cur = next;
  }
  class_ = static_cast<int>(lcs_.size()) - 1;
  if (class_ == 0)
    class_ = 1; // dim>0 abelian algebra: treat [g,g]=0 as class 1
}

ValidationReport validate(const LieAlgebra &L) {
  ValidationReport r;
  r.jacobi_ok = true; // construction would have thrown otherwise
  r.nilpotency_class = L.nilpotency_class();
  for (const auto &s : L.lower_central_series())
    r.lower_central_dims.push_back(s.dim());
  return r;
}

SubspaceQ generated_subalgebra(const LieAlgebra &L, const SubspaceQ &seed) {
  SubspaceQ cur = seed;
  while (true) {
    SubspaceQ next = cur + L.bracket_span(cur, cur);
    if (next.dim() == cur.dim())
      return cur;
    cur = next;
  }
}

SubspaceQ normalizer(const LieAlgebra &L, const SubspaceQ &h) {
  if (!L.is_subalgebra(h))
    throw NotSubalgebra("normalizer requires a subalgebra");
  int n = L.dim();
  // Functionals vanishing on h are the kernel rows of its basis matrix.
  Mat<Rational> functionals = kernel(h.basis());
  std::vector<std::vector<Rational>> constraint_rows;
  for (int l = 0; l < h.dim(); ++l) {
    VecQ y = h.basis().row(l);
    // row_f * (-ad(y)) * x = row_f * [x, y]
    MatQ bx(n, n);
    for (int j = 0; j < n; ++j) {
      VecQ ej(n, Rational(0));
      ej[j] = 1;
      VecQ col = L.bracket(ej, y);
      for (int i = 0; i < n; ++i)
        bx(i, j) = col[i];
    }
    for (int f = 0; f < functionals.rows; ++f) {
      std::vector<Rational> row(n, Rational(0));
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
          row[j] += functionals(f, i) * bx(i, j);
      constraint_rows.push_back(std::move(row));
    }
  }
  if (constraint_rows.empty())
    return SubspaceQ::full(n);
  return SubspaceQ::span(kernel(from_rows(constraint_rows)));
}

QuotientResult quotient(const LieAlgebra &L, const SubspaceQ &h) {
  if (!L.is_ideal(h))
    throw NotIdeal("quotient requires an ideal");
  int n = L.dim();
  std::vector<bool> is_pivot(n, false);
  for (int p : h.pivots())
    is_pivot[p] = true;
  std::vector<int> comp;
  for (int j = 0; j < n; ++j)
    if (!is_pivot[j])
      comp.push_back(j);
  int m = static_cast<int>(comp.size());

  // Reduce mod h, then read off complement coordinates.
  auto project = [&](VecQ v) {
    for (int r = 0; r < h.dim(); ++r) {
      Rational f = v[h.pivots()[r]];
      if (f == 0)
        continue;
      for (int j = 0; j < n; ++j)
        v[j] -= f * h.basis()(r, j);
    }
    VecQ q(m, Rational(0));
    for (int a = 0; a < m; ++a)
      q[a] = v[comp[a]];
    return q;
  };

  MatQ proj(m, n), lift(n, m);
  for (int j = 0; j < n; ++j) {
    VecQ ej(n, Rational(0));
    ej[j] = 1;
    VecQ q = project(ej);
    for (int a = 0; a < m; ++a)
      proj(a, j) = q[a];
  }
  for (int a = 0; a < m; ++a) {
    VecQ rep(n, Rational(0));
    rep[comp[a]] = 1;
    for (int r = 0; r < h.dim(); ++r) {
      Rational f = rep[h.pivots()[r]];
      if (f == 0)
        continue;
      for (int j = 0; j < n; ++j)
        rep[j] -= f * h.basis()(r, j);
    }
    for (int i = 0; i < n; ++i)
      lift(i, a) = rep[i];
  }

  std::vector<BracketSpec> brackets;
  std::vector<std::string> names;
  for (int a = 0; a < m; ++a)
    names.push_back(L.names()[comp[a]]);
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) {
      VecQ xa = lift.transposed().row(a), xb = lift.transposed().row(b);
      VecQ q = project(L.bracket(xa, xb));
      BracketSpec spec{a, b, {}};
      for (int k = 0; k < m; ++k)
        if (q[k] != 0)
          spec.result.push_back({k, q[k]});
      if (!spec.result.empty())
        brackets.push_back(std::move(spec));
    }
  return QuotientResult{LieAlgebra(m, names, brackets), proj, lift};
}

SubalgebraResult restrict_to(const LieAlgebra &L, const SubspaceQ &h) {
  if (!L.is_subalgebra(h))
    throw NotSubalgebra("restriction requires a subalgebra");
  int d = h.dim();
  std::vector<BracketSpec> brackets;
  std::vector<std::string> names;
  for (int a = 0; a < d; ++a)
    names.push_back("b" + std::to_string(a + 1));
  for (int a = 0; a < d; ++a)
    for (int b = a + 1; b < d; ++b) {
      VecQ coords = h.coordinates(L.bracket(h.basis().row(a), h.basis().row(b)));
      BracketSpec spec{a, b, {}};
      for (int k = 0; k < d; ++k)
        if (coords[k] != 0)
          spec.result.push_back({k, coords[k]});
      if (!spec.result.empty())
        brackets.push_back(std::move(spec));
    }
  return SubalgebraResult{LieAlgebra(d, names, brackets),
                          h.basis().transposed(), h};
}

LieAlgebra change_basis(const LieAlgebra &L, const MatQ &T) {
  int n = L.dim();
  if (T.rows != n || T.cols != n)
    throw IndexOutOfRange("change of basis must be n x n");
  MatQ Tinv = inverse(T);
  std::vector<BracketSpec> brackets;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      VecQ fa(n), fb(n);
      for (int i = 0; i < n; ++i) {
        fa[i] = T(i, a);
        fb[i] = T(i, b);
      }
      VecQ old = L.bracket(fa, fb);
      VecQ neu = matvec(Tinv, old);
      BracketSpec spec{a, b, {}};
      for (int k = 0; k < n; ++k)
        if (neu[k] != 0)
          spec.result.push_back({k, neu[k]});
      if (!spec.result.empty())
        brackets.push_back(std::move(spec));
    }
  return LieAlgebra(n, L.names(), brackets);
}

LieAlgebra make_heisenberg() {
  return LieAlgebra(3, {"e1", "e2", "e3"}, {{0, 1, {{2, Rational(1)}}}});
}

LieAlgebra make_abelian(int n) { return LieAlgebra(n, {}, {}); }

LieAlgebra direct_sum(const LieAlgebra &A, const LieAlgebra &B) {
  int n = A.dim() + B.dim();
  std::vector<std::string> names;
  for (const auto &s : A.names())
    names.push_back(s);
  for (const auto &s : B.names())
    names.push_back(s + "'");
  std::vector<BracketSpec> brackets;
  for (int i = 0; i < A.dim(); ++i)
    for (int j = i + 1; j < A.dim(); ++j) {
      BracketSpec spec{i, j, {}};
      for (int k = 0; k < A.dim(); ++k)
        if (A.c(i, j, k) != 0)
          spec.result.push_back({k, A.c(i, j, k)});
      if (!spec.result.empty())
        brackets.push_back(std::move(spec));
    }
  for (int i = 0; i < B.dim(); ++i)
    for (int j = i + 1; j < B.dim(); ++j) {
      BracketSpec spec{A.dim() + i, A.dim() + j, {}};
      for (int k = 0; k < B.dim(); ++k)
        if (B.c(i, j, k) != 0)
          spec.result.push_back({A.dim() + k, B.c(i, j, k)});
      if (!spec.result.empty())
        brackets.push_back(std::move(spec));
    }
  return LieAlgebra(n, names, brackets);
}

} // namespace nilgeo
