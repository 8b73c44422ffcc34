#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "nilgeo/errors.hpp"
#include "nilgeo/rational.hpp"

namespace nilgeo {

// Dense row-major matrix over an exact field (Rational or QuadExt).
// Sizes in this project stay tiny (dim <= 8, constraint systems <= a few
// hundred rows), so plain fraction-free-less Gaussian elimination is fine.
template <class F> struct Mat {
  int rows = 0, cols = 0;
  std::vector<F> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, F(0)) {}

  F &operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  const F &operator()(int i, int j) const {
    return a[static_cast<size_t>(i) * cols + j];
  }

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i)
      m(i, i) = F(1);
    return m;
  }

  friend bool operator==(const Mat &x, const Mat &y) {
    return x.rows == y.rows && x.cols == y.cols && x.a == y.a;
  }

  friend Mat operator*(const Mat &x, const Mat &y) {
    if (x.cols != y.rows)
      throw IndexOutOfRange("matrix product shape mismatch");
    Mat r(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
      for (int k = 0; k < x.cols; ++k) {
        const F &xik = x(i, k);
        if (xik == F(0))
          continue;
        for (int j = 0; j < y.cols; ++j)
          r(i, j) += xik * y(k, j);
      }
    return r;
  }

  friend Mat operator+(const Mat &x, const Mat &y) {
    Mat r(x.rows, x.cols);
    for (size_t i = 0; i < r.a.size(); ++i)
      r.a[i] = x.a[i] + y.a[i];
    return r;
  }
  friend Mat operator-(const Mat &x, const Mat &y) {
    Mat r(x.rows, x.cols);
    for (size_t i = 0; i < r.a.size(); ++i)
      r.a[i] = x.a[i] - y.a[i];
    return r;
  }

  Mat transposed() const {
    Mat r(cols, rows);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j)
        r(j, i) = (*this)(i, j);
    return r;
  }

  std::vector<F> row(int i) const {
    return std::vector<F>(a.begin() + static_cast<size_t>(i) * cols,
                          a.begin() + static_cast<size_t>(i + 1) * cols);
  }
};

using MatQ = Mat<Rational>;

template <class F> std::vector<F> matvec(const Mat<F> &m, const std::vector<F> &x) {
  if (static_cast<int>(x.size()) != m.cols)
    throw IndexOutOfRange("matrix-vector shape mismatch");
  std::vector<F> y(m.rows, F(0));
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j)
      if (!(m(i, j) == F(0)))
        y[i] += m(i, j) * x[j];
  return y;
}

template <class F> Mat<F> from_rows(const std::vector<std::vector<F>> &rows) {
  Mat<F> m(static_cast<int>(rows.size()), rows.empty() ? 0 : static_cast<int>(rows[0].size()));
  for (int i = 0; i < m.rows; ++i) {
    if (static_cast<int>(rows[i].size()) != m.cols)
      throw IndexOutOfRange("ragged row list");
    for (int j = 0; j < m.cols; ++j)
      m(i, j) = rows[i][j];
  }
  return m;
}

// Reduced row echelon form in place; returns pivot column list.
template <class F> std::vector<int> rref(Mat<F> &m) {
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < m.cols && r < m.rows; ++c) {
    int p = -1;
    for (int i = r; i < m.rows; ++i)
      if (!(m(i, c) == F(0))) {
        p = i;
        break;
      }
    if (p < 0)
      continue;
    if (p != r)
      for (int j = 0; j < m.cols; ++j)
        std::swap(m(p, j), m(r, j));
    F inv = F(1) / m(r, c);
    for (int j = c; j < m.cols; ++j)
      m(r, j) *= inv;
    for (int i = 0; i < m.rows; ++i) {
      if (i == r || m(i, c) == F(0))
        continue;
      F f = m(i, c);
      for (int j = c; j < m.cols; ++j)
        m(i, j) -= f * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

template <class F> int rank(Mat<F> m) { return static_cast<int>(rref(m).size()); }

// Basis of {x : m x = 0} as rows.
template <class F> Mat<F> kernel(Mat<F> m) {
  std::vector<int> pivots = rref(m);
  std::vector<bool> is_pivot(m.cols, false);
  for (int c : pivots)
    is_pivot[c] = true;
  std::vector<int> free_cols;
  for (int c = 0; c < m.cols; ++c)
    if (!is_pivot[c])
      free_cols.push_back(c);
  Mat<F> basis(static_cast<int>(free_cols.size()), m.cols);
  for (int k = 0; k < static_cast<int>(free_cols.size()); ++k) {
    basis(k, free_cols[k]) = F(1);
    for (int r = 0; r < static_cast<int>(pivots.size()); ++r)
      basis(k, pivots[r]) = -m(r, free_cols[k]);
  }
  return basis;
}

template <class F> F det(Mat<F> m) {
  if (m.rows != m.cols)
    throw IndexOutOfRange("determinant of non-square matrix");
  F d(1);
  for (int c = 0; c < m.cols; ++c) {
    int p = -1;
    for (int i = c; i < m.rows; ++i)
      if (!(m(i, c) == F(0))) {
        p = i;
        break;
      }
    if (p < 0)
      return F(0);
    if (p != c) {
      for (int j = 0; j < m.cols; ++j)
        std::swap(m(p, j), m(c, j));
      d = -d;
    }
    d *= m(c, c);
    F inv = F(1) / m(c, c);
    for (int i = c + 1; i < m.rows; ++i) {
      if (m(i, c) == F(0))
        continue;
      F f = m(i, c) * inv;
      for (int j = c; j < m.cols; ++j)
        m(i, j) -= f * m(c, j);
    }
  }
  return d;
}

template <class F> Mat<F> inverse(const Mat<F> &m) {
  if (m.rows != m.cols)
    throw IndexOutOfRange("inverse of non-square matrix");
  Mat<F> aug(m.rows, 2 * m.cols);
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < m.cols; ++j)
      aug(i, j) = m(i, j);
    aug(i, m.cols + i) = F(1);
  }
  std::vector<int> pivots = rref(aug);
  if (static_cast<int>(pivots.size()) != m.rows || pivots.back() >= m.cols)
    throw Singular("matrix not invertible");
  Mat<F> inv(m.rows, m.cols);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j)
      inv(i, j) = aug(i, m.cols + j);
  return inv;
}

// One solution of A x = b, if consistent.
template <class F>
std::optional<std::vector<F>> solve(const Mat<F> &A, const std::vector<F> &b) {
  Mat<F> aug(A.rows, A.cols + 1);
  for (int i = 0; i < A.rows; ++i) {
    for (int j = 0; j < A.cols; ++j)
      aug(i, j) = A(i, j);
    aug(i, A.cols) = b[i];
  }
  std::vector<int> pivots = rref(aug);
  if (!pivots.empty() && pivots.back() == A.cols)
    return std::nullopt;
  std::vector<F> x(A.cols, F(0));
  for (int r = 0; r < static_cast<int>(pivots.size()); ++r)
    x[pivots[r]] = aug(r, A.cols);
  return x;
}

// Subspace of F^n held as canonical reduced-row-echelon basis rows, so
// equality of subspaces is plain equality of representations.
template <class F> class Subspace {
public:
  Subspace() = default;
  explicit Subspace(int ambient) : basis_(0, ambient) {}
  static Subspace span(Mat<F> rows) {
    Subspace s;
    std::vector<int> pivots = rref(rows);
    s.basis_ = Mat<F>(static_cast<int>(pivots.size()), rows.cols);
    for (int i = 0; i < s.basis_.rows; ++i)
      for (int j = 0; j < rows.cols; ++j)
        s.basis_(i, j) = rows(i, j);
    s.pivots_ = std::move(pivots);
    return s;
  }
  static Subspace span_rows(const std::vector<std::vector<F>> &rows) {
    return span(from_rows(rows));
  }
  static Subspace full(int n) { return span(Mat<F>::identity(n)); }

  int dim() const { return basis_.rows; }
  int ambient_dim() const { return basis_.cols; }
  const Mat<F> &basis() const { return basis_; }
  const std::vector<int> &pivots() const { return pivots_; }

  bool contains(const std::vector<F> &v) const {
    std::vector<F> w = v;
    for (int r = 0; r < basis_.rows; ++r) {
      const F &coef = w[pivots_[r]];
      if (coef == F(0))
        continue;
      F f = coef;
      for (int j = 0; j < basis_.cols; ++j)
        w[j] -= f * basis_(r, j);
    }
    return std::all_of(w.begin(), w.end(), [](const F &x) { return x == F(0); });
  }
  bool contains(const Subspace &other) const {
    for (int i = 0; i < other.basis_.rows; ++i)
      if (!contains(other.basis_.row(i)))
        return false;
    return true;
  }

  friend bool operator==(const Subspace &x, const Subspace &y) {
    return x.basis_ == y.basis_;
  }
  friend bool operator!=(const Subspace &x, const Subspace &y) { return !(x == y); }

  friend Subspace operator+(const Subspace &x, const Subspace &y) {
    Mat<F> stacked(x.basis_.rows + y.basis_.rows, x.basis_.cols);
    for (int i = 0; i < x.basis_.rows; ++i)
      for (int j = 0; j < x.basis_.cols; ++j)
        stacked(i, j) = x.basis_(i, j);
    for (int i = 0; i < y.basis_.rows; ++i)
      for (int j = 0; j < y.basis_.cols; ++j)
        stacked(x.basis_.rows + i, j) = y.basis_(i, j);
    return span(std::move(stacked));
  }

  friend Subspace intersect(const Subspace &x, const Subspace &y) {
    // Row vector u*Bx = v*By lies in both; solve for (u,v) in the kernel of
    // the stacked transposed system.
    int n = x.basis_.cols;
    Mat<F> sys(n, x.basis_.rows + y.basis_.rows);
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < x.basis_.rows; ++i)
        sys(j, i) = x.basis_(i, j);
      for (int i = 0; i < y.basis_.rows; ++i)
        sys(j, x.basis_.rows + i) = -y.basis_(i, j);
    }
    Mat<F> ker = kernel(std::move(sys));
    Mat<F> rows(ker.rows, n);
    for (int k = 0; k < ker.rows; ++k)
      for (int j = 0; j < n; ++j) {
        F acc(0);
        for (int i = 0; i < x.basis_.rows; ++i)
          acc += ker(k, i) * x.basis_(i, j);
        rows(k, j) = acc;
      }
    return span(std::move(rows));
  }

  // Coordinates of v in this basis; v must lie in the subspace.
  std::vector<F> coordinates(const std::vector<F> &v) const {
    std::vector<F> w = v, coords(basis_.rows, F(0));
    for (int r = 0; r < basis_.rows; ++r) {
      F f = w[pivots_[r]];
      coords[r] = f;
      if (f == F(0))
        continue;
      for (int j = 0; j < basis_.cols; ++j)
        w[j] -= f * basis_(r, j);
    }
    if (!std::all_of(w.begin(), w.end(), [](const F &x) { return x == F(0); }))
      throw IndexOutOfRange("vector not in subspace");
    return coords;
  }

private:
  Mat<F> basis_;
  std::vector<int> pivots_;
};

using SubspaceQ = Subspace<Rational>;

// {v in ambient : v^T G t = 0 for all t in T}, computed inside `within`.
template <class F>
Subspace<F> orthogonal_complement_in(const Subspace<F> &T, const Subspace<F> &within,
                                     const Mat<F> &gram) {
  int k = within.dim();
  Mat<F> sys(T.dim(), k);
  Mat<F> GW = gram * within.basis().transposed(); // n x k
  for (int i = 0; i < T.dim(); ++i)
    for (int j = 0; j < k; ++j) {
      F acc(0);
      for (int l = 0; l < gram.rows; ++l)
        acc += T.basis()(i, l) * GW(l, j);
      sys(i, j) = acc;
    }
  Mat<F> ker = kernel(std::move(sys)); // coefficients in `within` coordinates
  Mat<F> rows(ker.rows, gram.rows);
  for (int r = 0; r < ker.rows; ++r)
    for (int j = 0; j < gram.rows; ++j) {
      F acc(0);
      for (int l = 0; l < k; ++l)
        acc += ker(r, l) * within.basis()(l, j);
      rows(r, j) = acc;
    }
  return Subspace<F>::span(std::move(rows));
}

template <class F> Mat<F> embed(const MatQ &m) {
  Mat<F> r(m.rows, m.cols);
  for (size_t i = 0; i < m.a.size(); ++i)
    r.a[i] = F(m.a[i]);
  return r;
}

// Matrix of A restricted to an A-invariant subspace, in the subspace basis.
template <class F>
Mat<F> restriction_matrix(const Subspace<F> &s, const Mat<F> &A) {
  Mat<F> r(s.dim(), s.dim());
  for (int i = 0; i < s.dim(); ++i) {
    std::vector<F> coords = s.coordinates(matvec(A, s.basis().row(i)));
    for (int j = 0; j < s.dim(); ++j)
      r(j, i) = coords[j];
  }
  return r;
}

} // namespace nilgeo
