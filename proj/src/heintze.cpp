#include "nilgeo/heintze.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>

#include <Eigen/Eigenvalues>

#include "nilgeo/errors.hpp"

namespace nilgeo {

namespace {

std::optional<Rational> rationalize(double x, double tol, long max_den) {
  double v = x;
  long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  for (int it = 0; it < 64; ++it) {
    double fl = std::floor(v);
    if (std::abs(fl) > 1e15)
      return std::nullopt;
    long a = static_cast<long>(fl);
    long p2 = a * p1 + p0, q2 = a * q1 + q0;
    if (q2 > max_den || q2 <= 0)
      return std::nullopt;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    double approx = static_cast<double>(p1) / static_cast<double>(q1);
    if (std::abs(approx - x) <= tol * std::max(1.0, std::abs(x)))
      return rat(p1, q1);
    double frac = v - fl;
    if (frac < 1e-15)
      return std::nullopt;
    v = 1.0 / frac;
  }
  return std::nullopt;
}

VecQ unit_vec(int n, int i) {
  VecQ v(n, Rational(0));
  v[i] = 1;
  return v;
}

void check_derivation(const LieAlgebra &L, const MatQ &D) {
  int n = L.dim();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      VecQ ei = unit_vec(n, i), ej = unit_vec(n, j);
      VecQ lhs = matvec(D, L.bracket(ei, ej));
      VecQ rhs = L.bracket(matvec(D, ei), ej);
      VecQ rhs2 = L.bracket(ei, matvec(D, ej));
      for (int k = 0; k < n; ++k)
        rhs[k] += rhs2[k];
      if (lhs != rhs)
        throw NotDerivation("derivation identity fails on (" + L.names()[i] +
                            ", " + L.names()[j] + ")");
    }
}

LayerDecomposition certify_layers(const MatQ &D) {
  int n = D.rows;
  Eigen::MatrixXd Df(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      Df(i, j) = to_double(D(i, j));
  Eigen::EigenSolver<Eigen::MatrixXd> solver(Df);
  std::map<Rational, int> candidates;
  for (int i = 0; i < n; ++i) {
    std::complex<double> ev = solver.eigenvalues()(i);
    if (std::abs(ev.imag()) > 1e-8 * (1.0 + std::abs(ev.real())))
      throw NotDiagonalizable("complex eigenvalue detected");
    auto r = rationalize(ev.real(), 1e-10, 1000000);
    if (!r)
      throw NotDiagonalizable("eigenvalue does not certify as rational");
    candidates[*r] += 1;
  }
  LayerDecomposition layering;
  int total = 0;
  for (const auto &entry : candidates) {
    const Rational &lambda = entry.first;
    MatQ shifted = D;
    for (int i = 0; i < n; ++i)
      shifted(i, i) -= lambda;
    MatQ ker = kernel(std::move(shifted));
    if (ker.rows == 0)
      throw NotDiagonalizable("eigenvalue " + to_string(lambda) +
                              " does not certify as rational");
    total += ker.rows;
    layering.eigenvalues.push_back(lambda);
    layering.layers.push_back(SubspaceQ::span(std::move(ker)));
  }
  if (total != n)
    throw NotDiagonalizable("eigenspaces do not span; defective or irrational "
                            "spectrum");
  for (const Rational &lambda : layering.eigenvalues)
    if (lambda <= 0)
      throw NonPositiveEigenvalue("eigenvalue " + to_string(lambda));
  return layering;
}

} // namespace

DiagonalHeintzePair::DiagonalHeintzePair(LieAlgebra algebra, MatQ derivation)
    : algebra_(std::move(algebra)), derivation_(std::move(derivation)) {
  int n = algebra_.dim();
  if (derivation_.rows != n || derivation_.cols != n)
    throw InputError("derivation matrix must be " + std::to_string(n) + " x " +
                     std::to_string(n));
  check_derivation(algebra_, derivation_);
  layering_ = certify_layers(derivation_);

  MatQ stacked(n, n);
  std::vector<std::pair<int, int>> ranges;
  int row = 0;
  for (const SubspaceQ &layer : layering_.layers) {
    ranges.emplace_back(row, layer.dim());
    for (int i = 0; i < layer.dim(); ++i, ++row)
      for (int j = 0; j < n; ++j)
        stacked(row, j) = layer.basis()(i, j);
  }
  MatQ bt = stacked.transposed();
  MatQ bt_inv = inverse(bt);
  for (size_t l = 0; l < layering_.layers.size(); ++l) {
    MatQ sel(n, n);
    for (int i = 0; i < ranges[l].second; ++i)
      sel(ranges[l].first + i, ranges[l].first + i) = 1;
    projectors_.push_back(bt * sel * bt_inv);
  }

  const Rational &l1 = layering_.eigenvalues.front();
  bool ladder = true;
  for (size_t j = 0; j < layering_.eigenvalues.size(); ++j) {
    Rational ratio = layering_.eigenvalues[j] / l1;
    if (ratio.get_den() != 1 || ratio != Rational(static_cast<long>(j) + 1)) {
      ladder = false;
      break;
    }
  }
  carnot_ = ladder && generated_subalgebra(algebra_, layering_.layers.front()) ==
                          SubspaceQ::full(n);
}

const MatQ &DiagonalHeintzePair::layer_projector(int j) const {
  if (j < 0 || j >= layer_count())
    throw IndexOutOfRange("layer index " + std::to_string(j));
  return projectors_[static_cast<size_t>(j)];
}

DiagonalHeintzePair layer_decomposition(const LieAlgebra &L, const MatQ &D) {
  return DiagonalHeintzePair(L, D);
}

bool is_carnot_type(const DiagonalHeintzePair &pair) { return pair.carnot(); }

long homogeneous_dimension(const DiagonalHeintzePair &pair) {
  if (!pair.carnot())
    throw InputError("homogeneous dimension requires a Carnot-type pair");
  long q = 0;
  for (int j = 0; j < pair.layer_count(); ++j)
    q += (j + 1) * pair.layering().layers[j].dim();
  return q;
}

namespace {

MatQ multiply_rows_by(const MatQ &rows, const MatQ &m) {
  // Applies m to each row treated as a column vector; returns rows again.
  MatQ out(rows.rows, m.rows);
  for (int i = 0; i < rows.rows; ++i) {
    VecQ y = matvec(m, rows.row(i));
    for (int j = 0; j < m.rows; ++j)
      out(i, j) = y[j];
  }
  return out;
}

bool invariant_under(const MatQ &D, const SubspaceQ &h) {
  for (int i = 0; i < h.dim(); ++i)
    if (!h.contains(matvec(D, h.basis().row(i))))
      return false;
  return true;
}

struct StepData {
  QuotientResult quot;
  SubalgebraResult sub;
  MatQ induced;
};

// Quotient data for lower < upper together with the induced derivation.
StepData induced_between(const DiagonalHeintzePair &pair, const SubspaceQ &lower,
                         const SubspaceQ &upper) {
  const LieAlgebra &L = pair.algebra();
  const MatQ &D = pair.derivation();
  if (!invariant_under(D, upper) || !invariant_under(D, lower))
    throw NotDerivation("flag member is not derivation-invariant");
  SubalgebraResult sub = restrict_to(L, upper);
  int d = upper.dim();
  MatQ Dsub(d, d);
  for (int a = 0; a < d; ++a) {
    VecQ img = matvec(D, upper.basis().row(a));
    VecQ coords = upper.coordinates(img);
    for (int i = 0; i < d; ++i)
      Dsub(i, a) = coords[i];
  }
  MatQ lower_rows(lower.dim(), d);
  for (int i = 0; i < lower.dim(); ++i) {
    VecQ coords = upper.coordinates(lower.basis().row(i));
    for (int j = 0; j < d; ++j)
      lower_rows(i, j) = coords[j];
  }
  QuotientResult quot = quotient(sub.algebra, SubspaceQ::span(lower_rows));
  MatQ induced = quot.projection * Dsub * quot.lift;
  return StepData{std::move(quot), std::move(sub), std::move(induced)};
}

std::vector<SubspaceQ> full_chain(const DiagonalHeintzePair &pair) {
  const LieAlgebra &L = pair.algebra();
  int n = L.dim();
  SubspaceQ zero(n);
  SubspaceQ full = SubspaceQ::full(n);
  if (is_carnot_type(pair))
    return {zero, full};

  SubspaceQ h = generated_subalgebra(L, pair.layering().layers.front());
  std::vector<SubspaceQ> chain{zero, h};
  while (chain.back() != full) {
    SubspaceQ next = normalizer(L, chain.back());
    if (next.dim() <= chain.back().dim())
      throw NonConvergent("normalizer tower stalled below the full algebra");
    chain.push_back(next);
  }

  std::vector<SubspaceQ> refined{zero};
  for (size_t i = 0; i + 1 < chain.size(); ++i) {
    const SubspaceQ &lower = chain[i], &upper = chain[i + 1];
    StepData step = induced_between(pair, lower, upper);
    DiagonalHeintzePair qpair(step.quot.algebra, step.induced);
    std::vector<SubspaceQ> mids = full_chain(qpair);
    for (size_t k = 1; k + 1 < mids.size(); ++k) {
      MatQ in_sub = multiply_rows_by(mids[k].basis(), step.quot.lift);
      MatQ in_amb = multiply_rows_by(in_sub, step.sub.inclusion);
      MatQ stacked(in_amb.rows + lower.dim(), n);
      for (int r = 0; r < in_amb.rows; ++r)
        for (int j = 0; j < n; ++j)
          stacked(r, j) = in_amb(r, j);
      for (int r = 0; r < lower.dim(); ++r)
        for (int j = 0; j < n; ++j)
          stacked(in_amb.rows + r, j) = lower.basis()(r, j);
      refined.push_back(SubspaceQ::span(std::move(stacked)));
    }
    refined.push_back(upper);
  }
  return refined;
}

} // namespace

PreservedFlag preserved_sequence(const DiagonalHeintzePair &pair) {
  PreservedFlag flag;
  flag.chain = full_chain(pair);
  for (size_t i = 0; i + 1 < flag.chain.size(); ++i) {
    StepData step = induced_between(pair, flag.chain[i], flag.chain[i + 1]);
    DiagonalHeintzePair qpair(step.quot.algebra, step.induced);
    if (!is_carnot_type(qpair))
      throw NonConvergent("flag quotient failed the Carnot-type certificate");
    FlagStep fs{qpair.algebra(), step.induced, qpair.layering().eigenvalues,
                qpair.smallest_eigenvalue(), qpair.layer_count()};
    flag.steps.push_back(std::move(fs));
  }
  return flag;
}

DiagonalHeintzePair induced_pair(const DiagonalHeintzePair &pair,
                                 const PreservedFlag &flag, int i) {
  if (i < 1 || i > flag.length())
    throw IndexOutOfRange("flag step " + std::to_string(i));
  StepData step = induced_between(pair, flag.chain[static_cast<size_t>(i) - 1],
                                  flag.chain[static_cast<size_t>(i)]);
  return DiagonalHeintzePair(step.quot.algebra, step.induced);
}

} // namespace nilgeo
