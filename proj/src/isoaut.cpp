#include "nilgeo/isoaut.hpp"

#include <algorithm>
#include <optional>
#include <utility>

#include "nilgeo/errors.hpp"

namespace nilgeo {

namespace {

VecX embed_vec(const VecQ &v) {
  VecX out;
  out.reserve(v.size());
  for (const Rational &q : v)
    out.emplace_back(q);
  return out;
}

SubspaceX embed_space(const SubspaceQ &s) {
  return SubspaceX::span(embed<QuadExt>(s.basis()));
}

VecX mat_column(const MatX &m, int j) {
  VecX out(m.rows);
  for (int i = 0; i < m.rows; ++i)
    out[i] = m(i, j);
  return out;
}

QuadExt dot(const MatX &gram, const VecX &u, const VecX &v) {
  QuadExt acc(0);
  for (int i = 0; i < gram.rows; ++i) {
    if (u[i].is_zero())
      continue;
    for (int j = 0; j < gram.cols; ++j)
      acc += u[i] * gram(i, j) * v[j];
  }
  return acc;
}

bool lex_less(const QuadExt &x, const QuadExt &y) {
  if (x.a != y.a)
    return x.a < y.a;
  if (x.b != y.b)
    return x.b < y.b;
  if (x.c != y.c)
    return x.c < y.c;
  return x.d < y.d;
}

bool mat_lex_less(const MatX &a, const MatX &b) {
  for (size_t i = 0; i < a.a.size(); ++i)
    if (!(a.a[i] == b.a[i]))
      return lex_less(a.a[i], b.a[i]);
  return false;
}

MatX layer_gram(const SubspaceQ &layer, const MatX &gram) {
  MatX basis = embed<QuadExt>(layer.basis());
  return basis * gram * basis.transposed();
}

// Stratum membership for a whole span: the minors cutting out the stratum
// are homogeneous of degree r_min+1 in the span coefficients, so vanishing
// on a grid of d+1 values per chart coordinate certifies vanishing.
bool span_in_stratum(const LieAlgebra &L, const std::vector<VecQ> &gens,
                     int r_min) {
  const int k = static_cast<int>(gens.size());
  const int d = r_min + 1;
  const int n = L.dim();
  for (int one_at = k - 1; one_at >= 0; --one_at) {
    std::vector<int> c(one_at, 0);
    while (true) {
      VecQ v(n, Rational(0));
      for (int i = 0; i < one_at; ++i)
        for (int t = 0; t < n; ++t)
          v[t] += Rational(c[i]) * gens[i][t];
      for (int t = 0; t < n; ++t)
        v[t] += gens[one_at][t];
      if (rank_ad(L, v) > r_min)
        return false;
      int pos = 0;
      while (pos < one_at && c[pos] == d) {
        c[pos] = 0;
        ++pos;
      }
      if (pos == one_at)
        break;
      ++c[pos];
    }
  }
  return true;
}

struct PlaneData {
  std::vector<SubspaceQ> planes;
  int r_min = 0;
};

// Maximal subspaces of the first layer along which ad keeps its minimal
// rank. Every graded automorphism permutes them.
PlaneData find_distinguished_planes(const DiagonalHeintzePair &pair) {
  const LieAlgebra &L = pair.algebra();
  const SubspaceQ &v1 = pair.layering().layers[0];
  const int m = v1.dim();
  std::vector<VecQ> probes;
  for (int i = 0; i < m; ++i)
    probes.push_back(v1.basis().row(i));
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      for (int s : {1, -1}) {
        VecQ v = v1.basis().row(i);
        for (size_t t = 0; t < v.size(); ++t)
          v[t] += Rational(s) * v1.basis()(j, static_cast<int>(t));
        probes.push_back(std::move(v));
      }

  PlaneData out;
  out.r_min = rank_ad(L, probes[0]);
  for (const VecQ &p : probes)
    out.r_min = std::min(out.r_min, rank_ad(L, p));

  std::vector<VecQ> minimal;
  for (const VecQ &p : probes)
    if (rank_ad(L, p) == out.r_min)
      minimal.push_back(p);

  for (const VecQ &seed : minimal) {
    bool covered = false;
    for (const SubspaceQ &plane : out.planes)
      if (plane.contains(seed))
        covered = true;
    if (covered)
      continue;
    std::vector<VecQ> gens = {seed};
    bool grew = true;
    while (grew) {
      grew = false;
      SubspaceQ current = SubspaceQ::span(from_rows(gens));
      for (const VecQ &cand : minimal) {
        if (current.contains(cand))
          continue;
        std::vector<VecQ> trial = gens;
        trial.push_back(cand);
        if (span_in_stratum(L, trial, out.r_min)) {
          gens.push_back(cand);
          grew = true;
          break;
        }
      }
    }
    out.planes.push_back(SubspaceQ::span(from_rows(gens)));
  }

  for (size_t i = 0; i < out.planes.size(); ++i)
    for (size_t j = i + 1; j < out.planes.size(); ++j)
      if (intersect(out.planes[i], out.planes[j]).dim() > 0)
        throw NotFinite("rank stratum is not a union of independent planes");

  std::sort(out.planes.begin(), out.planes.end(),
            [](const SubspaceQ &a, const SubspaceQ &b) {
              if (a.dim() != b.dim())
                return a.dim() < b.dim();
              for (size_t i = 0; i < a.basis().a.size(); ++i)
                if (a.basis().a[i] != b.basis().a[i])
                  return a.basis().a[i] < b.basis().a[i];
              return false;
            });
  return out;
}

struct Assignment {
  SubspaceX src;
  SubspaceX dst;
};

// Closes the assignment list under intersections, sums, and orthogonal
// complements inside the first layer. Returns false when the permutation
// is contradictory, i.e. one source is forced onto two images.
bool propagate_assignments(std::vector<Assignment> &assigns,
                           const SubspaceX &v1, const MatX &gram) {
  bool consistent = true;
  auto add = [&](const SubspaceX &s, const SubspaceX &t) {
    if (s.dim() != t.dim()) {
      consistent = false;
      return false;
    }
    for (const Assignment &a : assigns)
      if (a.src == s) {
        if (!(a.dst == t))
          consistent = false;
        return false;
      }
    assigns.push_back({s, t});
    return true;
  };

  for (int round = 0; round < 16 && consistent; ++round) {
    bool changed = false;
    const size_t snapshot = assigns.size();
    for (size_t i = 0; i < snapshot && consistent; ++i) {
      changed |= add(orthogonal_complement_in(assigns[i].src, v1, gram),
                     orthogonal_complement_in(assigns[i].dst, v1, gram));
      for (size_t j = 0; j < snapshot && consistent; ++j) {
        changed |= add(intersect(assigns[i].src, assigns[j].src),
                       intersect(assigns[i].dst, assigns[j].dst));
        changed |= add(assigns[i].src + assigns[j].src,
                       assigns[i].dst + assigns[j].dst);
      }
    }
    if (!changed)
      break;
    if (assigns.size() > 96)
      throw NotFinite("assignment lattice did not stabilize");
  }
  return consistent;
}

// Applies a partially built layer-block map to an ambient vector supported
// on the already solved layers 0..upto-1.
VecX apply_partial(const DiagonalHeintzePair &pair,
                   const std::vector<MatX> &blocks, int upto, const VecQ &x) {
  const int n = pair.algebra().dim();
  VecX out(n, QuadExt(0));
  for (int j = 0; j < upto; ++j) {
    const SubspaceQ &layer = pair.layering().layers[j];
    VecQ part = matvec(pair.layer_projector(j), x);
    VecQ coords = layer.coordinates(part);
    for (int r = 0; r < layer.dim(); ++r) {
      QuadExt entry(0);
      for (int c = 0; c < layer.dim(); ++c)
        entry += blocks[j](r, c) * QuadExt(coords[c]);
      if (entry.is_zero())
        continue;
      for (int t = 0; t < n; ++t)
        out[t] += entry * QuadExt(layer.basis()(r, t));
    }
  }
  return out;
}

int layer_of_eigenvalue(const DiagonalHeintzePair &pair, const Rational &lam) {
  for (int j = 0; j < pair.layer_count(); ++j)
    if (pair.layering().eigenvalues[j] == lam)
      return j;
  return -1;
}

// Extends the solved blocks to layer t. Bracket-generated directions are
// forced; a one-dimensional orthogonal complement contributes a free sign;
// anything larger leaves a continuous family. An empty return means the
// candidate admits no extension at all.
std::vector<MatX> extend_to_layer(const DiagonalHeintzePair &pair,
                                  const MatX &gram,
                                  const std::vector<MatX> &blocks, int t) {
  const LieAlgebra &L = pair.algebra();
  const SubspaceQ &layer = pair.layering().layers[t];
  const int q = layer.dim();
  SubspaceX layer_x = embed_space(layer);

  std::vector<VecQ> gen_rows;
  std::vector<VecX> img_rows;
  for (int a = 0; a < t; ++a)
    for (int b = a; b < t; ++b) {
      if (layer_of_eigenvalue(pair, pair.layering().eigenvalues[a] +
                                        pair.layering().eigenvalues[b]) != t)
        continue;
      const SubspaceQ &la = pair.layering().layers[a];
      const SubspaceQ &lb = pair.layering().layers[b];
      for (int i = 0; i < la.dim(); ++i)
        for (int j = 0; j < lb.dim(); ++j) {
          VecQ z = L.bracket(la.basis().row(i), lb.basis().row(j));
          if (std::all_of(z.begin(), z.end(),
                          [](const Rational &r) { return r == 0; }))
            continue;
          VecX za =
              bracket(L, apply_partial(pair, blocks, t, la.basis().row(i)),
                      apply_partial(pair, blocks, t, lb.basis().row(j)));
          gen_rows.push_back(layer.coordinates(z));
          img_rows.push_back(layer_x.coordinates(za));
        }
    }

  const int g = static_cast<int>(gen_rows.size());
  MatX gen(g, q);
  for (int r = 0; r < g; ++r)
    for (int c = 0; c < q; ++c)
      gen(r, c) = QuadExt(gen_rows[r][c]);
  SubspaceX wgen = SubspaceX::span(gen);
  SubspaceX comp = orthogonal_complement_in(wgen, SubspaceX::full(q),
                                            layer_gram(layer, gram));
  if (comp.dim() >= 2)
    throw NotFinite("a higher layer keeps a continuous family");
  const int w = wgen.dim();

  MatX a_gen(w, w);
  if (w > 0) {
    MatX mw(g, w);
    MatX yw(g, w);
    for (int r = 0; r < g; ++r) {
      VecX grow(q);
      for (int c = 0; c < q; ++c)
        grow[c] = gen(r, c);
      VecX gc = wgen.coordinates(grow);
      if (!wgen.contains(img_rows[r]))
        return {};
      VecX yc = wgen.coordinates(img_rows[r]);
      for (int c = 0; c < w; ++c) {
        mw(r, c) = gc[c];
        yw(r, c) = yc[c];
      }
    }
    for (int col = 0; col < w; ++col) {
      auto sol = solve(mw, mat_column(yw, col));
      if (!sol)
        return {};
      for (int c = 0; c < w; ++c)
        a_gen(col, c) = (*sol)[c];
    }
  }

  MatX frame_rows(q, q);
  for (int r = 0; r < w; ++r)
    for (int c = 0; c < q; ++c)
      frame_rows(r, c) = wgen.basis()(r, c);
  if (comp.dim() == 1)
    for (int c = 0; c < q; ++c)
      frame_rows(w, c) = comp.basis()(0, c);
  MatX frame_cols = frame_rows.transposed();
  MatX frame_cols_inv = inverse(frame_cols);

  std::vector<MatX> out;
  std::vector<int> branch_signs =
      comp.dim() == 1 ? std::vector<int>{1, -1} : std::vector<int>{1};
  for (int sgn : branch_signs) {
    MatX adapted(q, q);
    for (int r = 0; r < w; ++r)
      for (int c = 0; c < w; ++c)
        adapted(r, c) = a_gen(r, c);
    if (comp.dim() == 1)
      adapted(w, w) = QuadExt(sgn);
    out.push_back(frame_cols * adapted * frame_cols_inv);
  }
  return out;
}

std::string group_label(const std::vector<MatX> &elems,
                        const std::vector<SubspaceX> &planes) {
  const int order = static_cast<int>(elems.size());
  if (order == 1)
    return "trivial";
  MatX id = MatX::identity(elems[0].rows);
  bool abelian = true;
  bool exponent_two = true;
  for (const MatX &a : elems) {
    if (!(a * a == id))
      exponent_two = false;
    for (const MatX &b : elems)
      if (!(a * b == b * a))
        abelian = false;
  }
  if (abelian && exponent_two) {
    int k = 0;
    while ((1 << k) < order)
      ++k;
    if ((1 << k) == order)
      return "Z2^" + std::to_string(k);
  }
  if (order == 16 && !abelian) {
    auto preserves_planes = [&](const MatX &a) {
      for (const SubspaceX &p : planes) {
        MatX rows(p.dim(), a.cols);
        for (int i = 0; i < p.dim(); ++i) {
          VecX img = matvec(a, p.basis().row(i));
          for (int c = 0; c < a.cols; ++c)
            rows(i, c) = img[c];
        }
        if (!(SubspaceX::span(std::move(rows)) == p))
          return false;
      }
      return true;
    };
    std::vector<MatX> sub;
    std::vector<MatX> rest;
    for (const MatX &a : elems)
      (preserves_planes(a) ? sub : rest).push_back(a);
    bool sub_ok = sub.size() == 8;
    for (const MatX &a : sub) {
      if (!(a * a == id))
        sub_ok = false;
      for (const MatX &b : sub)
        if (!(a * b == b * a))
          sub_ok = false;
    }
    if (sub_ok && !rest.empty()) {
      const MatX &t = rest.front();
      if (t * t == id) {
        int fixed = 0;
        for (const MatX &f : sub)
          if (t * f == f * t)
            ++fixed;
        if (fixed == 4)
          return "(Z2^3):Z2";
      }
    }
  }
  return "order " + std::to_string(order);
}

} // namespace

VecX bracket(const LieAlgebra &L, const VecX &x, const VecX &y) {
  const int n = L.dim();
  VecX z(n, QuadExt(0));
  for (int i = 0; i < n; ++i) {
    if (x[i].is_zero())
      continue;
    for (int j = 0; j < n; ++j) {
      if (y[j].is_zero())
        continue;
      QuadExt f = x[i] * y[j];
      for (int k = 0; k < n; ++k)
        if (L.c(i, j, k) != 0)
          z[k] += f * QuadExt(L.c(i, j, k));
    }
  }
  return z;
}

int rank_ad(const LieAlgebra &L, const VecQ &x) { return rank(L.ad(x)); }

int rank_ad(const LieAlgebra &L, const VecX &x) {
  const int n = L.dim();
  MatX m(n, n);
  for (int i = 0; i < n; ++i) {
    if (x[i].is_zero())
      continue;
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (L.c(i, j, k) != 0)
          m(k, j) += x[i] * QuadExt(L.c(i, j, k));
  }
  return rank(std::move(m));
}

void check_layered_gram(const DiagonalHeintzePair &pair, const MatX &gram) {
  const int n = pair.algebra().dim();
  if (gram.rows != n || gram.cols != n)
    throw InputError("Gram matrix size does not match the algebra");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (!(gram(i, j) == gram(j, i)))
        throw InputError("Gram matrix is not symmetric");
  for (int r = 0; r < pair.layer_count(); ++r)
    for (int s = r + 1; s < pair.layer_count(); ++s) {
      const SubspaceQ &a = pair.layering().layers[r];
      const SubspaceQ &b = pair.layering().layers[s];
      for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < b.dim(); ++j)
          if (!dot(gram, embed_vec(a.basis().row(i)),
                   embed_vec(b.basis().row(j)))
                   .is_zero())
            throw InputError("layers are not orthogonal for this Gram");
    }
  for (int j = 0; j < pair.layer_count(); ++j) {
    MatX block = layer_gram(pair.layering().layers[j], gram);
    for (int k = 1; k <= block.rows; ++k) {
      MatX lead(k, k);
      for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c)
          lead(r, c) = block(r, c);
      if (sign(det(std::move(lead))) <= 0)
        throw InputError("Gram matrix is not positive definite");
    }
  }
}

bool is_isometric_graded_auto(const DiagonalHeintzePair &pair, const MatX &gram,
                              const MatX &a) {
  const LieAlgebra &L = pair.algebra();
  const int n = L.dim();
  if (a.rows != n || a.cols != n)
    throw InputError("matrix size does not match the algebra");
  check_layered_gram(pair, gram);
  if (det(a).is_zero())
    throw Singular("candidate automorphism is singular");

  for (int j = 0; j < pair.layer_count(); ++j) {
    SubspaceX layer = embed_space(pair.layering().layers[j]);
    for (int i = 0; i < pair.layering().layers[j].dim(); ++i) {
      VecX img =
          matvec(a, embed_vec(pair.layering().layers[j].basis().row(i)));
      if (!layer.contains(img))
        return false;
    }
  }

  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      VecX lhs = bracket(L, mat_column(a, i), mat_column(a, j));
      VecX rhs(n, QuadExt(0));
      for (int k = 0; k < n; ++k)
        if (L.c(i, j, k) != 0)
          for (int t = 0; t < n; ++t)
            rhs[t] += QuadExt(L.c(i, j, k)) * a(t, k);
      if (!(lhs == rhs))
        return false;
    }

  const int checked_layers = pair.carnot() ? 1 : pair.layer_count();
  for (int j = 0; j < checked_layers; ++j) {
    const SubspaceQ &layer = pair.layering().layers[j];
    for (int r = 0; r < layer.dim(); ++r)
      for (int s = r; s < layer.dim(); ++s) {
        VecX u = embed_vec(layer.basis().row(r));
        VecX v = embed_vec(layer.basis().row(s));
        if (!(dot(gram, matvec(a, u), matvec(a, v)) == dot(gram, u, v)))
          return false;
      }
  }
  return true;
}

bool is_isometric_graded_auto(const DiagonalHeintzePair &pair,
                              const DInnerProduct &ip, const MatQ &a) {
  return is_isometric_graded_auto(pair, embed<QuadExt>(ip.gram()),
                                  embed<QuadExt>(a));
}

IsoAutReport enumerate_finite_IA(const DiagonalHeintzePair &pair,
                                 const MatX &gram) {
  check_layered_gram(pair, gram);
  const LieAlgebra &L = pair.algebra();
  const int n = L.dim();
  const SubspaceQ &v1q = pair.layering().layers[0];
  SubspaceX v1 = embed_space(v1q);
  const int m = v1q.dim();

  PlaneData strat = find_distinguished_planes(pair);
  std::vector<SubspaceX> planes;
  for (const SubspaceQ &p : strat.planes)
    planes.push_back(embed_space(p));

  MatQ stacked_layers(n, n);
  {
    int row = 0;
    for (int j = 0; j < pair.layer_count(); ++j) {
      const MatQ &b = pair.layering().layers[j].basis();
      for (int i = 0; i < b.rows; ++i, ++row)
        for (int c = 0; c < n; ++c)
          stacked_layers(row, c) = b(i, c);
    }
  }
  MatX adapted_t = embed<QuadExt>(stacked_layers.transposed());
  MatX adapted_t_inv = inverse(adapted_t);

  std::vector<MatX> found;
  const int s = static_cast<int>(planes.size());
  std::vector<int> perm(s);
  for (int i = 0; i < s; ++i)
    perm[i] = i;

  do {
    bool dims_ok = true;
    for (int i = 0; i < s; ++i)
      if (planes[i].dim() != planes[perm[i]].dim())
        dims_ok = false;
    if (!dims_ok)
      continue;

    std::vector<Assignment> assigns;
    assigns.push_back({v1, v1});
    for (int i = 0; i < s; ++i)
      assigns.push_back({planes[i], planes[perm[i]]});
    if (!propagate_assignments(assigns, v1, gram))
      continue;

    std::vector<std::pair<VecX, VecX>> lines;
    for (const Assignment &a : assigns)
      if (a.src.dim() == 1)
        lines.push_back({a.src.basis().row(0), a.dst.basis().row(0)});

    MatX stacked(static_cast<int>(lines.size()), n);
    for (size_t i = 0; i < lines.size(); ++i)
      for (int c = 0; c < n; ++c)
        stacked(static_cast<int>(i), c) = lines[i].first[c];
    if (rank(std::move(stacked)) < m)
      throw NotFinite("forced lines do not span the first layer");

    // Pick an independent frame of lines and solve each scale against the
    // Gram matrix; a scale outside the coefficient field kills the branch.
    std::vector<std::pair<VecX, VecX>> frame;
    std::vector<QuadExt> base_scale;
    SubspaceX covered(n);
    bool feasible = true;
    for (const auto &line : lines) {
      MatX one(1, n);
      for (int c = 0; c < n; ++c)
        one(0, c) = line.first[c];
      SubspaceX grown = covered + SubspaceX::span(std::move(one));
      if (grown.dim() == covered.dim())
        continue;
      covered = grown;
      QuadExt ratio = dot(gram, line.first, line.first) /
                      dot(gram, line.second, line.second);
      auto root = sqrt_in_field(ratio);
      if (!root) {
        feasible = false;
        break;
      }
      frame.push_back(line);
      base_scale.push_back(*root);
      if (static_cast<int>(frame.size()) == m)
        break;
    }
    if (!feasible || static_cast<int>(frame.size()) != m)
      continue;

    MatX coords_src(m, m);
    for (int k = 0; k < m; ++k) {
      VecX c = v1.coordinates(frame[k].first);
      for (int r = 0; r < m; ++r)
        coords_src(r, k) = c[r];
    }
    MatX coords_src_inv = inverse(coords_src);

    for (int signs = 0; signs < (1 << m); ++signs) {
      std::vector<QuadExt> scale(m);
      for (int k = 0; k < m; ++k)
        scale[k] = ((signs >> k) & 1) ? -base_scale[k] : base_scale[k];

      bool gram_ok = true;
      for (int i = 0; i < m && gram_ok; ++i)
        for (int j = i + 1; j < m && gram_ok; ++j)
          if (!(scale[i] * scale[j] *
                    dot(gram, frame[i].second, frame[j].second) ==
                dot(gram, frame[i].first, frame[j].first)))
            gram_ok = false;
      if (!gram_ok)
        continue;

      MatX images(m, m);
      for (int k = 0; k < m; ++k) {
        VecX c = v1.coordinates(frame[k].second);
        for (int r = 0; r < m; ++r)
          images(r, k) = scale[k] * c[r];
      }

      std::vector<std::vector<MatX>> partials = {{images * coords_src_inv}};
      for (int t = 1; t < pair.layer_count() && !partials.empty(); ++t) {
        std::vector<std::vector<MatX>> grown;
        for (const std::vector<MatX> &blocks : partials)
          for (MatX &block : extend_to_layer(pair, gram, blocks, t)) {
            std::vector<MatX> next = blocks;
            next.push_back(std::move(block));
            grown.push_back(std::move(next));
          }
        partials = std::move(grown);
      }

      for (const std::vector<MatX> &blocks : partials) {
        MatX big(n, n);
        int off = 0;
        for (int t = 0; t < pair.layer_count(); ++t) {
          const int q = pair.layering().layers[t].dim();
          for (int r = 0; r < q; ++r)
            for (int c = 0; c < q; ++c)
              big(off + r, off + c) = blocks[t](r, c);
          off += q;
        }
        MatX candidate = adapted_t * big * adapted_t_inv;

        bool lines_ok = true;
        for (const auto &line : lines) {
          VecX img = matvec(candidate, line.first);
          MatX two(2, n);
          for (int c = 0; c < n; ++c) {
            two(0, c) = img[c];
            two(1, c) = line.second[c];
          }
          if (rank(std::move(two)) > 1) {
            lines_ok = false;
            break;
          }
        }
        if (!lines_ok)
          continue;

        try {
          if (!is_isometric_graded_auto(pair, gram, candidate))
            continue;
        } catch (const Singular &) {
          continue;
        }
        bool known = false;
        for (const MatX &e : found)
          if (e == candidate)
            known = true;
        if (!known)
          found.push_back(std::move(candidate));
      }
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  // Saturate under inverses and products so the report is a genuine group.
  {
    MatX id = MatX::identity(n);
    bool have_id = false;
    for (const MatX &e : found)
      if (e == id)
        have_id = true;
    if (!have_id)
      found.push_back(id);
    bool changed = true;
    while (changed) {
      changed = false;
      const size_t snapshot = found.size();
      for (size_t i = 0; i < snapshot; ++i) {
        std::vector<MatX> fresh;
        fresh.push_back(inverse(found[i]));
        for (size_t j = 0; j < snapshot; ++j)
          fresh.push_back(found[i] * found[j]);
        for (MatX &cand : fresh) {
          bool known = false;
          for (const MatX &e : found)
            if (e == cand)
              known = true;
          if (!known) {
            found.push_back(std::move(cand));
            changed = true;
          }
        }
      }
      if (found.size() > 2048)
        throw NotFinite("closure under composition does not terminate");
    }
  }

  std::sort(found.begin(), found.end(), mat_lex_less);

  IsoAutReport report;
  report.elements = std::move(found);
  report.order = static_cast<int>(report.elements.size());
  report.group_label = group_label(report.elements, planes);
  return report;
}

int identity_component_dim(const DiagonalHeintzePair &pair, const MatX &gram) {
  check_layered_gram(pair, gram);
  const LieAlgebra &L = pair.algebra();
  const int n = L.dim();
  const MatQ &d = pair.derivation();
  auto idx = [n](int i, int j) { return i * n + j; };

  std::vector<std::vector<QuadExt>> rows;
  auto new_row = [&]() -> std::vector<QuadExt> & {
    rows.emplace_back(static_cast<size_t>(n) * n, QuadExt(0));
    return rows.back();
  };

  // Layer preservation: the infinitesimal map commutes with the grading
  // derivation.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      auto &row = new_row();
      for (int k = 0; k < n; ++k) {
        if (d(k, j) != 0)
          row[idx(i, k)] += QuadExt(d(k, j));
        if (d(i, k) != 0)
          row[idx(k, j)] -= QuadExt(d(i, k));
      }
    }

  // Derivation identity on all basis brackets.
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q)
      for (int k = 0; k < n; ++k) {
        auto &row = new_row();
        for (int s = 0; s < n; ++s) {
          if (L.c(p, q, s) != 0)
            row[idx(k, s)] += QuadExt(L.c(p, q, s));
          if (L.c(s, q, k) != 0)
            row[idx(s, p)] -= QuadExt(L.c(s, q, k));
          if (L.c(p, s, k) != 0)
            row[idx(s, q)] -= QuadExt(L.c(p, s, k));
        }
      }

  // Skewness with respect to the inner product on the layers the
  // quasi-norm reads.
  const int checked_layers = pair.carnot() ? 1 : pair.layer_count();
  for (int t = 0; t < checked_layers; ++t) {
    const MatQ &basis = pair.layering().layers[t].basis();
    std::vector<VecX> left(basis.rows, VecX(n, QuadExt(0)));
    for (int a = 0; a < basis.rows; ++a)
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
          left[a][k] += QuadExt(basis(a, i)) * gram(i, k);
    for (int a = 0; a < basis.rows; ++a)
      for (int b = a; b < basis.rows; ++b) {
        auto &row = new_row();
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            row[idx(k, l)] += left[a][k] * QuadExt(basis(b, l));
            row[idx(k, l)] += left[b][k] * QuadExt(basis(a, l));
          }
      }
  }

  MatX sys(static_cast<int>(rows.size()), n * n);
  for (size_t r = 0; r < rows.size(); ++r)
    for (int c = 0; c < n * n; ++c)
      sys(static_cast<int>(r), c) = rows[r][c];
  return n * n - rank(std::move(sys));
}

ConjugationVerdict no_conjugation_verdict(const DiagonalHeintzePair &pair,
                                          const MatX &gram1,
                                          const MatX &gram2) {
  ConjugationVerdict out;
  out.dim1 = identity_component_dim(pair, gram1);
  out.dim2 = identity_component_dim(pair, gram2);
  auto fill = [&pair](const MatX &g, int dim, int &order, std::string &label) {
    if (dim != 0)
      return;
    try {
      IsoAutReport rep = enumerate_finite_IA(pair, g);
      order = rep.order;
      label = rep.group_label;
    } catch (const NotFinite &) {
      order = -1;
    }
  };
  fill(gram1, out.dim1, out.order1, out.group1);
  fill(gram2, out.dim2, out.order2, out.group2);

  if (out.dim1 > out.dim2)
    out.verdict = "IMPOSSIBLE";
  else if (out.dim1 == 0 && out.dim2 == 0 && out.order1 > 0 &&
           out.order2 > 0 && out.order1 > out.order2)
    out.verdict = "IMPOSSIBLE";
  else
    out.verdict = "INCONCLUSIVE";
  return out;
}

} // namespace nilgeo
