#include "nilgeo/json_io.hpp"

#include <fstream>
#include <set>

#include "nilgeo/errors.hpp"

namespace nilgeo {

namespace {

const Json &require_key(const Json &j, const std::string &key,
                        const std::string &what) {
  if (!j.is_object())
    throw InputError(what + " must be a JSON object");
  auto it = j.find(key);
  if (it == j.end())
    throw InputError(what + " is missing the \"" + key + "\" key");
  return *it;
}

int int_from_json(const Json &j, const std::string &what) {
  if (!j.is_number_integer())
    throw InputError(what + " must be an integer");
  return j.get<int>();
}

} // namespace

Json load_json_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw InputError("cannot open input file '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_json_text(text, path);
}

Json parse_json_text(const std::string &text, const std::string &origin) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error &e) {
    throw InputError("malformed JSON in " + origin + ": " + e.what());
  }
}

std::string dump_report(const Json &report) { return report.dump(2) + "\n"; }

Rational rational_from_json(const Json &j) {
  if (j.is_string())
    return parse_rational(j.get<std::string>());
  if (j.is_number_integer())
    return Rational(j.get<long>());
  if (j.is_number())
    throw InputError("non-integer numeric literal; write rationals as "
                     "\"p/q\" strings");
  throw InputError("expected a rational value");
}

Json rational_to_json(const Rational &r) { return Json(to_string(r)); }

QuadExt quad_from_json(const Json &j) {
  if (j.is_object()) {
    QuadExt x;
    for (const auto &[key, value] : j.items()) {
      if (key == "a")
        x.a = rational_from_json(value);
      else if (key == "b")
        x.b = rational_from_json(value);
      else if (key == "c")
        x.c = rational_from_json(value);
      else if (key == "d")
        x.d = rational_from_json(value);
      else
        throw InputError("unknown field coefficient \"" + key + "\"");
    }
    return x;
  }
  return QuadExt(rational_from_json(j));
}

Json quad_to_json(const QuadExt &x) {
  if (x.is_rational())
    return rational_to_json(x.a);
  Json j;
  j["a"] = to_string(x.a);
  j["b"] = to_string(x.b);
  j["c"] = to_string(x.c);
  j["d"] = to_string(x.d);
  return j;
}

VecQ vecq_from_json(const Json &j) {
  if (!j.is_array())
    throw InputError("expected an array of rationals");
  VecQ v;
  v.reserve(j.size());
  for (const Json &entry : j)
    v.push_back(rational_from_json(entry));
  return v;
}

Json vecq_to_json(const VecQ &v) {
  Json j = Json::array();
  for (const Rational &x : v)
    j.push_back(rational_to_json(x));
  return j;
}

MatQ matq_from_json(const Json &j) {
  if (!j.is_array() || j.empty())
    throw InputError("expected a non-empty array of matrix rows");
  std::vector<VecQ> rows;
  rows.reserve(j.size());
  for (const Json &row : j) {
    rows.push_back(vecq_from_json(row));
    if (rows.back().size() != rows.front().size())
      throw InputError("matrix rows have unequal lengths");
  }
  MatQ m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
  for (int i = 0; i < m.rows; ++i)
    for (int k = 0; k < m.cols; ++k)
      m(i, k) = rows[static_cast<size_t>(i)][static_cast<size_t>(k)];
  return m;
}

Json matq_to_json(const MatQ &m) {
  Json j = Json::array();
  for (int i = 0; i < m.rows; ++i)
    j.push_back(vecq_to_json(m.row(i)));
  return j;
}

MatX matx_from_json(const Json &j) {
  if (!j.is_array() || j.empty())
    throw InputError("expected a non-empty array of matrix rows");
  const int rows = static_cast<int>(j.size());
  int cols = -1;
  MatX m(0, 0);
  for (int i = 0; i < rows; ++i) {
    const Json &row = j[static_cast<size_t>(i)];
    if (!row.is_array())
      throw InputError("matrix rows must be arrays");
    if (cols < 0) {
      cols = static_cast<int>(row.size());
      m = MatX(rows, cols);
    }
    if (static_cast<int>(row.size()) != cols)
      throw InputError("matrix rows have unequal lengths");
    for (int k = 0; k < cols; ++k)
      m(i, k) = quad_from_json(row[static_cast<size_t>(k)]);
  }
  return m;
}

Json matx_to_json(const MatX &m) {
  Json j = Json::array();
  for (int i = 0; i < m.rows; ++i) {
    Json row = Json::array();
    for (int k = 0; k < m.cols; ++k)
      row.push_back(quad_to_json(m(i, k)));
    j.push_back(std::move(row));
  }
  return j;
}

Json matd_to_json(const Eigen::MatrixXd &m) {
  Json j = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k)
      row.push_back(m(i, k));
    j.push_back(std::move(row));
  }
  return j;
}

LieAlgebra algebra_from_json(const Json &j) {
  const int n = int_from_json(require_key(j, "dim", "algebra"), "\"dim\"");
  if (n <= 0)
    throw InputError("\"dim\" must be positive");

  std::vector<std::string> names;
  if (j.contains("basis")) {
    const Json &basis = j["basis"];
    if (!basis.is_array() || static_cast<int>(basis.size()) != n)
      throw InputError("\"basis\" must list one name per dimension");
    for (const Json &name : basis) {
      if (!name.is_string())
        throw InputError("basis names must be strings");
      names.push_back(name.get<std::string>());
    }
  } else {
    for (int i = 1; i <= n; ++i)
      names.push_back("e" + std::to_string(i));
  }

  std::vector<BracketSpec> brackets;
  std::set<std::pair<int, int>> seen;
  if (j.contains("brackets")) {
    const Json &list = j["brackets"];
    if (!list.is_array())
      throw InputError("\"brackets\" must be an array");
    for (const Json &entry : list) {
      const int i = int_from_json(require_key(entry, "i", "bracket"), "\"i\"");
      const int jj = int_from_json(require_key(entry, "j", "bracket"), "\"j\"");
      if (i < 1 || jj < 1 || i > n || jj > n)
        throw InputError("bracket indices must lie in 1..dim");
      if (i >= jj)
        throw InputError("bracket entries require i < j");
      if (!seen.insert({i, jj}).second)
        throw InputError("duplicate bracket entry");
      BracketSpec spec{i - 1, jj - 1, {}};
      const Json &result = require_key(entry, "result", "bracket");
      if (!result.is_array())
        throw InputError("bracket \"result\" must be an array");
      for (const Json &term : result) {
        const int k = int_from_json(require_key(term, "k", "term"), "\"k\"");
        if (k < 1 || k > n)
          throw InputError("bracket target index out of range");
        spec.result.push_back(
            {k - 1, rational_from_json(require_key(term, "c", "term"))});
      }
      brackets.push_back(std::move(spec));
    }
  }
  return LieAlgebra(n, std::move(names), brackets);
}

Json algebra_to_json(const LieAlgebra &L) {
  Json j;
  j["dim"] = L.dim();
  j["basis"] = L.names();
  Json brackets = Json::array();
  for (int i = 0; i < L.dim(); ++i)
    for (int k = i + 1; k < L.dim(); ++k) {
      Json result = Json::array();
      for (int t = 0; t < L.dim(); ++t)
        if (L.c(i, k, t) != 0) {
          Json term;
          term["k"] = t + 1;
          term["c"] = to_string(L.c(i, k, t));
          result.push_back(std::move(term));
        }
      if (!result.empty()) {
        Json entry;
        entry["i"] = i + 1;
        entry["j"] = k + 1;
        entry["result"] = std::move(result);
        brackets.push_back(std::move(entry));
      }
    }
  j["brackets"] = std::move(brackets);
  return j;
}

DiagonalHeintzePair pair_from_json(const Json &j) {
  LieAlgebra L = algebra_from_json(j);
  MatQ d = matq_from_json(require_key(j, "derivation", "pair"));
  if (d.rows != L.dim() || d.cols != L.dim())
    throw InputError("derivation shape does not match the dimension");
  return layer_decomposition(L, d);
}

Json pair_to_json(const DiagonalHeintzePair &pair) {
  Json j = algebra_to_json(pair.algebra());
  j["derivation"] = matq_to_json(pair.derivation());
  return j;
}

GradedAffine affine_from_json(const DiagonalHeintzePair &pair, const Json &j) {
  VecQ n(pair.algebra().dim(), Rational(0));
  if (j.contains("n"))
    n = vecq_from_json(j["n"]);
  Rational t(1);
  if (j.contains("t"))
    t = rational_from_json(j["t"]);
  MatQ a = MatQ::identity(pair.algebra().dim());
  if (j.contains("A"))
    a = matq_from_json(j["A"]);
  if (t != 1)
    a = dilation_matrix_exact(pair, t) * a;
  return graded_affine(pair, std::move(n), std::move(a));
}

GroupSpec group_from_json(const DiagonalHeintzePair &pair, const Json &j) {
  GroupSpec spec;
  const Json &list = require_key(j, "generators", "group spec");
  if (!list.is_array() || list.empty())
    throw InputError("group spec needs a non-empty generator list");
  for (const Json &entry : list)
    spec.generators.push_back(affine_from_json(pair, entry));
  if (j.contains("conjugator"))
    spec.conjugator = affine_from_json(pair, j["conjugator"]);
  for (const GradedAffine &g : spec.generators)
    spec.effective.push_back(
        spec.conjugator ? conjugate(pair, *spec.conjugator, g) : g);
  return spec;
}

BoxRing ring_from_json(const DiagonalHeintzePair &pair, const Json &j) {
  const int n = pair.algebra().dim();
  VecQ widths = vecq_from_json(require_key(j, "widths", "ring spec"));
  Rational delta = rational_from_json(require_key(j, "delta", "ring spec"));

  const Json &per_layer = require_key(j, "lambdas", "ring spec");
  if (!per_layer.is_array() ||
      static_cast<int>(per_layer.size()) != pair.layer_count())
    throw InputError("\"lambdas\" must list one array per layer");
  std::vector<Rational> lambda(static_cast<size_t>(n), Rational(0));
  for (int layer = 0; layer < pair.layer_count(); ++layer) {
    const SubspaceQ &space = pair.layering().layers[layer];
    const Json &entries = per_layer[static_cast<size_t>(layer)];
    if (!entries.is_array() ||
        static_cast<int>(entries.size()) != space.dim())
      throw InputError("layer " + std::to_string(layer + 1) + " needs " +
                       std::to_string(space.dim()) + " stretch values");
    int used = 0;
    for (int i = 0; i < n; ++i) {
      VecQ e(static_cast<size_t>(n), Rational(0));
      e[static_cast<size_t>(i)] = 1;
      if (space.contains(e))
        lambda[static_cast<size_t>(i)] =
            rational_from_json(entries[static_cast<size_t>(used++)]);
    }
    if (used != space.dim())
      throw InputError("layers must be spanned by coordinate axes");
  }
  return make_box_ring(pair, widths, lambda, delta);
}

} // namespace nilgeo
