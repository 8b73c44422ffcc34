#include "nilgeo/cli_app.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "nilgeo/bch.hpp"
#include "nilgeo/conformal.hpp"
#include "nilgeo/corpus.hpp"
#include "nilgeo/errors.hpp"
#include "nilgeo/isoaut.hpp"
#include "nilgeo/json_io.hpp"
#include "nilgeo/metric.hpp"
#include "nilgeo/modulus.hpp"
#include "nilgeo/sampling.hpp"
#include "nilgeo/spd.hpp"

namespace nilgeo {
namespace {

struct RunConfig {
  std::string input;
  std::uint64_t seed = 42;
  double tol = 1e-10;
  int samples = 1000;
  int word_cap = 6;
  std::string out_path;
  std::string gram = "standard";
  std::vector<double> t_range{-5.0, 5.0};
};

// Collects named pass/fail records for the report. Numeric assertions carry
// their tolerance and the measured residual; exact assertions compare
// discrete values and list both sides on failure.
class Assertions {
public:
  void numeric(const std::string &name, double residual, double tolerance,
               Json witness = nullptr) {
    bool passed = std::isfinite(residual) && residual <= tolerance;
    Json item;
    item["name"] = name;
    item["passed"] = passed;
    item["tolerance"] = tolerance;
    item["residual"] = residual;
    if (!witness.is_null())
      item["witness"] = witness;
    push(item, passed);
  }

  void exact(const std::string &name, bool passed, Json witness = nullptr) {
    Json item;
    item["name"] = name;
    item["passed"] = passed;
    item["tolerance"] = "exact";
    if (!witness.is_null())
      item["witness"] = witness;
    push(item, passed);
  }

  bool all_passed() const { return ok_; }
  const Json &to_json() const { return items_; }

private:
  void push(Json item, bool passed) {
    items_.push_back(std::move(item));
    ok_ = ok_ && passed;
  }

  Json items_ = Json::array();
  bool ok_ = true;
};

Json resolve_input(const RunConfig &cfg) {
  if (is_bundled(cfg.input))
    return bundled_json(cfg.input);
  return load_json_file(cfg.input);
}

// Documents that describe a group action or a box ring name their pair under
// "group"; standalone documents are the pair itself.
DiagonalHeintzePair resolve_pair(const Json &doc) {
  if (doc.contains("pair")) {
    const Json &p = doc.at("pair");
    if (p.is_string())
      return bundled_pair(p.get<std::string>());
    return pair_from_json(p);
  }
  if (doc.contains("group")) {
    const Json &p = doc.at("group");
    if (p.is_string())
      return bundled_pair(p.get<std::string>());
    return pair_from_json(p);
  }
  return pair_from_json(doc);
}

MatX resolve_gram(const RunConfig &cfg, const DiagonalHeintzePair &pair,
                  const Json &doc) {
  int n = pair.algebra().dim();
  if (cfg.gram == "standard")
    return MatX::identity(n);
  if (doc.contains("grams") && doc.at("grams").contains(cfg.gram))
    return matx_from_json(doc.at("grams").at(cfg.gram));
  return matx_from_json(load_json_file(cfg.gram));
}

MatQ rational_gram(const RunConfig &cfg, const DiagonalHeintzePair &pair,
                   const Json &doc) {
  int n = pair.algebra().dim();
  if (cfg.gram == "standard")
    return MatQ::identity(n);
  Json g;
  if (doc.contains("grams") && doc.at("grams").contains(cfg.gram))
    g = doc.at("grams").at(cfg.gram);
  else
    g = load_json_file(cfg.gram);
  return matq_from_json(g);
}

Json report_head(const std::string &command, const RunConfig &cfg,
                 bool with_input = true) {
  Json report;
  report["command"] = command;
  if (with_input)
    report["input"] = cfg.input;
  report["seed"] = cfg.seed;
  return report;
}

int emit(const RunConfig &cfg, Json report, const Assertions &assertions,
         std::ostream &out) {
  report["assertions"] = assertions.to_json();
  std::string text = dump_report(report);
  if (!cfg.out_path.empty()) {
    std::ofstream file(cfg.out_path, std::ios::binary);
    if (!file)
      throw InputError("cannot open output file: " + cfg.out_path);
    file << text;
  } else {
    out << text;
  }
  return assertions.all_passed() ? 0 : 1;
}

Json rationals_to_json(const std::vector<Rational> &v) {
  Json a = Json::array();
  for (const Rational &x : v)
    a.push_back(to_string(x));
  return a;
}

VecQ random_point(Rng &rng, int n, int bits) {
  VecQ x(n);
  for (int i = 0; i < n; ++i)
    x[i] = rng.dyadic(bits);
  return x;
}

int cmd_validate(const RunConfig &cfg, std::ostream &out) {
  Json doc = resolve_input(cfg);
  LieAlgebra L = algebra_from_json(doc);
  ValidationReport checked = validate(L);

  Json report = report_head("validate", cfg);
  report["dim"] = L.dim();
  Json basis = Json::array();
  for (const std::string &name : L.names())
    basis.push_back(name);
  report["basis"] = basis;
  report["nilpotency_class"] = checked.nilpotency_class;
  Json lcs = Json::array();
  for (int d : checked.lower_central_dims)
    lcs.push_back(d);
  report["lower_central_dims"] = lcs;

  Assertions assertions;
  assertions.exact("jacobi_identity", checked.jacobi_ok);
  assertions.exact("nilpotent", checked.lower_central_dims.back() == 0);
  return emit(cfg, report, assertions, out);
}

int cmd_analyze(const RunConfig &cfg, std::ostream &out) {
  Json doc = resolve_input(cfg);
  DiagonalHeintzePair pair = resolve_pair(doc);
  const LayerDecomposition &layering = pair.layering();

  Json report = report_head("analyze", cfg);
  report["dim"] = pair.algebra().dim();
  report["nilpotency_class"] = pair.algebra().nilpotency_class();
  report["eigenvalues"] = rationals_to_json(layering.eigenvalues);
  Json dims = Json::array();
  int dim_sum = 0;
  for (const SubspaceQ &layer : layering.layers) {
    dims.push_back(layer.dim());
    dim_sum += layer.dim();
  }
  report["layer_dims"] = dims;
  report["carnot_type"] = pair.carnot();
  if (pair.carnot())
    report["homogeneous_dimension"] = homogeneous_dimension(pair);
  else
    report["homogeneous_dimension"] = nullptr;

  Assertions assertions;
  assertions.exact("layers_fill_algebra", dim_sum == pair.algebra().dim());
  assertions.exact("eigenvalues_positive",
                   layering.eigenvalues.front() > Rational(0));
  return emit(cfg, report, assertions, out);
}

int cmd_sequence(const RunConfig &cfg, std::ostream &out) {
  Json doc = resolve_input(cfg);
  DiagonalHeintzePair pair = resolve_pair(doc);
  PreservedFlag flag = preserved_sequence(pair);

  Json chain_dims = Json::array();
  for (const SubspaceQ &member : flag.chain)
    chain_dims.push_back(member.dim());

  bool increasing = true;
  for (size_t i = 0; i + 1 < flag.chain.size(); ++i)
    increasing = increasing && flag.chain[i].dim() < flag.chain[i + 1].dim();
  bool nested = true;
  for (size_t i = 0; i + 1 < flag.chain.size(); ++i)
    nested = nested && flag.chain[i + 1].contains(flag.chain[i]);

  Json steps = Json::array();
  bool quotients_carnot = true;
  for (int i = 0; i < flag.length(); ++i) {
    const FlagStep &step = flag.steps[static_cast<size_t>(i)];
    DiagonalHeintzePair quotient = induced_pair(pair, flag, i + 1);
    quotients_carnot = quotients_carnot && is_carnot_type(quotient);
    Json entry;
    entry["basis_rows"] =
        matq_to_json(flag.chain[static_cast<size_t>(i) + 1].basis());
    entry["quotient_dim"] = step.quotient_algebra.dim();
    entry["quotient_eigenvalues"] = rationals_to_json(step.quotient_eigenvalues);
    entry["carnot_step_count"] = step.carnot_layer_count;
    steps.push_back(entry);
  }

  Json report = report_head("sequence", cfg);
  report["chain_dims"] = chain_dims;
  report["steps"] = steps;

  Assertions assertions;
  assertions.exact("chain_strictly_increasing", increasing);
  assertions.exact("chain_nested", nested);
  assertions.exact("chain_ends_at_algebra",
                   flag.chain.back().dim() == pair.algebra().dim());
  assertions.exact("quotients_carnot_type", quotients_carnot);
  return emit(cfg, report, assertions, out);
}

int cmd_metric_check(const RunConfig &cfg, std::ostream &out) {
  Json doc = resolve_input(cfg);
  DiagonalHeintzePair pair = resolve_pair(doc);
  DInnerProduct ip(pair, rational_gram(cfg, pair, doc));
  const LieAlgebra &L = pair.algebra();
  FloatGroup fg(L);
  int n = L.dim();

  Rng rng(cfg.seed);
  double hom_max = 0;
  double left_max = 0;
  int used = 0;
  for (int k = 0; k < cfg.samples; ++k) {
    VecQ x = random_point(rng, n, 8);
    VecQ y = random_point(rng, n, 8);
    VecQ z = random_point(rng, n, 8);
    double base = quasi_distance(pair, ip, x, y);
    if (base < 1e-9)
      continue;
    ++used;

    double t = rng.real(cfg.t_range[0], cfg.t_range[1]);
    VecD xd = to_doubles(x);
    VecD yd = to_doubles(y);
    double scaled =
        quasi_distance(pair, ip, dilation(pair, t, xd), dilation(pair, t, yd));
    double expected = std::exp(t) * base;
    hom_max = std::max(hom_max, std::abs(scaled - expected) / expected);

    VecD zd = to_doubles(z);
    double moved =
        quasi_distance(pair, ip, fg.multiply(zd, xd), fg.multiply(zd, yd));
    left_max = std::max(left_max, std::abs(moved - base) / base);
  }
  if (used == 0)
    throw DegenerateSample("all sampled pairs coincided");

  Json report = report_head("metric-check", cfg);
  report["samples"] = cfg.samples;
  report["samples_used"] = used;
  report["tolerance"] = cfg.tol;
  report["t_range"] = Json::array({cfg.t_range[0], cfg.t_range[1]});
  report["homogeneity_max_rel"] = hom_max;
  report["left_invariance_max_rel"] = left_max;
  report["triangle_constant"] =
      quasi_triangle_constant(pair, ip, cfg.seed, cfg.samples);

  Assertions assertions;
  assertions.numeric("homogeneity", hom_max, cfg.tol);
  assertions.numeric("left_invariance", left_max, cfg.tol);
  return emit(cfg, report, assertions, out);
}

int cmd_circumcenter(const RunConfig &cfg, std::ostream &out) {
  Json doc = resolve_input(cfg);
  if (!doc.contains("points") || !doc.at("points").is_array() ||
      doc.at("points").empty())
    throw InputError("expected a non-empty \"points\" array");

  std::vector<SpdPoint> points;
  for (const Json &entry : doc.at("points")) {
    if (!entry.is_array() || entry.empty())
      throw InputError("each point must be a matrix given by rows");
    int m = static_cast<int>(entry.size());
    Eigen::MatrixXd s(m, m);
    for (int i = 0; i < m; ++i) {
      const Json &row = entry.at(static_cast<size_t>(i));
      if (!row.is_array() || static_cast<int>(row.size()) != m)
        throw InputError("each point must be a square matrix");
      for (int j = 0; j < m; ++j)
        s(i, j) = row.at(static_cast<size_t>(j)).get<double>();
    }
    points.emplace_back(s);
  }

  Json report = report_head("circumcenter", cfg);
  report["point_count"] = points.size();
  report["tolerance"] = cfg.tol;

  Assertions assertions;
  try {
    CircumcenterResult result = circumcenter(points, cfg.tol);
    double farthest = 0;
    Json dists = Json::array();
    for (const SpdPoint &p : points) {
      double d = distance(result.center, p);
      dists.push_back(d);
      farthest = std::max(farthest, d);
    }
    report["center"] = matd_to_json(result.center.matrix());
    report["radius"] = result.radius;
    report["iterations"] = result.iterations;
    report["distances"] = dists;

    assertions.exact("converged", true);
    assertions.numeric("radius_matches_farthest_point",
                       std::abs(farthest - result.radius),
                       std::max(cfg.tol * 10, 1e-12));
    assertions.numeric("center_has_unit_determinant",
                       std::abs(result.center.matrix().determinant() - 1.0),
                       1e-10);
  } catch (const NonConvergent &e) {
    report["center"] = nullptr;
    assertions.exact("converged", false, Json(e.what()));
  }
  return emit(cfg, report, assertions, out);
}

int cmd_invariant(const RunConfig &cfg, std::ostream &out) {
  Json doc = resolve_input(cfg);
  DiagonalHeintzePair pair = resolve_pair(doc);
  GroupSpec spec = group_from_json(pair, doc);
  GeneratedGroup group{&pair, spec.effective};

  int v1_dim = pair.layering().layers.front().dim();
  StructureField mu0 = [v1_dim](const VecQ &) {
    return SpdPoint::identity(v1_dim);
  };
  double solver_tol = std::clamp(cfg.tol * 1e-2, 1e-14, 1e-10);

  Rng rng(cfg.seed);
  int n = pair.algebra().dim();
  double max_residual = 0;
  Json worst = nullptr;
  for (int k = 0; k < cfg.samples; ++k) {
    VecQ x = random_point(rng, n, 6);
    ConformalPoint at_x =
        invariant_structure(group, mu0, x, cfg.word_cap, solver_tol);
    for (size_t gi = 0; gi < spec.effective.size(); ++gi) {
      const GradedAffine &g = spec.effective[gi];
      VecQ gx = apply(pair, g, x);
      ConformalPoint at_gx =
          invariant_structure(group, mu0, gx, cfg.word_cap, solver_tol);
      double res = distance(pullback(pair, g, at_gx.value), at_x.value);
      if (res > max_residual) {
        max_residual = res;
        worst = Json{{"sample", k}, {"generator", gi + 1}};
      }
    }
  }

  Json report = report_head("invariant", cfg);
  report["samples"] = cfg.samples;
  report["word_cap"] = cfg.word_cap;
  report["tolerance"] = cfg.tol;
  report["generator_count"] = spec.effective.size();
  report["max_residual"] = max_residual;

  Assertions assertions;
  assertions.numeric("pullback_invariance", max_residual, cfg.tol, worst);
  return emit(cfg, report, assertions, out);
}

int cmd_iso_aut(const RunConfig &cfg, std::ostream &out) {
  Json doc = resolve_input(cfg);
  DiagonalHeintzePair pair = resolve_pair(doc);
  MatX gram = resolve_gram(cfg, pair, doc);
  check_layered_gram(pair, gram);

  int component_dim = identity_component_dim(pair, gram);
  bool finite = false;
  int order = -1;
  std::string label;
  try {
    IsoAutReport enumerated = enumerate_finite_IA(pair, gram);
    finite = true;
    order = enumerated.order;
    label = enumerated.group_label;
  } catch (const NotFinite &) {
  }

  Json report = report_head("iso-aut", cfg);
  report["gram"] = cfg.gram;
  report["component_dim"] = component_dim;
  report["finite"] = finite;
  if (finite) {
    report["order"] = order;
    report["group"] = label;
  } else {
    report["order"] = nullptr;
    report["group"] = nullptr;
  }

  Assertions assertions;
  assertions.exact("finite_iff_component_dim_zero",
                   finite == (component_dim == 0));
  return emit(cfg, report, assertions, out);
}

int cmd_counterexample(const RunConfig &cfg, std::ostream &out) {
  DiagonalHeintzePair pair = bundled_pair("hxh");
  MatX gram1 = bundled_gram("hxh", "ip1");
  MatX gram2 = bundled_gram("hxh", "ip2");
  ConjugationVerdict verdict = no_conjugation_verdict(pair, gram1, gram2);

  Json report = report_head("counterexample", cfg, false);
  report["pair"] = "hxh";
  Json d1;
  d1["component_dim"] = verdict.dim1;
  Json d2;
  d2["order"] = verdict.order2;
  d2["group"] = verdict.group2;
  report["d1"] = d1;
  report["d2"] = d2;
  report["verdict"] = verdict.verdict;

  Assertions assertions;
  assertions.exact("d1_component_dim_2", verdict.dim1 == 2,
                   Json(verdict.dim1));
  assertions.exact("d2_order_16", verdict.order2 == 16, Json(verdict.order2));
  assertions.exact("d2_group_label", verdict.group2 == "(Z2^3):Z2",
                   Json(verdict.group2));
  assertions.exact("verdict_impossible", verdict.verdict == "IMPOSSIBLE",
                   Json(verdict.verdict));
  return emit(cfg, report, assertions, out);
}

int cmd_modulus_demo(const RunConfig &cfg, std::ostream &out) {
  Json doc = resolve_input(cfg);
  DiagonalHeintzePair pair = resolve_pair(doc);
  BoxRing ring = ring_from_json(pair, doc);
  int n = pair.algebra().dim();

  SegmentModulus lower = segment_family_modulus(ring);
  Rational lambda11 = ring.lambda[static_cast<size_t>(ring.slab)];
  long q = 0;
  for (int w : ring.weights)
    q += w;
  Rational j_similarity = pow_rational(lambda11, q);
  Rational upper_zero = upper_volume_bound(
      ring, j_similarity, std::vector<Rational>(static_cast<size_t>(n)));

  bool unit_box = true;
  for (int i = 0; i < n; ++i)
    if (i != ring.slab && ring.half_widths[static_cast<size_t>(i)] != 1)
      unit_box = false;

  std::vector<DeltaPoly> table = padding_polynomials(pair, ring.lambda);
  Json table_json = Json::array();
  bool no_constant = true;
  for (int i = 0; i < n; ++i) {
    const DeltaPoly &p = table[static_cast<size_t>(i)];
    if (!p.coeff.empty() && p.coeff.front() != 0)
      no_constant = false;
    Json entry;
    entry["coordinate"] = i + 1;
    entry["coefficients"] = rationals_to_json(p.coeff);
    table_json.push_back(entry);
  }

  Json report = report_head("modulus-demo", cfg);
  report["samples"] = cfg.samples;
  report["weights"] = ring.weights;
  report["homogeneous_weight"] = q;
  report["lambda11"] = to_string(lambda11);
  report["j_similarity"] = to_string(j_similarity);
  report["per_family_modulus"] = to_string(lower.per_family);
  report["lower_bound"] = to_string(lower.lower_bound);
  report["upper_bound_zero_padding"] = to_string(upper_zero);
  if (unit_box)
    report["upper_bound_claim_padding"] =
        to_string(upper_volume_bound(ring, j_similarity));
  else
    report["upper_bound_claim_padding"] = nullptr;
  report["padding"] = table_json;

  Assertions assertions;
  assertions.exact("modulus_sandwich_closes", upper_zero == lower.lower_bound,
                   Json{{"lower", to_string(lower.lower_bound)},
                        {"upper", to_string(upper_zero)}});
  assertions.exact("padding_no_constant_term", no_constant);

  if (unit_box) {
    InclusionReport inclusion = inclusion_check(ring, cfg.samples, cfg.seed);
    Json witness = nullptr;
    if (!inclusion.ok)
      witness = Json{{"coordinate", inclusion.coordinate + 1},
                     {"y", vecq_to_json(inclusion.y)},
                     {"z", vecq_to_json(inclusion.z)},
                     {"w", vecq_to_json(inclusion.w)}};
    report["inclusion_ok"] = inclusion.ok;
    assertions.exact("inclusion_holds", inclusion.ok, witness);

    InclusionReport bare = inclusion_check(
        ring, cfg.samples, cfg.seed,
        std::vector<DeltaPoly>(static_cast<size_t>(n)));
    if (bare.ok)
      report["zero_padding_witness"] = nullptr;
    else
      report["zero_padding_witness"] =
          Json{{"coordinate", bare.coordinate + 1},
               {"y", vecq_to_json(bare.y)},
               {"z", vecq_to_json(bare.z)},
               {"w", vecq_to_json(bare.w)}};
  } else {
    report["inclusion_ok"] = nullptr;
    report["zero_padding_witness"] = nullptr;
  }
  return emit(cfg, report, assertions, out);
}

int cmd_blowup_demo(const RunConfig &cfg, std::ostream &out) {
  Json doc = resolve_input(cfg);
  DiagonalHeintzePair pair = resolve_pair(doc);
  DInnerProduct ip = DInnerProduct::standard(pair);

  if (!doc.contains("g") || !doc.contains("h") || !doc.contains("scales") ||
      !doc.contains("points"))
    throw InputError("expected \"g\", \"h\", \"scales\", and \"points\"");
  GradedAffine g = affine_from_json(pair, doc.at("g"));
  std::vector<GradedAffine> h;
  for (const Json &entry : doc.at("h"))
    h.push_back(affine_from_json(pair, entry));
  std::vector<Rational> scales;
  for (const Json &entry : doc.at("scales"))
    scales.push_back(rational_from_json(entry));
  std::vector<VecQ> samples;
  for (const Json &entry : doc.at("points"))
    samples.push_back(vecq_from_json(entry));

  BlowupReport blowup = blowup_demo(pair, ip, h, scales, g, samples);

  std::vector<Rational> rescaled;
  for (const Rational &s : scales)
    rescaled.push_back(s * 10);
  BlowupReport again = blowup_demo(pair, ip, h, rescaled, g, samples);

  double drift = 0;
  double min_k = blowup.steps.empty() ? 1.0 : blowup.steps.front().dilatation_value;
  Json steps = Json::array();
  for (size_t j = 0; j < blowup.steps.size(); ++j) {
    drift = std::max(drift, std::abs(blowup.steps[j].dilatation_value -
                                     again.steps[j].dilatation_value));
    min_k = std::min(min_k, blowup.steps[j].dilatation_value);
    Json entry;
    entry["scale"] = to_string(blowup.steps[j].scale);
    entry["dilatation"] = blowup.steps[j].dilatation_value;
    steps.push_back(entry);
  }

  Json report = report_head("blowup-demo", cfg);
  report["steps"] = steps;
  report["limit_dilatation"] = blowup.limit_dilatation;
  report["rescale_drift"] = drift;

  Assertions assertions;
  assertions.numeric("dilatation_scale_invariant", drift,
                     std::max(cfg.tol, 1e-9));
  assertions.numeric("dilatation_at_least_one", std::max(0.0, 1.0 - min_k),
                     1e-12);
  return emit(cfg, report, assertions, out);
}

} // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out,
            std::ostream &err) {
  CLI::App app{"Diagonal Heintze pair toolkit"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_output = [&cfg](CLI::App *sub) {
    sub->add_option("--out", cfg.out_path, "write the report to this file");
    sub->add_option("--seed", cfg.seed, "sampling seed recorded in the report");
  };
  auto add_input = [&cfg, &add_output](CLI::App *sub) {
    sub->add_option("--input", cfg.input,
                    "bundled input name or path to a JSON file")
        ->required();
    add_output(sub);
  };

  CLI::App *validate_cmd =
      app.add_subcommand("validate", "check a Lie algebra structure table");
  add_input(validate_cmd);

  CLI::App *analyze_cmd = app.add_subcommand(
      "analyze", "layer decomposition of a pair and its grading data");
  add_input(analyze_cmd);

  CLI::App *sequence_cmd = app.add_subcommand(
      "sequence", "preserved subgroup sequence with Carnot-type quotients");
  add_input(sequence_cmd);

  CLI::App *metric_cmd = app.add_subcommand(
      "metric-check", "homogeneity and left invariance of the quasi-metric");
  add_input(metric_cmd);
  metric_cmd->add_option("--tol", cfg.tol, "assertion tolerance")
      ->check(CLI::PositiveNumber);
  metric_cmd->add_option("--samples", cfg.samples, "sample count")
      ->check(CLI::PositiveNumber);
  metric_cmd->add_option("--gram", cfg.gram,
                         "inner product: standard, a name under \"grams\", "
                         "or a matrix file");
  metric_cmd
      ->add_option("--t-range", cfg.t_range,
                   "dilation exponent range for homogeneity sampling")
      ->expected(2);

  CLI::App *circumcenter_cmd = app.add_subcommand(
      "circumcenter", "minimax center of symmetric-space points");
  add_input(circumcenter_cmd);
  circumcenter_cmd->add_option("--tol", cfg.tol, "solver tolerance")
      ->check(CLI::PositiveNumber);

  CLI::App *invariant_cmd = app.add_subcommand(
      "invariant", "group-invariant conformal structure at sampled points");
  add_input(invariant_cmd);
  invariant_cmd->add_option("--tol", cfg.tol, "invariance tolerance")
      ->check(CLI::PositiveNumber);
  invariant_cmd->add_option("--samples", cfg.samples, "sampled base points")
      ->check(CLI::PositiveNumber);
  invariant_cmd
      ->add_option("--word-cap", cfg.word_cap, "orbit word length cap")
      ->check(CLI::PositiveNumber);

  CLI::App *isoaut_cmd = app.add_subcommand(
      "iso-aut", "isometric graded automorphism group of a pair");
  add_input(isoaut_cmd);
  isoaut_cmd->add_option("--gram", cfg.gram,
                         "inner product: standard, a name under \"grams\", "
                         "or a matrix file");

  CLI::App *counterexample_cmd = app.add_subcommand(
      "counterexample",
      "two inner products on the same group with incompatible isometries");
  add_output(counterexample_cmd);

  CLI::App *modulus_cmd = app.add_subcommand(
      "modulus-demo", "segment-family modulus bounds for a box ring");
  add_input(modulus_cmd);
  modulus_cmd->add_option("--samples", cfg.samples, "inclusion sample count")
      ->check(CLI::PositiveNumber);

  CLI::App *blowup_cmd = app.add_subcommand(
      "blowup-demo", "dilatation along a dilation blow-up of conjugated maps");
  add_input(blowup_cmd);
  blowup_cmd->add_option("--tol", cfg.tol, "scale invariance tolerance")
      ->check(CLI::PositiveNumber);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (app.got_subcommand(validate_cmd))
      return cmd_validate(cfg, out);
    if (app.got_subcommand(analyze_cmd))
      return cmd_analyze(cfg, out);
    if (app.got_subcommand(sequence_cmd))
      return cmd_sequence(cfg, out);
    if (app.got_subcommand(metric_cmd))
      return cmd_metric_check(cfg, out);
    if (app.got_subcommand(circumcenter_cmd))
      return cmd_circumcenter(cfg, out);
    if (app.got_subcommand(invariant_cmd))
      return cmd_invariant(cfg, out);
    if (app.got_subcommand(isoaut_cmd))
      return cmd_iso_aut(cfg, out);
    if (app.got_subcommand(counterexample_cmd))
      return cmd_counterexample(cfg, out);
    if (app.got_subcommand(modulus_cmd))
      return cmd_modulus_demo(cfg, out);
    if (app.got_subcommand(blowup_cmd))
      return cmd_blowup_demo(cfg, out);
    err << "error: no subcommand selected\n";
    return 2;
  } catch (const Error &e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

int run_cli(int argc, const char *const *argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i)
    args.emplace_back(argv[i]);
  return run_cli(args, std::cout, std::cerr);
}

} // namespace nilgeo
