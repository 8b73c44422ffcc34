#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "nilgeo/conformal.hpp"
#include "nilgeo/isoaut.hpp"
#include "nilgeo/modulus.hpp"

namespace nilgeo {

// Ordered keys keep reports byte-stable across runs.
using Json = nlohmann::ordered_json;

// Parse errors are rethrown as InputError with the parser's location message.
Json load_json_file(const std::string &path);
Json parse_json_text(const std::string &text, const std::string &origin);

// Canonical report text: two-space indent and a trailing newline.
std::string dump_report(const Json &report);

// Exact scalars travel as strings "p/q"; plain JSON integers are accepted on
// input. Non-integer JSON floats are rejected so exactness never silently
// degrades.
Rational rational_from_json(const Json &j);
Json rational_to_json(const Rational &r);

// Elements of Q(sqrt2, sqrt3) as {"a": "p/q", "b": ..., "c": ..., "d": ...};
// plain rationals are accepted wherever a field element is expected.
QuadExt quad_from_json(const Json &j);
Json quad_to_json(const QuadExt &x);

VecQ vecq_from_json(const Json &j);
Json vecq_to_json(const VecQ &v);

// Matrices are arrays of row arrays.
MatQ matq_from_json(const Json &j);
Json matq_to_json(const MatQ &m);
MatX matx_from_json(const Json &j);
Json matx_to_json(const MatX &m);
Json matd_to_json(const Eigen::MatrixXd &m);

// {"dim": n, "basis": ["e1", ...], "brackets": [{"i": 1, "j": 2,
//  "result": [{"k": 3, "c": "1"}]}]} with 1-based indices, i < j, and
// unlisted pairs meaning zero brackets.
LieAlgebra algebra_from_json(const Json &j);
Json algebra_to_json(const LieAlgebra &L);

// Algebra fields plus "derivation": row-major rational matrix.
DiagonalHeintzePair pair_from_json(const Json &j);
Json pair_to_json(const DiagonalHeintzePair &pair);

// {"n": [...], "t": "p/q", "A": [[...]]} with t the multiplicative dilation
// scale (default 1), folded into the linear part on input.
GradedAffine affine_from_json(const DiagonalHeintzePair &pair, const Json &j);

struct GroupSpec {
  std::vector<GradedAffine> generators; // as listed in the file
  std::optional<GradedAffine> conjugator;
  std::vector<GradedAffine> effective; // conjugated generators, or the plain
                                       // ones when no conjugator is given
};

// {"generators": [...], "conjugator": {...}?} against an already resolved
// pair; the caller decides how "group"/"pair" keys name that pair.
GroupSpec group_from_json(const DiagonalHeintzePair &pair, const Json &j);

// {"widths": [...], "delta": "p/q", "lambdas": [[...], ...]} with widths the
// per-coordinate half-widths (slab entry zero) and lambdas listed per layer
// in ambient coordinate order.
BoxRing ring_from_json(const DiagonalHeintzePair &pair, const Json &j);

} // namespace nilgeo
