#include "nilgeo/corpus.hpp"

#include "nilgeo/errors.hpp"

namespace nilgeo {

namespace {

const char *const kHeisenberg = R"({
  "dim": 3,
  "basis": ["e1", "e2", "e3"],
  "brackets": [
    {"i": 1, "j": 2, "result": [{"k": 3, "c": "1"}]}
  ],
  "derivation": [
    ["1", "0", "0"],
    ["0", "1", "0"],
    ["0", "0", "2"]
  ]
}
)";

const char *const kAbelianR3 = R"({
  "dim": 3,
  "basis": ["e1", "e2", "e3"],
  "brackets": [],
  "derivation": [
    ["1", "0", "0"],
    ["0", "1", "0"],
    ["0", "0", "2"]
  ]
}
)";

const char *const kHeisenberg123 = R"({
  "dim": 3,
  "basis": ["e1", "e2", "e3"],
  "brackets": [
    {"i": 1, "j": 2, "result": [{"k": 3, "c": "1"}]}
  ],
  "derivation": [
    ["1", "0", "0"],
    ["0", "2", "0"],
    ["0", "0", "3"]
  ]
}
)";

const char *const kHxH = R"({
  "dim": 6,
  "basis": ["e1", "e2", "e3", "f1", "f2", "f3"],
  "brackets": [
    {"i": 1, "j": 2, "result": [{"k": 3, "c": "1"}]},
    {"i": 4, "j": 5, "result": [{"k": 6, "c": "1"}]}
  ],
  "derivation": [
    ["1", "0", "0", "0", "0", "0"],
    ["0", "1", "0", "0", "0", "0"],
    ["0", "0", "2", "0", "0", "0"],
    ["0", "0", "0", "1", "0", "0"],
    ["0", "0", "0", "0", "1", "0"],
    ["0", "0", "0", "0", "0", "2"]
  ],
  "grams": {
    "ip1": [
      ["1", "0", "0", "0", "0", "0"],
      ["0", "1", "0", "0", "0", "0"],
      ["0", "0", "1", "0", "0", "0"],
      ["0", "0", "0", "1", "0", "0"],
      ["0", "0", "0", "0", "1", "0"],
      ["0", "0", "0", "0", "0", "1"]
    ],
    "ip2": [
      ["1", "0", "0", "0", "1", "0"],
      ["0", "1", "0", "0", "0", "0"],
      ["0", "0", "1", "0", "0", "0"],
      ["0", "0", "0", "1", "0", "0"],
      ["1", "0", "0", "0", "3", "0"],
      ["0", "0", "0", "0", "0", "1"]
    ]
  }
}
)";

const char *const kGroupRot4Shear = R"({
  "group": "heisenberg",
  "generators": [
    {"n": ["0", "0", "0"], "A": [["0", "-1", "0"], ["1", "0", "0"], ["0", "0", "1"]]}
  ],
  "conjugator": {"n": ["1/2", "0", "1/3"], "A": [["1", "1", "0"], ["0", "1", "0"], ["0", "0", "1"]]}
}
)";

const char *const kGroupDihedralStretch = R"({
  "group": "heisenberg",
  "generators": [
    {"n": ["0", "0", "0"], "A": [["0", "-1", "0"], ["1", "0", "0"], ["0", "0", "1"]]},
    {"n": ["0", "0", "0"], "A": [["1", "0", "0"], ["0", "-1", "0"], ["0", "0", "-1"]]}
  ],
  "conjugator": {"n": ["1", "-1/2", "0"], "A": [["2", "0", "0"], ["0", "1/2", "0"], ["0", "0", "1"]]}
}
)";

const char *const kGroupHalfTurnLowerShear = R"({
  "group": "heisenberg",
  "generators": [
    {"n": ["1", "0", "0"], "A": [["-1", "0", "0"], ["0", "-1", "0"], ["0", "0", "1"]]}
  ],
  "conjugator": {"n": ["0", "2/3", "-1/5"], "A": [["1", "0", "0"], ["1", "1", "0"], ["0", "0", "1"]]}
}
)";

const char *const kGroupSwapAbelian = R"({
  "group": "abelian-r3",
  "generators": [
    {"n": ["0", "0", "1/2"], "A": [["0", "1", "0"], ["1", "0", "0"], ["0", "0", "1"]]}
  ],
  "conjugator": {"n": ["1/4", "0", "1"], "A": [["1", "1", "0"], ["0", "1", "0"], ["0", "0", "3"]]}
}
)";

const char *const kGroupWingSwap = R"({
  "group": "hxh",
  "generators": [
    {"n": ["0", "0", "0", "0", "0", "0"], "A": [
      ["0", "0", "0", "1", "0", "0"],
      ["0", "0", "0", "0", "1", "0"],
      ["0", "0", "0", "0", "0", "1"],
      ["1", "0", "0", "0", "0", "0"],
      ["0", "1", "0", "0", "0", "0"],
      ["0", "0", "1", "0", "0", "0"]
    ]},
    {"n": ["0", "0", "0", "0", "0", "0"], "A": [
      ["-1", "0", "0", "0", "0", "0"],
      ["0", "-1", "0", "0", "0", "0"],
      ["0", "0", "1", "0", "0", "0"],
      ["0", "0", "0", "1", "0", "0"],
      ["0", "0", "0", "0", "1", "0"],
      ["0", "0", "0", "0", "0", "1"]
    ]}
  ],
  "conjugator": {"n": ["0", "1/2", "0", "-1/3", "0", "1"], "A": [
    ["1", "1", "0", "0", "0", "0"],
    ["0", "1", "0", "0", "0", "0"],
    ["0", "0", "1", "0", "0", "0"],
    ["0", "0", "0", "1", "0", "0"],
    ["0", "0", "0", "0", "1", "0"],
    ["0", "0", "0", "0", "0", "1"]
  ]}
}
)";

const char *const kRingHeisenberg = R"({
  "group": "heisenberg",
  "widths": ["0", "1", "1"],
  "delta": "1/10",
  "lambdas": [["1", "1"], ["1"]]
}
)";

const char *const kRingHeisenbergStretched = R"({
  "group": "heisenberg",
  "widths": ["0", "1", "1"],
  "delta": "1/10",
  "lambdas": [["2", "1"], ["3"]]
}
)";

const char *const kRingHeisenberg123 = R"({
  "group": "heisenberg-123",
  "widths": ["0", "1", "1"],
  "delta": "1/10",
  "lambdas": [["1"], ["1"], ["1"]]
}
)";

const char *const kRingAbelianR3 = R"({
  "group": "abelian-r3",
  "widths": ["0", "1", "1"],
  "delta": "1/10",
  "lambdas": [["1", "1"], ["1"]]
}
)";

const char *const kRingHxH = R"({
  "group": "hxh",
  "widths": ["0", "1", "1", "1", "1", "1"],
  "delta": "1/10",
  "lambdas": [["1", "1", "1", "1"], ["1", "1"]]
}
)";

const char *const kBlowupShear = R"({
  "group": "heisenberg",
  "g": {"n": ["0", "0", "0"], "A": [["7/5", "-8/5", "0"], ["4/5", "-1/5", "0"], ["0", "0", "1"]]},
  "h": [
    {"A": [["1", "-2", "0"], ["1", "-1", "0"], ["0", "0", "1"]]},
    {"A": [["-1", "0", "0"], ["0", "-1", "0"], ["0", "0", "1"]]},
    {"A": [["-1", "2", "0"], ["-1", "1", "0"], ["0", "0", "1"]]}
  ],
  "scales": ["1/2", "3", "7"],
  "points": [["0", "0", "0"], ["1/2", "-1/3", "2"]]
}
)";

const char *const kPointsSpd = R"({
  "points": [
    [[2.0, 0.3], [0.3, 0.7]],
    [[0.5, 0.0], [0.0, 2.0]],
    [[1.0, 0.4], [0.4, 1.2]]
  ]
}
)";

} // namespace

const std::map<std::string, std::string> &bundled_corpus() {
  static const std::map<std::string, std::string> corpus = {
      {"heisenberg", kHeisenberg},
      {"abelian-r3", kAbelianR3},
      {"heisenberg-123", kHeisenberg123},
      {"hxh", kHxH},
      {"group-rot4-shear", kGroupRot4Shear},
      {"group-dihedral-stretch", kGroupDihedralStretch},
      {"group-halfturn-lower-shear", kGroupHalfTurnLowerShear},
      {"group-swap-abelian", kGroupSwapAbelian},
      {"group-wing-swap", kGroupWingSwap},
      {"ring-heisenberg", kRingHeisenberg},
      {"ring-heisenberg-stretched", kRingHeisenbergStretched},
      {"ring-heisenberg-123", kRingHeisenberg123},
      {"ring-abelian-r3", kRingAbelianR3},
      {"ring-hxh", kRingHxH},
      {"blowup-shear", kBlowupShear},
      {"points-spd", kPointsSpd},
  };
  return corpus;
}

bool is_bundled(const std::string &name) {
  return bundled_corpus().count(name) > 0;
}

const std::string &bundled_text(const std::string &name) {
  const auto &corpus = bundled_corpus();
  auto it = corpus.find(name);
  if (it == corpus.end())
    throw InputError("unknown bundled example '" + name + "'");
  return it->second;
}

Json bundled_json(const std::string &name) {
  return parse_json_text(bundled_text(name), "bundled example '" + name + "'");
}

std::vector<std::string> bundled_names() {
  std::vector<std::string> names;
  for (const auto &[name, text] : bundled_corpus())
    names.push_back(name);
  return names;
}

DiagonalHeintzePair bundled_pair(const std::string &name) {
  return pair_from_json(bundled_json(name));
}

MatX bundled_gram(const std::string &pair_name, const std::string &gram_name) {
  Json j = bundled_json(pair_name);
  if (!j.contains("grams") || !j["grams"].contains(gram_name))
    throw InputError("bundled example '" + pair_name +
                     "' has no Gram matrix named '" + gram_name + "'");
  return matx_from_json(j["grams"][gram_name]);
}

} // namespace nilgeo
