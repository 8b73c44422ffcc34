#pragma once

#include <map>
#include <string>
#include <vector>

#include "nilgeo/json_io.hpp"

namespace nilgeo {

// Built-in example inputs, keyed by name. The same texts are shipped under
// data/ for use outside this binary; a test keeps the two in sync.
const std::map<std::string, std::string> &bundled_corpus();

bool is_bundled(const std::string &name);
const std::string &bundled_text(const std::string &name);
Json bundled_json(const std::string &name);
std::vector<std::string> bundled_names();

// The named entry parsed as a Heintze pair (pair entries only).
DiagonalHeintzePair bundled_pair(const std::string &name);

// A Gram matrix stored under "grams" in a bundled pair entry.
MatX bundled_gram(const std::string &pair_name, const std::string &gram_name);

} // namespace nilgeo
