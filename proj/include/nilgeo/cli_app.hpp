#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nilgeo {

// Dispatches one subcommand. The JSON report goes to `out` unless --out names
// a file; error messages go to `err`. Returns 0 when every assertion in the
// report passes, 1 when an assertion fails (the report carries the witness),
// and 2 for input problems (bad flags, malformed JSON, schema mismatches).
int run_cli(const std::vector<std::string> &args, std::ostream &out,
            std::ostream &err);

// argv form used by the binary entry point.
int run_cli(int argc, const char *const *argv);

} // namespace nilgeo
