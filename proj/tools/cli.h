// The `lsatrace` command line: build, query, pmi, trace and eval.

#ifndef LSA_TOOLS_CLI_H_
#define LSA_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace lsa::cli {

// Default output directory when --out is not given.
inline constexpr const char *kOutDirEnv = "LSA_OUT_DIR";

// Runs one invocation. `args` excludes the program name. Returns the process
// exit code: 0 success, 1 internal, 2 parameter, 3 lookup, 4 validation,
// 5 format.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace lsa::cli

#endif  // LSA_TOOLS_CLI_H_
