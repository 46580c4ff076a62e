#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sphstab {

/// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitCertification = 2;

/// Runs one subcommand (gen-polytope, perturb, recover, delone, density,
/// lp-bound, verify-lemmas, experiment). `args` excludes the program name.
/// Results go to `out` unless --out names a file, which is written only once
/// the result is complete; errors go to `err` as a JSON object.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sphstab
