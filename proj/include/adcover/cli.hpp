#ifndef ADCOVER_CLI_HPP
#define ADCOVER_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace adcover {

/// Exit codes: 0 ok, 2 invalid instance/arguments, 3 infeasible, 4 limits.
enum ExitCode { kOk = 0, kInvalid = 2, kInfeasible = 3, kLimits = 4 };

/// Runs the command-line front end. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err);

}  // namespace adcover

#endif  // ADCOVER_CLI_HPP
