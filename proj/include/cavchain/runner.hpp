#ifndef CAVCHAIN_RUNNER_HPP
#define CAVCHAIN_RUNNER_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "cavchain/scenario.hpp"

namespace cavchain {

// Process exit codes shared by the runner and the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitOracleMismatch = 3;
inline constexpr int kExitIo = 4;

struct RunResult {
    int exit_code = kExitOk;
    std::vector<std::string> files_written;
    double worst_oracle_discrepancy = 0.0;
    std::string message;
};

// Execute every task of the scenario, one output file per task/variant
// combination. Output is deterministic: identical scenarios produce
// byte-identical files. With oracle_check enabled, every emitted transmission
// and reflection value is re-derived from the full-system solver and the run
// fails when any discrepancy exceeds the tolerance.
RunResult run(const Scenario& scenario, std::ostream& log);

// %.17g rendering used for all CSV numbers; round-trips doubles exactly.
std::string format_double(double v);

} // namespace cavchain

#endif
