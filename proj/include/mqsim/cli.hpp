// cli.hpp — scenario runner and sweep driver behind the `mqsim` executable

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "mqsim/scenario.hpp"

namespace mqsim::cli {

enum ExitCode : int { Success = 0, Failure = 1, ConfigFailure = 2, NumericFailure = 3 };

// Raised during a run; `operation` names the step that failed (e.g. "solve_tau_mqs").
class RunError : public std::runtime_error {
public:
    RunError(std::string operation, const std::string& what)
        : std::runtime_error(operation + ": " + what), operation_(std::move(operation)) {}
    const std::string& operation() const noexcept { return operation_; }

private:
    std::string operation_;
};

struct RunOptions {
    int jobs{1};
};

// Executes the requested outputs and returns the summary object. Artifact files are
// written atomically under s.output_dir.
nlohmann::json run_scenario(const Scenario& s, const RunOptions& opts = {});

enum class SweepAxis { N, Beta, Alpha, Omega0 };

SweepAxis parse_axis(const std::string& name);
std::string to_string(SweepAxis axis);

// One row per value, in input order; failed points carry a nonempty error column.
std::string sweep_csv(const Scenario& base, SweepAxis axis, const std::vector<double>& values,
                      const RunOptions& opts = {});

// Full command line (without the program name). Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace mqsim::cli
