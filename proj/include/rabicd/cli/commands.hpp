#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "rabicd/analysis.hpp"
#include "rabicd/cli/output.hpp"
#include "rabicd/floquet.hpp"

namespace rabicd::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kConfigError = 2, kNonConvergence = 3, kPartialFailure = 4 };

const std::vector<std::string>& command_names();

// Typed views of a resolved config.
ModelParams model_params(const RunConfig& cfg, double gamma, double eta);
MetricSpec metric_spec(const RunConfig& cfg, const std::string& kind);
OptimizerConfig optimizer_config(const RunConfig& cfg);
ProtocolOptions protocol_options(const RunConfig& cfg);
FloquetConfig floquet_config(const RunConfig& cfg);

struct CommandResult {
    Report report;
    int exit_code = kOk;
};

// Runs one subcommand; configuration and domain errors propagate as exceptions.
CommandResult run_command(const std::string& name, const RunConfig& cfg);

// run_command plus output and exit-code mapping. Diagnostics go to err.
int execute(const std::string& name, const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace rabicd::cli
