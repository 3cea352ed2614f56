#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace conduit {

/// One job: command, numeric parameters, output target.
struct JobConfig {
  std::string command;
  std::map<std::string, double> params;
  std::string profile;      ///< named profile for verify/bloch/wave when (a, E, c) are absent
  std::string output_path;  ///< empty: standard output
  std::string format;        ///< empty: the command's default
  std::uint64_t seed = 0;
};

const std::vector<std::string>& commands();

/// Numeric keys a command accepts.
const std::vector<std::string>& allowed_params(const std::string& command);

/// Parse a flat JSON document; unknown keys raise ConfigError.
JobConfig parse_config(const nlohmann::json& doc);

/// Reject unknown commands, formats and parameters; fill defaults.
JobConfig resolve(JobConfig cfg);

nlohmann::json config_json(const JobConfig& cfg);

/// Runs a resolved job, writing the artifact to cfg.output_path (atomically) or `out`.
/// Returns 0, or 3 when `verify` finds a residual above tolerance. Throws on errors.
int run(const JobConfig& cfg, std::ostream& out);

/// Full command-line entry: flags override the --config file; maps errors to exit codes
/// (1 domain or config, 2 convergence) with a JSON error record on stderr.
int cli_main(int argc, char** argv);

}  // namespace conduit
