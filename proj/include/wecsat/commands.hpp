#pragma once

// Command implementations behind the wec-satlin tool. Each command writes its
// CSV (and optionally SVG) files into `dir` and returns what it produced.

#include <filesystem>
#include <string>
#include <vector>

#include "wecsat/config.hpp"

namespace wecsat {

struct CommandReport {
    std::vector<std::filesystem::path> files;
    bool passed = true;  ///< false only when verify finds a failing, unflagged row
    std::string summary;
};

CommandReport cmd_matched(const RunConfig& cfg, const std::filesystem::path& dir);
CommandReport cmd_smith(const RunConfig& cfg, const std::filesystem::path& dir);
CommandReport cmd_pareto(const RunConfig& cfg, const std::filesystem::path& dir);
CommandReport cmd_fsat(const RunConfig& cfg, const std::filesystem::path& dir);
CommandReport cmd_saturate(const RunConfig& cfg, const std::filesystem::path& dir);
CommandReport cmd_verify(const RunConfig& cfg, const std::filesystem::path& dir);

/// Dispatches by command name; throws ConfigError for an unknown name.
CommandReport run_command(const std::string& name, const RunConfig& cfg, const std::filesystem::path& dir);

/// Names accepted by run_command, in display order.
const std::vector<std::string>& command_names();

/// Process exit codes.
enum ExitCode : int { exit_ok = 0, exit_config = 1, exit_numerical = 2, exit_verification = 3 };

/// Loads the config, runs the command and maps errors to exit codes.
/// Messages go to `log`.
int run_cli(const std::string& name, const std::string& config_path, const std::string& out_dir, bool svg,
            std::ostream& log);

}  // namespace wecsat
