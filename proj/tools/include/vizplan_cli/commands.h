#ifndef VIZPLAN_CLI_COMMANDS_H_
#define VIZPLAN_CLI_COMMANDS_H_

#include <filesystem>
#include <ostream>

#include "vizplan/errors.h"
#include "vizplan_cli/config.h"

namespace vizplan::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitBadConfig = 2;
inline constexpr int kExitNoPath = 3;

// Thrown by a command when the scenario lacks something it needs (for
// example plan without start/goal). Reported like a config violation.
class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error("config", what) {}
};

struct CommandOptions {
  int threads = 1;  // worker cap; artifacts do not depend on it
  std::filesystem::path output_dir;  // overrides the scenario's when set
};

// Each command writes its artifacts under the output directory, prints a
// one-line JSON summary to `out` and returns an exit status. Library errors
// propagate as vizplan::Error.
int run_sample(const ScenarioConfig& config, const CommandOptions& options, std::ostream& out);
int run_build(const ScenarioConfig& config, const CommandOptions& options, std::ostream& out);
int run_plan(const ScenarioConfig& config, const CommandOptions& options, std::ostream& out);
int run_eval(const ScenarioConfig& config, const CommandOptions& options, std::ostream& out);
int run_embed(const ScenarioConfig& config, const CommandOptions& options, std::ostream& out);
int run_dynamic(const ScenarioConfig& config, const CommandOptions& options, std::ostream& out);

// Full front end: `vizplan <command> CONFIG [--threads N] [--output-dir DIR]`.
// Errors go to `err` as one JSON object per line.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace vizplan::cli

#endif  // VIZPLAN_CLI_COMMANDS_H_
