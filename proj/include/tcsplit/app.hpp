#pragma once

// Run orchestration behind the command-line tool: simulate, validate, bench.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "tcsplit/bench.hpp"
#include "tcsplit/config.hpp"
#include "tcsplit/observables.hpp"

namespace tcsplit {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitNumerical = 2,
  kExitValidation = 3,
};

inline constexpr const char* kTrajectoryColumns =
    "t,lambda_minus,lambda_plus,mean_photon,jz_expect,pre_renorm_norm_drift,top_fock_pop";

struct TrajectoryRecord {
  std::vector<ObservableRow> rows;
};

/// Runs the configured method from |0> (x) |J,-J> and samples observables at
/// t = 0 and every `stride` steps. Warnings go to `log`.
TrajectoryRecord simulate(const RunConfig& config, std::ostream& log);

/// Comment block with the full config, a header row, 17-digit rows.
void write_trajectory_csv(std::ostream& out, const RunConfig& config, const TrajectoryRecord& record);
TrajectoryRecord read_trajectory_csv(std::istream& in);

/// Extracts the config stored in a trajectory file's comment block.
RunConfig config_from_trajectory(std::istream& in);

struct CheckResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string detail;
};

/// Oracle equivalence, convergence order, unitarity, method agreement, the
/// uncertainty bound, and (for Lambda = 0) energy drift. D must be <= 4096.
std::vector<CheckResult> validate(const RunConfig& config, std::ostream& log);

/// Exit-code wrappers used by the CLI; they print to `out`/`err` and never throw.
int run_simulate(const RunConfig& config, std::ostream& out, std::ostream& err);
int run_validate(const RunConfig& config, std::ostream& out, std::ostream& err);
int run_bench(const SweepSpec& spec, const std::filesystem::path& out_dir, std::ostream& out,
              std::ostream& err);

}  // namespace tcsplit
