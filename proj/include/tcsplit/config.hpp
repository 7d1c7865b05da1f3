#pragma once

// Flat key=value run configuration. User-facing frequencies are ordinary
// frequencies in GHz; they are converted to rad/ns (x 2 pi) on parse.

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "tcsplit/basis.hpp"
#include "tcsplit/observables.hpp"

namespace tcsplit {

enum class RunMethod { Exp, Linear, Dense, Hp };

std::string_view to_string(RunMethod method);

struct RunConfig {
  // As written by the user, kept for the reproducibility header.
  double omega_c_ghz = 0.0;
  double omega_s_ghz = 0.0;
  double g_ghz = 0.0;
  double lambda_ghz = 0.0;
  double omega_drive_ghz = 0.0;

  ModelParams params;  // rad/ns
  double dt = 0.0;     // ns
  std::size_t n_steps = 0;
  RunMethod method = RunMethod::Linear;
  std::string out;
  std::size_t stride = 1;
  double truncation_warning = kTruncationWarning;

  std::vector<std::string> notes;  // informational, e.g. resonant drive
};

/// Throws ConfigError naming the offending line, or listing every missing key.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// key=value lines that parse_config maps back to an identical RunConfig.
std::string format_config(const RunConfig& config);

/// omega_c + omega_s == omega_drive to within 1e-9 relative.
bool is_resonant(const ModelParams& params);

}  // namespace tcsplit
