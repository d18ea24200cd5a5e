#pragma once

// Scenario files drive every library operation from JSON and produce
// versioned, deterministic JSON reports plus CSV plot data.

#include <filesystem>
#include <optional>
#include <string>

#include "umorse/serialize.hpp"

namespace umorse::cli {

inline constexpr int kSchemaVersion = 1;
inline constexpr int kDefaultCurveSamples = 256;

enum ExitCode : int { kOk = 0, kValidation = 2, kNumerical = 3 };

/// Command-line values; each one that is set replaces the scenario's value.
struct Overrides {
  std::optional<double> tol;
  std::optional<int> samples;
  std::optional<double> step;
  std::optional<int> max_iters;
  std::optional<double> perturb_eps;
  std::optional<long long> seed;
  int jobs = 1;
  bool timing = false;
};

struct RunResult {
  int exit_code = kOk;
  Json report;
  /// Human-readable diagnostic for failures (field path and, when known, line).
  std::string diagnostic;
};

/// Library defaults for every tunable, as recorded in report headers.
Json defaults();

std::string version();

/// Scenario with overrides folded in, as hashed into the report digest.
Json effective_scenario(Json scenario, const Overrides& o);

std::string digest(const Json& scenario);

RunResult run_scenario(const Json& scenario, const Overrides& o = {},
                       const std::filesystem::path& base_dir = {});
RunResult run_scenario_text(const std::string& text, const Overrides& o = {},
                            const std::filesystem::path& base_dir = {});
RunResult run_scenario_file(const std::filesystem::path& path, const Overrides& o = {});

/// Canonical report text (sorted keys, two-space indent, trailing newline).
std::string dump(const Json& report);

enum class PlotKind { trace, profile, curve };
PlotKind plot_kind(const std::string& name);

/// RFC 4180 CSV for the requested series; ValidationError when the report lacks it.
std::string plot_csv(const Json& report, PlotKind kind);

/// One JSON object per line: profile samples or trace iterations.
std::string json_lines(const Json& report);

}  // namespace umorse::cli
