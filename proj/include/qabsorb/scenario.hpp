#pragma once

// Named scenarios: each run writes CSV curves and a JSON summary into the
// configured output directory. Files are written to a temporary name and
// renamed into place.

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "qabsorb/config.hpp"

namespace qabsorb {

inline constexpr std::string_view kVersion = "qabsorb 1.0.0";

/// A measured deviation and the tolerance it is judged against.
struct Deviation {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;

    bool within() const { return value <= tolerance; }
};

struct RunSummary {
    ScenarioConfig config;
    std::map<std::string, double> headline;
    std::vector<Deviation> deviations;
    std::vector<std::filesystem::path> artifacts;
    double wall_seconds = 0.0;
    std::string version{kVersion};

    /// Pretty-printed JSON document.
    std::string to_json() const;
};

/// Runs the configured scenario and writes its artifacts.
///  box-decay      <stem>.csv  t, closed form, numerical survival, relative difference
///  two-level      <stem>.csv  as above plus tau and the quoted two-level law
///  packet-reflect <stem>.csv  wall flux and cumulative absorption, closed and numerical
///  cavity         <stem>.csv  transverse, axial and combined survival
///  convergence    <stem>_dt.csv, <stem>_spacing.csv  L2 error per stepper
/// plus <stem>_summary.json. Throws ConfigError when the output directory is
/// not writable.
RunSummary run_scenario(const ScenarioConfig& config);

/// Runs independent scenarios concurrently, one worker each. Results keep the
/// input order; the first failure is rethrown after all workers finish.
std::vector<RunSummary> run_batch(const std::vector<ScenarioConfig>& configs);

/// Decimal text with 17 significant digits (%.17g style), independent of locale.
std::string format_number(double value);

/// Writes `content` to a sibling temporary file, then renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace qabsorb
