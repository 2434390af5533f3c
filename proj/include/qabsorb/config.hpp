#pragma once

// Scenario configuration: a flat key-value document split into sections.
//
//   # comment
//   [physical]
//   hbar = 1
//   [numeric]
//   dt = 4e-5
//
// Unknown sections or keys and repeated keys are rejected. Values missing from
// the document take the scenario defaults, which are echoed in the run summary.

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "qabsorb/box.hpp"
#include "qabsorb/core.hpp"
#include "qabsorb/packet.hpp"
#include "qabsorb/steppers.hpp"

namespace qabsorb {

enum class Scenario { BoxDecay, TwoLevel, PacketReflect, CavityCombined, Convergence };

/// CLI spelling: box-decay, two-level, packet-reflect, cavity, convergence.
std::string_view to_string(Scenario scenario);
Scenario parse_scenario(std::string_view name);

std::string_view to_string(ModeConvention modes);
std::string_view to_string(PrefactorConvention prefactor);
std::string_view to_string(LaplacianScheme scheme);
StepperKind parse_stepper(std::string_view name);

struct NumericSettings {
    std::size_t grid_points = 513;
    double dt = 1e-4;
    double t_max = 1.0;
    std::size_t samples = 101;  ///< rows in each emitted curve
    StepperKind stepper = StepperKind::SpectralSine;
    LaplacianScheme cn_scheme = LaplacianScheme::Second;
    std::size_t halvings = 3;   ///< convergence study refinements
    double tail_tol = 1e-3;     ///< packet tail bound on |ln R|
};

struct OutputSettings {
    std::filesystem::path directory = ".";
    std::string prefix;  ///< file name stem; the scenario name when empty
};

struct ScenarioConfig {
    Scenario scenario = Scenario::BoxDecay;
    PhysicalParams physical{};
    AbsorberSpec absorber{};
    BoxSpec box{};
    std::vector<double> coefficients{1.0};  ///< A_1..A_N, rescaled to unit norm
    GaussianPacketSpec packet{};
    NumericSettings numeric{};
    OutputSettings output{};

    EigenExpansion expansion() const;
    std::string stem() const;
};

/// Fully resolved defaults for a scenario.
ScenarioConfig default_config(Scenario scenario);

/// Parses `text`, applies `overrides` ("section.key=value", later wins over the
/// document), fills defaults and validates. Throws ConfigError listing every
/// problem found.
ScenarioConfig validate_config(std::string_view text, Scenario scenario,
                               const std::vector<std::string>& overrides = {});

/// Reads the file and calls validate_config; an unreadable file is a ConfigError.
ScenarioConfig load_config(const std::filesystem::path& path, Scenario scenario,
                           const std::vector<std::string>& overrides = {});

}  // namespace qabsorb
