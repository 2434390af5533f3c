#pragma once

// Discounted propagation: the confined kernel K is advanced by a stepper and,
// after every step, the fraction of trajectories absorbed at the walls during
// that step is removed from the surviving population. K itself is never
// damped; the physical state is Psi = sqrt(survival) K.

#include <cstddef>
#include <optional>
#include <vector>

#include "qabsorb/core.hpp"
#include "qabsorb/steppers.hpp"

namespace qabsorb {

struct StepAbsorption {
    double probability = 0.0;  ///< P_j after clamping to [0, 1)
    double unclamped = 0.0;
    /// The discount model assumes small per-step absorption.
    bool too_coarse() const { return unclamped >= 0.1; }
};

/// P_j = c dt [lambda_left |dK/dx(left)|^2 + lambda_right |dK/dx(right)|^2],
/// with c = hbar/(2 pi m) per step for StepProduct and twice that for
/// Continuum, so that prod(1 - P_j) tends to exp(-hbar/(pi m) int ...) in the
/// Continuum convention.
StepAbsorption absorb_probability(const WaveField& field, double dt, const AbsorberSpec& absorber,
                                  const PhysicalParams& params);

struct PropagationConfig {
    double dt = 1e-3;
    std::size_t n_steps = 0;
    StepperKind stepper = StepperKind::SpectralSine;
    StepperOptions stepper_options{};
    SpatialGrid grid{Domain{-1.0, 1.0}, 513};
    std::optional<Potential> potential;  ///< V = 0 when empty
    AbsorberSpec absorber{};
    PhysicalParams params{};
    /// Record every `history_stride`-th field (0 disables history).
    std::size_t history_stride = 0;

    double total_time() const { return dt * static_cast<double>(n_steps); }
};

struct DiscountedField {
    WaveField kernel;
    double survival = 1.0;

    /// Psi = sqrt(survival) K.
    WaveField psi() const;
};

struct PropagationResult {
    SurvivalCurve curve;
    DiscountedField final_state;
    std::vector<WaveField> history;
    /// |dK/dx|^2 at each wall after every step (aligned with curve.times()[1..]).
    std::vector<double> flux_left;
    std::vector<double> flux_right;
    bool truncated = false;           ///< stopped early on survival underflow
    std::size_t coarse_steps = 0;     ///< steps whose P_j exceeded 0.1
};

/// Survival below this value ends the run early.
inline constexpr double kSurvivalFloor = 1e-300;

PropagationResult propagate_with_absorption(const WaveField& initial, const PropagationConfig& config);

/// Pointwise product of two decay laws. The axial curve is resampled onto the
/// transverse time nodes by linear interpolation when the grids differ; the
/// result covers the overlap of both ranges and is conditioned on survival to
/// the start of that overlap.
SurvivalCurve combined_cavity_decay(const SurvivalCurve& transverse, const SurvivalCurve& axial);

}  // namespace qabsorb
