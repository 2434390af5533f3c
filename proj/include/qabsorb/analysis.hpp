#pragma once

// Post-processing of survival curves.

#include <span>
#include <vector>

#include "qabsorb/core.hpp"

namespace qabsorb {

/// y(t) ~ offset + amplitude cos(omega t + phase).
struct SinusoidFit {
    double omega = 0.0;
    double amplitude = 0.0;
    double phase = 0.0;
    double offset = 0.0;
    double rms_residual = 0.0;
};

/// Least-squares fit of a single sinusoid with free offset. The frequency is
/// located by a scan over [omega_lo, omega_hi] and polished by Brent's method;
/// amplitude, phase and offset are linear at fixed frequency.
SinusoidFit fit_sinusoid(std::span<const double> times, std::span<const double> values, double omega_lo,
                         double omega_hi);

/// Per-step decay rate -ln(1 - P_j) / dt_j, placed at step midpoints.
struct RateSeries {
    std::vector<double> times;
    std::vector<double> rates;
};
RateSeries decay_rate_series(const SurvivalCurve& curve);

/// -ln(S(t)) / t at every node after the first.
RateSeries mean_decay_rate(const SurvivalCurve& curve);

}  // namespace qabsorb
