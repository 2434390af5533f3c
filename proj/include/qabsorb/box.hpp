#pragma once

// Exact eigenseries of a free particle between two walls at x = -a and x = +a,
// and the closed-form survival laws obtained by integrating the squared wall
// slope of that series in time.

#include <cstddef>
#include <vector>

#include "qabsorb/core.hpp"

namespace qabsorb {

/// Mode family used to expand states in the box [-a, a].
///  - Harmonic: sin(n pi x / a), E_n = hbar^2 n^2 pi^2 / (2 m a^2). These are
///    the odd-parity modes of the width-2a well (every second level).
///  - FullWell: sin(n pi (x + a) / 2a), E_n = hbar^2 n^2 pi^2 / (8 m a^2); the
///    complete spectrum of the width-2a well.
/// Both families are normalized to unit L2 norm on [-a, a].
enum class ModeConvention { Harmonic, FullWell };

struct BoxSpec {
    double half_width = 1.0;
    ModeConvention modes = ModeConvention::Harmonic;

    void validate() const;
    Domain domain() const { return {-half_width, half_width}; }
};

/// Coefficients A_n (n = 1..N, stored at index n-1) of a normalized state.
class EigenExpansion {
public:
    static constexpr double kNormTolerance = 1e-10;

    EigenExpansion(BoxSpec box, std::vector<cplx> coefficients);

    /// Rescales the given coefficients to unit norm before constructing.
    static EigenExpansion normalized(BoxSpec box, std::vector<cplx> coefficients);

    const BoxSpec& box() const { return box_; }
    const std::vector<cplx>& coefficients() const { return coefficients_; }
    std::size_t max_mode() const { return coefficients_.size(); }
    cplx coefficient(std::size_t n) const { return coefficients_.at(n - 1); }

private:
    BoxSpec box_;
    std::vector<cplx> coefficients_;
};

double mode_wavenumber(std::size_t n, const BoxSpec& box);
double mode_energy(std::size_t n, const BoxSpec& box, const PhysicalParams& params);

/// Normalized eigenfunction value; requires n >= 1 and |x| <= a.
double eigenmode(std::size_t n, double x, const BoxSpec& box);

/// d/dx of the normalized eigenfunction evaluated at the given wall.
double mode_wall_slope(std::size_t n, Wall side, const BoxSpec& box);

/// K(x, t) = sum_n A_n exp(-i E_n t / hbar) phi_n(x).
cplx box_kernel(const EigenExpansion& state, double x, double t, const PhysicalParams& params);

/// box_kernel sampled on a grid spanning [-a, a]; endpoint values are set to 0 exactly.
WaveField sample_box_kernel(const EigenExpansion& state, const SpatialGrid& grid, double t,
                            const PhysicalParams& params);

/// Exact dK/dx at a wall.
cplx box_wall_slope(const EigenExpansion& state, Wall side, double t, const PhysicalParams& params);

/// int_0^t |dK/dx(wall, s)|^2 ds in closed form. Cross terms are summed over
/// conjugate (k, n) pairs so the result is real by construction.
double flux_integral_closed(const EigenExpansion& state, double t, const PhysicalParams& params,
                            Wall side = Wall::Right);

/// exp(-c [lambda_left F_left(t) + lambda_right F_right(t)]) with c from the
/// absorber's prefactor convention.
double survival_box(const EigenExpansion& state, const AbsorberSpec& absorber, double t,
                    const PhysicalParams& params);

/// Two-level decay law in its commonly quoted form
///   exp{-c (lambda_left + lambda_right) [(pi^2/a^2)(A_k^2 k^2 + A_n^2 n^2) t
///        - 4 m A_k A_n / (hbar (k^2 - n^2)) sin(hbar (k^2 - n^2) pi^2 t / (2 m a^2))]}.
/// The oscillatory amplitude here is smaller than the eigenseries value by the
/// factor -k n (-1)^{k+n} (2 for k = 2, n = 1); see survival_two_level_series.
double survival_two_level(std::size_t k, std::size_t n, double a_k, double a_n, const AbsorberSpec& absorber,
                          double t, const PhysicalParams& params, const BoxSpec& box = {});

/// Two-level decay law obtained from the normalized eigenseries (agrees with
/// survival_box on the same two-mode state). Works for either mode convention.
double survival_two_level_series(std::size_t k, std::size_t n, double a_k, double a_n,
                                 const AbsorberSpec& absorber, double t, const PhysicalParams& params,
                                 const BoxSpec& box = {});

/// exp{-(5/2) tau + (2 / 3 pi) sin(3 pi tau / 2)}: the k = 2, n = 1,
/// A_1 = A_2 = sqrt(1/2) instance of survival_two_level in dimensionless time.
double survival_dimensionless(double tau);

/// tau = lambda hbar pi t / (m a^2).
double dimensionless_time(double t, double lambda, const BoxSpec& box, const PhysicalParams& params);

/// |E_k - E_n| / hbar; for Harmonic modes hbar |k^2 - n^2| pi^2 / (2 m a^2).
double beat_frequency(std::size_t k, std::size_t n, const BoxSpec& box, const PhysicalParams& params);

}  // namespace qabsorb
