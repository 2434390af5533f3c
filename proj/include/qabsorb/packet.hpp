#pragma once

// Free Gaussian packet on the half-line x <= 0 with a single wall at x = 0.
// The Dirichlet condition is met by the method of images: the packet is the
// difference of a Gaussian centred at x0 < 0 moving right and its mirror
// image centred at -x0 moving left. Both halves evolve in closed form under
// the free propagator.

#include <cstddef>

#include "qabsorb/core.hpp"

namespace qabsorb {

struct GaussianPacketSpec {
    double width = 1.0;        ///< a in exp(-(x - x0)^2 / a^2)
    double center = -10.0;     ///< x0 < 0
    double wavenumber = 5.0;   ///< k0 > 0, toward the wall
    double lambda_wall = 1.0;  ///< absorption length of the wall at x = 0

    void validate() const;
};

class GaussianPacket {
public:
    GaussianPacket(GaussianPacketSpec spec, PhysicalParams params = {});

    const GaussianPacketSpec& spec() const { return spec_; }
    const PhysicalParams& params() const { return params_; }

    /// Normalization constant N, fixed numerically so the half-line norm is 1.
    double norm_constant() const { return norm_; }

    /// N [g(x) - g(-x)], g(x) = exp(-(x - x0)^2 / a^2 + i k0 x). Requires x <= 0.
    cplx initial(double x) const { return kernel(x, 0.0); }

    /// Image-pair closed form at time t >= 0; exactly zero at x = 0.
    cplx kernel(double x, double t) const;

    /// dK/dx at the wall, differentiated analytically.
    cplx wall_slope(double t) const;

    /// |dK/dx(0, t)|^2.
    double wall_flux(double t) const { return std::norm(wall_slope(t)); }

    /// The wall-flux expression as commonly printed (hbar = 1 units),
    ///   (a / 16 pi^2) (a^4 k0^2 / 16 + x0^2) / (a^4/16 + t^2/4m^2)^{3/2}
    ///   * exp{[(a^2/4)(a^2 k0^2 / 2 + x0^2) - (a^2 / 4m) x0 k0 t] / (a^4/16 + t^2/4m^2) - a^2 k0^2 / 2},
    /// kept only as a comparator for wall_flux.
    double wall_flux_printed(double t) const;

    /// Time at which the packet centre reaches the wall, m |x0| / (hbar k0).
    double arrival_time() const;

    /// Domain length needed to hold the packet and its reflection up to t_max:
    /// |x0| + 10 a + 4 (hbar k0 / m) t_max.
    double truncation_length(double t_max) const;

    /// Samples the kernel on a grid over [-L, 0]. Throws ContractViolation if
    /// the far end is not negligible (domain too short).
    WaveField sample(const SpatialGrid& grid, double t) const;

private:
    GaussianPacketSpec spec_;
    PhysicalParams params_;
    double norm_ = 1.0;
};

struct ReflectionReport {
    double reflection = 1.0;     ///< R, including the estimated tail
    double exponent = 0.0;       ///< -ln R
    double flux_integral = 0.0;  ///< int_0^t_max wall_flux dt
    double tail_estimate = 0.0;  ///< estimate of int_t_max^inf wall_flux dt
    double tail_bound = 0.0;     ///< bound on |ln R_true - ln R| from the tail
    double t_max = 0.0;
    std::size_t samples = 0;     ///< flux evaluations used by the quadrature
};

/// int_0^t_max wall_flux dt by adaptive Gauss-Kronrod quadrature, split at the
/// arrival time; the 31 and 61 point rules must agree to 1e-10.
/// `samples` receives the number of flux evaluations.
double packet_flux_integral(const GaussianPacket& packet, double t_max, std::size_t* samples = nullptr);

/// R = lim 1 - P(t) = exp(-c lambda int_0^inf wall_flux dt). The tail beyond
/// t_max is bracketed analytically; throws ConvergenceError when the bracket
/// half-width exceeds tail_tol.
ReflectionReport reflection_coefficient(const GaussianPacket& packet, double t_max, double tail_tol,
                                        PrefactorConvention convention = PrefactorConvention::Continuum);

}  // namespace qabsorb
