#pragma once

// One-step propagators for i hbar dK/dt = -(hbar^2 / 2m) d2K/dx2 + V K on a
// bounded interval with K = 0 at both ends.
//
//  SpectralSine   exact for V = 0: sine-series phase rotation.
//  CrankNicolson  Cayley form of the kinetic operator, potential applied as
//                 exact half-step phases on either side.
//  FeynmanKernel  one factor of the discretized path integral: the short-time
//                 kernel integrated over [a, b] against the piecewise-linear
//                 interpolant of the current field, in closed form via
//                 Fresnel integrals.

#include <cstddef>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "qabsorb/core.hpp"
#include "qabsorb/sine_transform.hpp"

namespace qabsorb {

class Potential {
public:
    /// V = 0 on a grid of n nodes.
    static Potential zero(std::size_t n);
    static Potential from_values(std::vector<double> values);

    template <class F>
    static Potential sample(const SpatialGrid& grid, F&& f) {
        std::vector<double> v(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) v[i] = f(grid.node(i));
        return from_values(std::move(v));
    }

    bool is_zero() const { return zero_; }
    std::size_t size() const { return values_.size(); }
    std::span<const double> values() const { return values_; }

private:
    std::vector<double> values_;
    bool zero_ = true;
};

enum class StepperKind { SpectralSine, CrankNicolson, FeynmanKernel };

std::string_view to_string(StepperKind kind);

/// Spatial operator used by Crank-Nicolson.
///  Second:   standard three-point second difference.
///  Compact4: fourth-order compact (Numerov) operator B^{-1} D2 with
///            B = tridiag(1, 10, 1) / 12; still one tridiagonal solve per step.
enum class LaplacianScheme { Second, Compact4 };

struct StepperOptions {
    LaplacianScheme cn_scheme = LaplacianScheme::Second;
};

class Stepper {
public:
    virtual ~Stepper() = default;

    /// Advances a Dirichlet-confined field by dt(). The result has exactly
    /// zero endpoints and time advanced by dt().
    virtual WaveField step(const WaveField& field) = 0;

    virtual StepperKind kind() const = 0;
    double dt() const { return dt_; }
    const SpatialGrid& grid() const { return grid_; }

protected:
    Stepper(const SpatialGrid& grid, double dt);
    void check_input(const WaveField& field) const;

    SpatialGrid grid_;
    double dt_;
};

class SpectralSineStepper final : public Stepper {
public:
    SpectralSineStepper(const SpatialGrid& grid, double dt, const PhysicalParams& params);

    WaveField step(const WaveField& field) override;
    StepperKind kind() const override { return StepperKind::SpectralSine; }

private:
    SineTransform transform_;
    std::vector<cplx> phases_;  // exp(-i E_k dt / hbar) / (2 (M + 1))
    std::vector<cplx> work_;
};

class CrankNicolsonStepper final : public Stepper {
public:
    CrankNicolsonStepper(const SpatialGrid& grid, double dt, const Potential& potential,
                         const PhysicalParams& params, LaplacianScheme scheme = LaplacianScheme::Second);

    WaveField step(const WaveField& field) override;
    StepperKind kind() const override { return StepperKind::CrankNicolson; }

private:
    cplx lhs_diag_, lhs_off_, rhs_diag_, rhs_off_;
    std::vector<cplx> half_phase_;  // exp(-i V dt / 2 hbar); empty when V = 0
    std::vector<cplx> sweep_;       // Thomas coefficients c'_i
    std::vector<cplx> inv_pivot_;
    std::vector<cplx> rhs_;
    std::vector<cplx> correction_;

    void solve(std::vector<cplx>& x) const;
};

class FeynmanKernelStepper final : public Stepper {
public:
    FeynmanKernelStepper(const SpatialGrid& grid, double dt, const Potential& potential,
                         const PhysicalParams& params);

    WaveField step(const WaveField& field) override;
    StepperKind kind() const override { return StepperKind::FeynmanKernel; }

    /// Smallest dt for which the Fresnel length sqrt(2 pi hbar dt / m)
    /// exceeds two grid spacings.
    static double min_dt(const SpatialGrid& grid, const PhysicalParams& params);

    /// Weight multiplying K_j in the update of K_i, j - i = offset.
    cplx weight(std::ptrdiff_t offset) const;

private:
    std::size_t interior_;
    std::vector<cplx> weights_;  // index offset + (interior_ - 1)
    std::vector<cplx> potential_phase_;
    FourierTransform fft_;
    std::vector<cplx> kernel_spectrum_;
    std::vector<cplx> work_;
};

std::unique_ptr<Stepper> make_stepper(StepperKind kind, const SpatialGrid& grid, double dt,
                                      const Potential& potential, const PhysicalParams& params,
                                      const StepperOptions& options = {});

// Single-step conveniences; each builds a stepper for one use.
WaveField step_spectral_sine(const WaveField& field, double dt, const PhysicalParams& params);
WaveField step_crank_nicolson(const WaveField& field, double dt, const Potential& potential,
                              const PhysicalParams& params, LaplacianScheme scheme = LaplacianScheme::Second);
WaveField step_feynman_kernel(const WaveField& field, double dt, const Potential& potential,
                              const PhysicalParams& params);

}  // namespace qabsorb
