#pragma once

// Shared domain types for confined wave propagation: physical constants,
// absorber description, uniform grids, sampled wave fields and survival curves.

#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "qabsorb/errors.hpp"

namespace qabsorb {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

struct PhysicalParams {
    double hbar = 1.0;
    double mass = 1.0;

    void validate() const;
};

/// Continuum prefactor multiplying lambda * |dK/dx|^2 in the survival exponent.
///  - Continuum:   hbar / (pi m); reproduces the closed-form box decay laws.
///  - StepProduct: hbar / (2 pi m); the literal limit of the per-step product.
enum class PrefactorConvention { Continuum, StepProduct };

/// Returns hbar/(pi m) or hbar/(2 pi m) according to the convention.
double absorption_prefactor(PrefactorConvention convention, const PhysicalParams& params);

/// Characteristic absorption lengths of the left and right walls. Zero means
/// the wall reflects perfectly.
struct AbsorberSpec {
    double lambda_left = 0.0;
    double lambda_right = 0.0;
    PrefactorConvention prefactor = PrefactorConvention::Continuum;

    void validate() const;
};

enum class Wall { Left, Right };

struct Domain {
    double left = 0.0;
    double right = 1.0;

    Domain() = default;
    Domain(double l, double r);

    double width() const { return right - left; }
    bool finite() const;
    bool operator==(const Domain& other) const = default;
    static constexpr double unbounded = std::numeric_limits<double>::infinity();
};

class SpatialGrid {
public:
    static constexpr std::size_t min_points = 8;

    SpatialGrid(Domain domain, std::size_t n_points);

    const Domain& domain() const { return domain_; }
    std::size_t size() const { return n_; }
    double spacing() const { return h_; }
    double node(std::size_t i) const;
    std::vector<double> nodes() const;

    bool operator==(const SpatialGrid& other) const = default;

private:
    Domain domain_;
    std::size_t n_;
    double h_;
};

SpatialGrid make_grid(Domain domain, std::size_t n_points);

struct WaveField {
    SpatialGrid grid;
    std::vector<cplx> values;
    double time = 0.0;

    WaveField(SpatialGrid g, std::vector<cplx> v, double t = 0.0);

    /// Samples `f` at every node.
    template <class F>
    static WaveField sample(const SpatialGrid& g, F&& f, double t = 0.0) {
        std::vector<cplx> v(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) v[i] = cplx(f(g.node(i)));
        return WaveField(g, std::move(v), t);
    }

    double max_abs() const;
    bool all_finite() const;
};

/// Relative tolerance on endpoint values of a Dirichlet-confined field.
inline constexpr double kDirichletTolerance = 1e-12;

/// True when both endpoint magnitudes are within kDirichletTolerance * max|K|.
bool is_dirichlet(const WaveField& field);

/// Trapezoid approximation of the integral of |K|^2 over the grid.
double l2_norm_sq(const WaveField& field);

/// Squared L2 distance between two fields on the same grid (trapezoid rule).
double l2_distance_sq(const WaveField& a, const WaveField& b);

/// Fourth-order one-sided estimate of dK/dx at a wall, using K(wall) = 0.
/// Throws ContractViolation if the endpoint value is not zero.
cplx boundary_derivative(const WaveField& field, Wall side);

/// Trapezoid integral of sampled values over strictly ascending times.
double integrate_time_series(std::span<const double> times, std::span<const double> values);

/// Survival probability 1 - P(t) sampled in time, with the per-step absorbed
/// fractions P_j. step_absorption[j] is the fraction removed between
/// times[j] and times[j+1].
class SurvivalCurve {
public:
    SurvivalCurve() = default;
    SurvivalCurve(std::vector<double> times, std::vector<double> survival,
                  std::vector<double> step_absorption);

    /// Builds the curve from survival values alone; P_j = 1 - S_{j+1}/S_j.
    static SurvivalCurve from_survival(std::vector<double> times, std::vector<double> survival);

    const std::vector<double>& times() const { return times_; }
    const std::vector<double>& survival() const { return survival_; }
    const std::vector<double>& step_absorption() const { return step_absorption_; }
    std::size_t size() const { return times_.size(); }

    /// Linear interpolation of the survival value; t must lie in range.
    double at(double t) const;

private:
    std::vector<double> times_;
    std::vector<double> survival_;
    std::vector<double> step_absorption_;
};

}  // namespace qabsorb
