#include "qabsorb/steppers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qabsorb/fresnel.hpp"

namespace qabsorb {

Potential Potential::zero(std::size_t n) {
    Potential p;
    p.values_.assign(n, 0.0);
    p.zero_ = true;
    return p;
}

Potential Potential::from_values(std::vector<double> values) {
    Potential p;
    for (double v : values)
        if (!std::isfinite(v)) throw ArgumentError("potential must be finite at every node");
    p.zero_ = std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; });
    p.values_ = std::move(values);
    return p;
}

std::string_view to_string(StepperKind kind) {
    switch (kind) {
        case StepperKind::SpectralSine: return "spectral";
        case StepperKind::CrankNicolson: return "cn";
        case StepperKind::FeynmanKernel: return "feynman";
    }
    return "unknown";
}

Stepper::Stepper(const SpatialGrid& grid, double dt) : grid_(grid), dt_(dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ArgumentError("time step must be positive");
}

void Stepper::check_input(const WaveField& field) const {
    if (!(field.grid == grid_)) throw ArgumentError("field grid does not match the stepper grid");
    if (!is_dirichlet(field)) throw ContractViolation("stepper input is not Dirichlet-confined");
}

// ---------------------------------------------------------------------------

SpectralSineStepper::SpectralSineStepper(const SpatialGrid& grid, double dt, const PhysicalParams& params)
    : Stepper(grid, dt), transform_(grid.size() - 2), phases_(grid.size() - 2), work_(grid.size() - 2) {
    params.validate();
    const std::size_t m = grid.size() - 2;
    const double width = grid.domain().width();
    const double scale = 1.0 / (2.0 * static_cast<double>(m + 1));
    for (std::size_t k = 0; k < m; ++k) {
        const double wave = static_cast<double>(k + 1) * kPi / width;
        const double energy = params.hbar * params.hbar * wave * wave / (2.0 * params.mass);
        phases_[k] = scale * std::polar(1.0, -energy * dt / params.hbar);
    }
}

WaveField SpectralSineStepper::step(const WaveField& field) {
    check_input(field);
    const std::size_t m = work_.size();
    std::copy(field.values.begin() + 1, field.values.end() - 1, work_.begin());
    transform_.apply(work_);
    for (std::size_t k = 0; k < m; ++k) work_[k] *= phases_[k];
    transform_.apply(work_);

    std::vector<cplx> out(field.values.size());
    std::copy(work_.begin(), work_.end(), out.begin() + 1);
    return WaveField(grid_, std::move(out), field.time + dt_);
}

// ---------------------------------------------------------------------------

CrankNicolsonStepper::CrankNicolsonStepper(const SpatialGrid& grid, double dt, const Potential& potential,
                                           const PhysicalParams& params, LaplacianScheme scheme)
    : Stepper(grid, dt) {
    params.validate();
    if (potential.size() != grid.size()) throw ArgumentError("potential size does not match grid");
    const std::size_t m = grid.size() - 2;
    const double h = grid.spacing();
    // (i dt / 2 hbar) * (-(hbar^2 / 2m) / h^2) = -i sigma
    const double sigma = params.hbar * dt / (4.0 * params.mass * h * h);
    const cplx is(0.0, sigma);

    double mass_diag = 1.0, mass_off = 0.0;
    if (scheme == LaplacianScheme::Compact4) {
        mass_diag = 10.0 / 12.0;
        mass_off = 1.0 / 12.0;
    }
    lhs_diag_ = mass_diag + 2.0 * is;
    lhs_off_ = mass_off - is;
    rhs_diag_ = mass_diag - 2.0 * is;
    rhs_off_ = mass_off + is;

    // Constant-coefficient Thomas factorization, computed once.
    sweep_.resize(m);
    inv_pivot_.resize(m);
    cplx prev{0.0, 0.0};
    for (std::size_t i = 0; i < m; ++i) {
        const cplx pivot = lhs_diag_ - lhs_off_ * prev;
        if (std::abs(pivot) < 1e-300) throw NumericError("Crank-Nicolson system is singular");
        inv_pivot_[i] = 1.0 / pivot;
        sweep_[i] = lhs_off_ * inv_pivot_[i];
        prev = sweep_[i];
    }
    rhs_.resize(m);
    correction_.resize(m);

    if (!potential.is_zero()) {
        half_phase_.resize(m);
        for (std::size_t i = 0; i < m; ++i)
            half_phase_[i] = std::polar(1.0, -potential.values()[i + 1] * dt / (2.0 * params.hbar));
    }
}

void CrankNicolsonStepper::solve(std::vector<cplx>& x) const {
    const std::size_t m = x.size();
    x[0] *= inv_pivot_[0];
    for (std::size_t i = 1; i < m; ++i) x[i] = (x[i] - lhs_off_ * x[i - 1]) * inv_pivot_[i];
    for (std::size_t i = m - 1; i-- > 0;) x[i] -= sweep_[i] * x[i + 1];
}

WaveField CrankNicolsonStepper::step(const WaveField& field) {
    check_input(field);
    const std::size_t m = rhs_.size();
    std::vector<cplx> in(field.values.begin() + 1, field.values.end() - 1);
    if (!half_phase_.empty())
        for (std::size_t i = 0; i < m; ++i) in[i] *= half_phase_[i];

    for (std::size_t i = 0; i < m; ++i) {
        cplx r = rhs_diag_ * in[i];
        if (i > 0) r += rhs_off_ * in[i - 1];
        if (i + 1 < m) r += rhs_off_ * in[i + 1];
        rhs_[i] = r;
    }
    const std::vector<cplx> b = rhs_;
    solve(rhs_);

    // One pass of iterative refinement. The rounded factorization is the same
    // every step, so without it the norm drifts linearly in the step count.
    for (std::size_t i = 0; i < m; ++i) {
        cplx ax = lhs_diag_ * rhs_[i];
        if (i > 0) ax += lhs_off_ * rhs_[i - 1];
        if (i + 1 < m) ax += lhs_off_ * rhs_[i + 1];
        correction_[i] = b[i] - ax;
    }
    solve(correction_);
    for (std::size_t i = 0; i < m; ++i) rhs_[i] += correction_[i];

    std::vector<cplx> out(field.values.size());
    for (std::size_t i = 0; i < m; ++i) out[i + 1] = half_phase_.empty() ? rhs_[i] : rhs_[i] * half_phase_[i];
    return WaveField(grid_, std::move(out), field.time + dt_);
}

// ---------------------------------------------------------------------------

double FeynmanKernelStepper::min_dt(const SpatialGrid& grid, const PhysicalParams& params) {
    const double h = grid.spacing();
    return 2.0 * h * h * params.mass / (kPi * params.hbar);
}

namespace {
std::size_t fft_length(std::size_t m) {
    std::size_t p = 1;
    while (p < 2 * m) p <<= 1;
    return p;
}
}  // namespace

FeynmanKernelStepper::FeynmanKernelStepper(const SpatialGrid& grid, double dt, const Potential& potential,
                                           const PhysicalParams& params)
    : Stepper(grid, dt), interior_(grid.size() - 2), fft_(fft_length(grid.size() - 2)) {
    params.validate();
    if (potential.size() != grid.size()) throw ArgumentError("potential size does not match grid");
    const double dt_min = min_dt(grid, params);
    if (!(dt > dt_min))
        throw ConfigurationError("Fresnel length does not resolve the grid; dt must exceed " +
                                 std::to_string(dt_min));

    const std::size_t m = interior_;
    const double h = grid.spacing();
    const double beta = params.mass / (2.0 * params.hbar * dt);
    // alpha = (m / 2 pi i hbar dt)^{1/2}
    const cplx alpha = std::sqrt(params.mass / (2.0 * kPi * params.hbar * dt)) * std::polar(1.0, -kPi / 4.0);

    // F(u) = int_0^u exp(i beta v^2) dv, G(u) = exp(i beta u^2) / (2 i beta),
    // tabulated at u = d h for |d| <= m.
    const std::size_t span = 2 * m + 1;
    std::vector<cplx> F(span), G(span);
    for (std::size_t idx = 0; idx < span; ++idx) {
        const double d = static_cast<double>(idx) - static_cast<double>(m);
        const double u = d * h;
        F[idx] = fresnel_phase_integral(beta, u);
        G[idx] = std::polar(1.0, beta * u * u) / cplx(0.0, 2.0 * beta);
    }
    auto Fd = [&](std::ptrdiff_t d) { return F[static_cast<std::size_t>(d + static_cast<std::ptrdiff_t>(m))]; };
    auto Gd = [&](std::ptrdiff_t d) { return G[static_cast<std::size_t>(d + static_cast<std::ptrdiff_t>(m))]; };

    // Hat function centred at offset d: rising on [d-1, d], falling on [d, d+1].
    weights_.resize(2 * m - 1);
    const std::ptrdiff_t reach = static_cast<std::ptrdiff_t>(m) - 1;
    for (std::ptrdiff_t d = -reach; d <= reach; ++d) {
        const double u_lo = static_cast<double>(d - 1) * h;
        const double u_hi = static_cast<double>(d + 1) * h;
        const cplx falling = u_hi * (Fd(d + 1) - Fd(d)) - (Gd(d + 1) - Gd(d));
        const cplx rising = (Gd(d) - Gd(d - 1)) - u_lo * (Fd(d) - Fd(d - 1));
        weights_[static_cast<std::size_t>(d + reach)] = alpha * (falling + rising) / h;
    }

    // y_i = sum_j w_{j-i} K_j is a convolution with c_k = w_{-k}.
    const std::size_t p = fft_.size();
    kernel_spectrum_.assign(p, cplx{});
    for (std::ptrdiff_t k = -reach; k <= reach; ++k) {
        const std::size_t slot = k >= 0 ? static_cast<std::size_t>(k) : p - static_cast<std::size_t>(-k);
        kernel_spectrum_[slot] = weight(-k);
    }
    fft_.forward(kernel_spectrum_);
    for (auto& c : kernel_spectrum_) c /= static_cast<double>(p);

    potential_phase_.resize(m);
    for (std::size_t i = 0; i < m; ++i)
        potential_phase_[i] = std::polar(1.0, -potential.values()[i + 1] * dt / params.hbar);
    work_.resize(p);
}

cplx FeynmanKernelStepper::weight(std::ptrdiff_t offset) const {
    const std::ptrdiff_t reach = static_cast<std::ptrdiff_t>(interior_) - 1;
    if (offset < -reach || offset > reach) throw ArgumentError("kernel weight offset out of range");
    return weights_[static_cast<std::size_t>(offset + reach)];
}

WaveField FeynmanKernelStepper::step(const WaveField& field) {
    check_input(field);
    const std::size_t m = interior_;
    std::fill(work_.begin(), work_.end(), cplx{});
    std::copy(field.values.begin() + 1, field.values.end() - 1, work_.begin());
    fft_.forward(work_);
    for (std::size_t k = 0; k < work_.size(); ++k) work_[k] *= kernel_spectrum_[k];
    fft_.inverse(work_);

    // Endpoints are not evaluated; the wall values stay zero.
    std::vector<cplx> out(field.values.size());
    for (std::size_t i = 0; i < m; ++i) out[i + 1] = work_[i] * potential_phase_[i];
    return WaveField(grid_, std::move(out), field.time + dt_);
}

// ---------------------------------------------------------------------------

std::unique_ptr<Stepper> make_stepper(StepperKind kind, const SpatialGrid& grid, double dt,
                                      const Potential& potential, const PhysicalParams& params,
                                      const StepperOptions& options) {
    switch (kind) {
        case StepperKind::SpectralSine:
            if (!potential.is_zero())
                throw ConfigurationError("spectral sine stepper supports only V = 0");
            return std::make_unique<SpectralSineStepper>(grid, dt, params);
        case StepperKind::CrankNicolson:
            return std::make_unique<CrankNicolsonStepper>(grid, dt, potential, params, options.cn_scheme);
        case StepperKind::FeynmanKernel:
            return std::make_unique<FeynmanKernelStepper>(grid, dt, potential, params);
    }
    throw ArgumentError("unknown stepper kind");
}

WaveField step_spectral_sine(const WaveField& field, double dt, const PhysicalParams& params) {
    return SpectralSineStepper(field.grid, dt, params).step(field);
}

WaveField step_crank_nicolson(const WaveField& field, double dt, const Potential& potential,
                              const PhysicalParams& params, LaplacianScheme scheme) {
    return CrankNicolsonStepper(field.grid, dt, potential, params, scheme).step(field);
}

WaveField step_feynman_kernel(const WaveField& field, double dt, const Potential& potential,
                              const PhysicalParams& params) {
    return FeynmanKernelStepper(field.grid, dt, potential, params).step(field);
}

}  // namespace qabsorb
