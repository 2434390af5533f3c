#include "qabsorb/box.hpp"

#include <cassert>
#include <algorithm>
#include <cmath>

namespace qabsorb {

void BoxSpec::validate() const {
    if (!(half_width > 0.0) || !std::isfinite(half_width)) throw ArgumentError("box half_width must be positive");
}

EigenExpansion::EigenExpansion(BoxSpec box, std::vector<cplx> coefficients)
    : box_(box), coefficients_(std::move(coefficients)) {
    box_.validate();
    if (coefficients_.empty()) throw ArgumentError("eigen expansion is empty");
    double norm = 0.0;
    for (const auto& c : coefficients_) norm += std::norm(c);
    if (std::abs(norm - 1.0) > kNormTolerance)
        throw ArgumentError("eigen expansion is not normalized (sum |A_n|^2 = " + std::to_string(norm) + ")");
}

EigenExpansion EigenExpansion::normalized(BoxSpec box, std::vector<cplx> coefficients) {
    double norm = 0.0;
    for (const auto& c : coefficients) norm += std::norm(c);
    if (!(norm > 0.0)) throw ArgumentError("eigen expansion has no weight");
    const double s = 1.0 / std::sqrt(norm);
    for (auto& c : coefficients) c *= s;
    return EigenExpansion(box, std::move(coefficients));
}

double mode_wavenumber(std::size_t n, const BoxSpec& box) {
    if (n < 1) throw ArgumentError("mode index must be >= 1");
    const double a = box.half_width;
    const double nn = static_cast<double>(n);
    return box.modes == ModeConvention::Harmonic ? nn * kPi / a : nn * kPi / (2.0 * a);
}

double mode_energy(std::size_t n, const BoxSpec& box, const PhysicalParams& params) {
    const double k = mode_wavenumber(n, box);
    return params.hbar * params.hbar * k * k / (2.0 * params.mass);
}

double eigenmode(std::size_t n, double x, const BoxSpec& box) {
    const double a = box.half_width;
    const double k = mode_wavenumber(n, box);
    if (std::abs(x) > a * (1.0 + 1e-14)) throw ArgumentError("eigenmode evaluated outside the box");
    const double norm = 1.0 / std::sqrt(a);
    // Exact zeros at the walls regardless of rounding in sin(n pi).
    if (std::abs(x) >= a) return 0.0;
    const double phase = box.modes == ModeConvention::Harmonic ? k * x : k * (x + a);
    return norm * std::sin(phase);
}

double mode_wall_slope(std::size_t n, Wall side, const BoxSpec& box) {
    const double a = box.half_width;
    const double k = mode_wavenumber(n, box);
    const double norm = 1.0 / std::sqrt(a);
    const double odd = (n % 2 == 0) ? 1.0 : -1.0;  // cos(n pi)
    if (box.modes == ModeConvention::Harmonic) return norm * k * odd;  // cos(+-n pi)
    return side == Wall::Left ? norm * k : norm * k * odd;
}

cplx box_kernel(const EigenExpansion& state, double x, double t, const PhysicalParams& params) {
    if (state.coefficients().empty()) throw ArgumentError("empty eigen expansion");
    cplx sum{0.0, 0.0};
    for (std::size_t n = 1; n <= state.max_mode(); ++n) {
        const cplx a = state.coefficient(n);
        if (a == cplx{}) continue;
        const double phase = -mode_energy(n, state.box(), params) * t / params.hbar;
        sum += a * std::polar(1.0, phase) * eigenmode(n, x, state.box());
    }
    return sum;
}

WaveField sample_box_kernel(const EigenExpansion& state, const SpatialGrid& grid, double t,
                            const PhysicalParams& params) {
    const double a = state.box().half_width;
    const Domain& d = grid.domain();
    if (std::abs(d.left + a) > 1e-12 * a || std::abs(d.right - a) > 1e-12 * a)
        throw ArgumentError("grid must span the box [-a, a]");
    auto field = WaveField::sample(grid, [&](double x) { return box_kernel(state, x, t, params); }, t);
    field.values.front() = 0.0;
    field.values.back() = 0.0;
    return field;
}

cplx box_wall_slope(const EigenExpansion& state, Wall side, double t, const PhysicalParams& params) {
    cplx sum{0.0, 0.0};
    for (std::size_t n = 1; n <= state.max_mode(); ++n) {
        const double phase = -mode_energy(n, state.box(), params) * t / params.hbar;
        sum += state.coefficient(n) * std::polar(1.0, phase) * mode_wall_slope(n, side, state.box());
    }
    return sum;
}

namespace {

// (1 - exp(-i w t)) / (i w), written to stay accurate for small w t.
cplx oscillatory_integral(double w, double t) {
    const double half = 0.5 * w * t;
    const double sinc = half == 0.0 ? 1.0 : std::sin(half) / half;
    return t * sinc * std::polar(1.0, -half);
}

}  // namespace

double flux_integral_closed(const EigenExpansion& state, double t, const PhysicalParams& params, Wall side) {
    if (t < 0.0) throw ArgumentError("flux integral needs t >= 0");
    const BoxSpec& box = state.box();
    const std::size_t nmax = state.max_mode();

    double diagonal = 0.0;
    double cross = 0.0;
    for (std::size_t n = 1; n <= nmax; ++n) {
        const cplx an = state.coefficient(n);
        const double sn = mode_wall_slope(n, side, box);
        diagonal += std::norm(an) * sn * sn * t;
        for (std::size_t k = n + 1; k <= nmax; ++k) {
            const cplx ak = state.coefficient(k);
            if (ak == cplx{} || an == cplx{}) continue;
            const double sk = mode_wall_slope(k, side, box);
            const double w = (mode_energy(k, box, params) - mode_energy(n, box, params)) / params.hbar;
            // (k, n) and (n, k) are complex conjugates of each other.
            const cplx kn = ak * std::conj(an) * sk * sn * oscillatory_integral(w, t);
            const cplx nk = an * std::conj(ak) * sn * sk * oscillatory_integral(-w, t);
            const cplx pair = kn + nk;
            assert(std::abs(pair.imag()) <= 1e-12 * std::max(1.0, std::abs(kn)));
            cross += pair.real();
        }
    }
    return diagonal + cross;
}

double survival_box(const EigenExpansion& state, const AbsorberSpec& absorber, double t,
                    const PhysicalParams& params) {
    if (t < 0.0) throw ArgumentError("survival needs t >= 0");
    const double c = absorption_prefactor(absorber.prefactor, params);
    double exponent = 0.0;
    if (absorber.lambda_left > 0.0)
        exponent += absorber.lambda_left * flux_integral_closed(state, t, params, Wall::Left);
    if (absorber.lambda_right > 0.0)
        exponent += absorber.lambda_right * flux_integral_closed(state, t, params, Wall::Right);
    return std::exp(-c * exponent);
}

namespace {
void check_two_level(std::size_t k, std::size_t n, double a_k, double a_n, double t) {
    if (k == n) throw ArgumentError("two-level law needs distinct levels");
    if (k < 1 || n < 1) throw ArgumentError("mode index must be >= 1");
    if (std::abs(a_k * a_k + a_n * a_n - 1.0) > EigenExpansion::kNormTolerance)
        throw ArgumentError("two-level amplitudes must satisfy A_k^2 + A_n^2 = 1");
    if (t < 0.0) throw ArgumentError("survival needs t >= 0");
}
}  // namespace

double survival_two_level(std::size_t k, std::size_t n, double a_k, double a_n, const AbsorberSpec& absorber,
                          double t, const PhysicalParams& params, const BoxSpec& box) {
    check_two_level(k, n, a_k, a_n, t);
    const double a = box.half_width;
    const double hb = params.hbar;
    const double m = params.mass;
    const double kk = static_cast<double>(k * k);
    const double nn = static_cast<double>(n * n);
    const double bracket = (kPi * kPi / (a * a)) * (a_k * a_k * kk + a_n * a_n * nn) * t -
                           (4.0 * m * a_k * a_n / (hb * (kk - nn))) *
                               std::sin(hb * (kk - nn) * kPi * kPi * t / (2.0 * m * a * a));
    const double c = absorption_prefactor(absorber.prefactor, params);
    return std::exp(-c * (absorber.lambda_left + absorber.lambda_right) * bracket);
}

double survival_two_level_series(std::size_t k, std::size_t n, double a_k, double a_n,
                                 const AbsorberSpec& absorber, double t, const PhysicalParams& params,
                                 const BoxSpec& box) {
    check_two_level(k, n, a_k, a_n, t);
    const double w = (mode_energy(k, box, params) - mode_energy(n, box, params)) / params.hbar;
    auto wall_flux = [&](Wall side) {
        const double sk = mode_wall_slope(k, side, box);
        const double sn = mode_wall_slope(n, side, box);
        return (a_k * a_k * sk * sk + a_n * a_n * sn * sn) * t + 2.0 * a_k * a_n * sk * sn * std::sin(w * t) / w;
    };
    const double c = absorption_prefactor(absorber.prefactor, params);
    double exponent = 0.0;
    if (absorber.lambda_left > 0.0) exponent += absorber.lambda_left * wall_flux(Wall::Left);
    if (absorber.lambda_right > 0.0) exponent += absorber.lambda_right * wall_flux(Wall::Right);
    return std::exp(-c * exponent);
}

double survival_dimensionless(double tau) {
    if (tau < 0.0) throw ArgumentError("dimensionless time must be >= 0");
    return std::exp(-2.5 * tau + (2.0 / (3.0 * kPi)) * std::sin(1.5 * kPi * tau));
}

double dimensionless_time(double t, double lambda, const BoxSpec& box, const PhysicalParams& params) {
    return lambda * params.hbar * kPi * t / (params.mass * box.half_width * box.half_width);
}

double beat_frequency(std::size_t k, std::size_t n, const BoxSpec& box, const PhysicalParams& params) {
    if (k == n) throw ArgumentError("beat frequency needs distinct levels");
    return std::abs(mode_energy(k, box, params) - mode_energy(n, box, params)) / params.hbar;
}

}  // namespace qabsorb
