#include "qabsorb/packet.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace qabsorb {

void GaussianPacketSpec::validate() const {
    if (!(width > 0.0) || !std::isfinite(width)) throw ArgumentError("packet width must be positive");
    if (!(center < 0.0) || !std::isfinite(center)) throw ArgumentError("packet center must be negative (left of the wall)");
    if (!(wavenumber > 0.0) || !std::isfinite(wavenumber))
        throw ArgumentError("packet wavenumber must be positive (toward the wall)");
    if (!(lambda_wall >= 0.0) || !std::isfinite(lambda_wall)) throw ArgumentError("lambda_wall must be >= 0");
}

GaussianPacket::GaussianPacket(GaussianPacketSpec spec, PhysicalParams params) : spec_(spec), params_(params) {
    spec_.validate();
    params_.validate();

    // Half-line norm of g(x) - g(-x) by trapezoid; the integrand is a smooth
    // Gaussian mixture, so the rule converges spectrally.
    const double a = spec_.width;
    const double x0 = spec_.center;
    const double k0 = spec_.wavenumber;
    const double lo = x0 - 20.0 * a;
    const std::size_t n = static_cast<std::size_t>(std::ceil(-lo / (a / 400.0)));
    const double h = -lo / static_cast<double>(n);
    auto integrand = [&](double x) {
        const cplx g = std::exp(cplx(-(x - x0) * (x - x0) / (a * a), k0 * x));
        const cplx gi = std::exp(cplx(-(x + x0) * (x + x0) / (a * a), -k0 * x));
        return std::norm(g - gi);
    };
    double sum = 0.5 * (integrand(lo) + integrand(0.0));
    for (std::size_t i = 1; i < n; ++i) sum += integrand(lo + static_cast<double>(i) * h);
    norm_ = 1.0 / std::sqrt(sum * h);
}

cplx GaussianPacket::kernel(double x, double t) const {
    if (x > 0.0) throw ArgumentError("packet kernel is defined for x <= 0");
    if (t < 0.0) throw ArgumentError("packet kernel needs t >= 0");
    const double a2 = spec_.width * spec_.width;
    const double x0 = spec_.center;
    const double k0 = spec_.wavenumber;
    const double hb = params_.hbar;
    const double m = params_.mass;
    const double v = hb * k0 / m;

    const cplx w(a2, 2.0 * hb * t / m);
    const cplx pref = std::sqrt(a2 / w);
    const double phase_t = -hb * k0 * k0 * t / (2.0 * m);
    const double yr = x - v * t - x0;
    const double yl = x + v * t + x0;
    const cplx right = std::exp(-yr * yr / w + cplx(0.0, k0 * x + phase_t));
    const cplx left = std::exp(-yl * yl / w + cplx(0.0, -k0 * x + phase_t));
    return norm_ * pref * (right - left);
}

cplx GaussianPacket::wall_slope(double t) const {
    if (t < 0.0) throw ArgumentError("wall slope needs t >= 0");
    const double a2 = spec_.width * spec_.width;
    const double x0 = spec_.center;
    const double k0 = spec_.wavenumber;
    const double hb = params_.hbar;
    const double m = params_.mass;
    const double s = x0 + hb * k0 * t / m;

    const cplx w(a2, 2.0 * hb * t / m);
    const cplx envelope = std::sqrt(a2 / w) * std::exp(-s * s / w + cplx(0.0, -hb * k0 * k0 * t / (2.0 * m)));
    return 2.0 * norm_ * (2.0 * s / w + cplx(0.0, k0)) * envelope;
}

double GaussianPacket::wall_flux_printed(double t) const {
    const double a = spec_.width;
    const double x0 = spec_.center;
    const double k0 = spec_.wavenumber;
    const double m = params_.mass;
    const double a2 = a * a;
    const double a4 = a2 * a2;
    const double d = a4 / 16.0 + t * t / (4.0 * m * m);
    const double pref = a / (16.0 * kPi * kPi) * (a4 * k0 * k0 / 16.0 + x0 * x0) / std::pow(d, 1.5);
    const double expo =
        ((a2 / 4.0) * (a2 * k0 * k0 / 2.0 + x0 * x0) - (a2 / (4.0 * m)) * x0 * k0 * t) / d - a2 * k0 * k0 / 2.0;
    return pref * std::exp(expo);
}

double GaussianPacket::arrival_time() const {
    return params_.mass * std::abs(spec_.center) / (params_.hbar * spec_.wavenumber);
}

double GaussianPacket::truncation_length(double t_max) const {
    return std::abs(spec_.center) + 10.0 * spec_.width + 4.0 * params_.hbar * spec_.wavenumber / params_.mass * t_max;
}

WaveField GaussianPacket::sample(const SpatialGrid& grid, double t) const {
    if (grid.domain().right != 0.0) throw ArgumentError("packet grid must end at the wall x = 0");
    auto field = WaveField::sample(grid, [&](double x) { return kernel(x, t); }, t);
    field.values.back() = 0.0;
    const double scale = field.max_abs();
    if (std::abs(field.values.front()) > kDirichletTolerance * scale)
        throw ContractViolation("packet grid too short: field is not negligible at the far end");
    field.values.front() = 0.0;
    return field;
}

double packet_flux_integral(const GaussianPacket& packet, double t_max, std::size_t* samples) {
    if (!(t_max > 0.0)) throw ArgumentError("t_max must be positive");
    using boost::math::quadrature::gauss_kronrod;
    std::size_t evaluations = 0;
    auto flux = [&](double t) {
        ++evaluations;
        return packet.wall_flux(t);
    };
    // The flux is sharply peaked on arrival; split there so both pieces are smooth.
    std::vector<double> cuts{0.0};
    if (const double arrival = packet.arrival_time(); arrival < t_max) cuts.push_back(arrival);
    cuts.push_back(t_max);

    // Convergence is judged by agreement of two independent adaptive rules.
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double coarse = gauss_kronrod<double, 31>::integrate(flux, cuts[i], cuts[i + 1], 15, 1e-12);
        const double fine = gauss_kronrod<double, 61>::integrate(flux, cuts[i], cuts[i + 1], 15, 1e-12);
        if (!std::isfinite(fine) || std::abs(fine - coarse) > 1e-10 * std::abs(fine))
            throw ConvergenceError("wall-flux quadrature did not converge");
        total += fine;
    }
    if (samples) *samples = evaluations;
    return total;
}

ReflectionReport reflection_coefficient(const GaussianPacket& packet, double t_max, double tail_tol,
                                        PrefactorConvention convention) {
    if (!(t_max > 0.0)) throw ArgumentError("t_max must be positive");
    if (!(tail_tol > 0.0)) throw ArgumentError("tail_tol must be positive");

    const auto& spec = packet.spec();
    const auto& params = packet.params();
    ReflectionReport r;
    r.t_max = t_max;
    r.flux_integral = packet_flux_integral(packet, t_max, &r.samples);

    // wall_flux(t) = Q exp(M(t)) / D(t)^{3/2} with D = a^4 + 4 hbar^2 t^2 / m^2,
    // M(t) = -2 a^2 (x0 + v t)^2 / D, M peaking (at 0) on arrival and then
    // decreasing monotonically to -a^2 k0^2 / 2. Bracketing exp(M) on
    // [t_max, inf) leaves int D^{-3/2} dt, which is elementary.
    const double a2 = spec.width * spec.width;
    const double x0 = spec.center;
    const double k0 = spec.wavenumber;
    const double v = params.hbar * k0 / params.mass;
    const double alpha = a2 * a2;
    const double beta = 4.0 * params.hbar * params.hbar / (params.mass * params.mass);
    const double q = 4.0 * packet.norm_constant() * packet.norm_constant() * (4.0 * x0 * x0 + k0 * k0 * alpha) * a2;
    const double root = std::sqrt(alpha + beta * t_max * t_max);
    const double tail_integral = 1.0 / (std::sqrt(beta) * root * (root + t_max * std::sqrt(beta)));
    const bool past_peak = t_max >= packet.arrival_time();
    const double s = x0 + v * t_max;
    const double m_upper = past_peak ? -2.0 * a2 * s * s / (alpha + beta * t_max * t_max) : 0.0;
    const double m_lower = -0.5 * a2 * k0 * k0;
    const double upper = q * std::exp(m_upper) * tail_integral;
    const double lower = past_peak ? q * std::exp(m_lower) * tail_integral : 0.0;
    r.tail_estimate = 0.5 * (upper + lower);

    const double c = absorption_prefactor(convention, params) * spec.lambda_wall;
    r.tail_bound = c * 0.5 * (upper - lower);
    r.exponent = c * (r.flux_integral + r.tail_estimate);
    r.reflection = std::exp(-r.exponent);
    if (r.tail_bound > tail_tol)
        throw ConvergenceError("reflection coefficient tail bound " + std::to_string(r.tail_bound) +
                               " exceeds tolerance; increase t_max beyond " + std::to_string(t_max));
    return r;
}

}  // namespace qabsorb
