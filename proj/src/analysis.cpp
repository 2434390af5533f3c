#include "qabsorb/analysis.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <boost/math/tools/minima.hpp>

namespace qabsorb {

namespace {

struct LinearPart {
    double offset, c, s, sse;
};

LinearPart solve_at(std::span<const double> t, std::span<const double> y, double omega) {
    const auto n = static_cast<Eigen::Index>(t.size());
    Eigen::MatrixXd design(n, 3);
    Eigen::VectorXd rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double ti = t[static_cast<std::size_t>(i)];
        design(i, 0) = 1.0;
        design(i, 1) = std::cos(omega * ti);
        design(i, 2) = std::sin(omega * ti);
        rhs(i) = y[static_cast<std::size_t>(i)];
    }
    const Eigen::Vector3d coef = design.colPivHouseholderQr().solve(rhs);
    const double sse = (design * coef - rhs).squaredNorm();
    return {coef(0), coef(1), coef(2), sse};
}

}  // namespace

SinusoidFit fit_sinusoid(std::span<const double> times, std::span<const double> values, double omega_lo,
                         double omega_hi) {
    if (times.size() != values.size()) throw ArgumentError("times and values differ in length");
    if (times.size() < 4) throw ArgumentError("need at least four samples for a sinusoid fit");
    if (!(omega_lo > 0.0) || !(omega_hi > omega_lo)) throw ArgumentError("invalid frequency bracket");

    constexpr int kScan = 400;
    const double step = (omega_hi - omega_lo) / kScan;
    int best = 0;
    double best_sse = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= kScan; ++i) {
        const double sse = solve_at(times, values, omega_lo + i * step).sse;
        if (sse < best_sse) {
            best_sse = sse;
            best = i;
        }
    }
    const double lo = omega_lo + std::max(best - 1, 0) * step;
    const double hi = omega_lo + std::min(best + 1, kScan) * step;
    const auto found = boost::math::tools::brent_find_minima(
        [&](double w) { return solve_at(times, values, w).sse; }, lo, hi, std::numeric_limits<double>::digits / 2);

    const LinearPart p = solve_at(times, values, found.first);
    SinusoidFit fit;
    fit.omega = found.first;
    fit.amplitude = std::hypot(p.c, p.s);
    fit.phase = std::atan2(-p.s, p.c);
    fit.offset = p.offset;
    fit.rms_residual = std::sqrt(p.sse / static_cast<double>(times.size()));
    return fit;
}

RateSeries decay_rate_series(const SurvivalCurve& curve) {
    RateSeries out;
    const auto& t = curve.times();
    const auto& p = curve.step_absorption();
    out.times.reserve(p.size());
    out.rates.reserve(p.size());
    for (std::size_t j = 0; j < p.size(); ++j) {
        const double dt = t[j + 1] - t[j];
        out.times.push_back(0.5 * (t[j] + t[j + 1]));
        out.rates.push_back(-std::log1p(-p[j]) / dt);
    }
    return out;
}

RateSeries mean_decay_rate(const SurvivalCurve& curve) {
    RateSeries out;
    for (std::size_t i = 1; i < curve.size(); ++i) {
        const double t = curve.times()[i] - curve.times().front();
        out.times.push_back(curve.times()[i]);
        out.rates.push_back(-std::log(curve.survival()[i]) / t);
    }
    return out;
}

}  // namespace qabsorb
