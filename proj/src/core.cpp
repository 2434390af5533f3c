#include "qabsorb/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qabsorb {

void PhysicalParams::validate() const {
    if (!(hbar > 0.0) || !std::isfinite(hbar)) throw ArgumentError("hbar must be positive and finite");
    if (!(mass > 0.0) || !std::isfinite(mass)) throw ArgumentError("mass must be positive and finite");
}

double absorption_prefactor(PrefactorConvention convention, const PhysicalParams& params) {
    const double c = params.hbar / (kPi * params.mass);
    return convention == PrefactorConvention::Continuum ? c : 0.5 * c;
}

void AbsorberSpec::validate() const {
    if (!(lambda_left >= 0.0) || !std::isfinite(lambda_left))
        throw ArgumentError("lambda_left must be finite and >= 0");
    if (!(lambda_right >= 0.0) || !std::isfinite(lambda_right))
        throw ArgumentError("lambda_right must be finite and >= 0");
}

Domain::Domain(double l, double r) : left(l), right(r) {
    if (std::isnan(l) || std::isnan(r) || !(l < r)) throw ArgumentError("domain requires left < right");
}

bool Domain::finite() const { return std::isfinite(left) && std::isfinite(right); }

SpatialGrid::SpatialGrid(Domain domain, std::size_t n_points) : domain_(domain), n_(n_points), h_(0.0) {
    if (!domain.finite()) throw DomainError("a finite grid needs a finite domain");
    if (n_points < min_points)
        throw ArgumentError("grid needs at least " + std::to_string(min_points) + " points, got " +
                            std::to_string(n_points));
    h_ = domain.width() / static_cast<double>(n_points - 1);
}

double SpatialGrid::node(std::size_t i) const {
    if (i + 1 == n_) return domain_.right;
    return domain_.left + static_cast<double>(i) * h_;
}

std::vector<double> SpatialGrid::nodes() const {
    std::vector<double> x(n_);
    for (std::size_t i = 0; i < n_; ++i) x[i] = node(i);
    return x;
}

SpatialGrid make_grid(Domain domain, std::size_t n_points) { return SpatialGrid(domain, n_points); }

WaveField::WaveField(SpatialGrid g, std::vector<cplx> v, double t) : grid(g), values(std::move(v)), time(t) {
    if (values.size() != grid.size()) throw ArgumentError("field size does not match grid");
}

double WaveField::max_abs() const {
    double m = 0.0;
    for (const auto& z : values) m = std::max(m, std::abs(z));
    return m;
}

bool WaveField::all_finite() const {
    return std::all_of(values.begin(), values.end(),
                       [](const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

bool is_dirichlet(const WaveField& field) {
    const double scale = field.max_abs();
    const double tol = kDirichletTolerance * scale;
    return std::abs(field.values.front()) <= tol && std::abs(field.values.back()) <= tol;
}

double l2_norm_sq(const WaveField& field) {
    const auto& v = field.values;
    double sum = 0.5 * (std::norm(v.front()) + std::norm(v.back()));
    for (std::size_t i = 1; i + 1 < v.size(); ++i) sum += std::norm(v[i]);
    return sum * field.grid.spacing();
}

double l2_distance_sq(const WaveField& a, const WaveField& b) {
    if (!(a.grid == b.grid)) throw ArgumentError("fields live on different grids");
    const std::size_t n = a.values.size();
    double sum = 0.5 * (std::norm(a.values[0] - b.values[0]) + std::norm(a.values[n - 1] - b.values[n - 1]));
    for (std::size_t i = 1; i + 1 < n; ++i) sum += std::norm(a.values[i] - b.values[i]);
    return sum * a.grid.spacing();
}

cplx boundary_derivative(const WaveField& field, Wall side) {
    const auto& v = field.values;
    if (v.size() < 5) throw ArgumentError("boundary derivative needs at least 5 nodes");
    const double scale = field.max_abs();
    if (scale == 0.0) return {0.0, 0.0};

    const cplx end = side == Wall::Left ? v.front() : v.back();
    if (std::abs(end) > kDirichletTolerance * scale)
        throw ContractViolation("boundary_derivative: endpoint value is not zero");

    // 5-point one-sided stencil (-25, 48, -36, 16, -3)/12h with the endpoint term dropped.
    const double h = field.grid.spacing();
    const std::size_t n = v.size();
    auto at = [&](std::size_t k) { return side == Wall::Left ? v[k] : v[n - 1 - k]; };
    const cplx d = (48.0 * at(1) - 36.0 * at(2) + 16.0 * at(3) - 3.0 * at(4)) / (12.0 * h);
    return side == Wall::Left ? d : -d;
}

double integrate_time_series(std::span<const double> times, std::span<const double> values) {
    if (times.size() != values.size()) throw ArgumentError("times and values differ in length");
    if (times.size() < 2) throw ArgumentError("need at least two samples");
    double sum = 0.0;
    for (std::size_t i = 1; i < times.size(); ++i) {
        const double dt = times[i] - times[i - 1];
        if (!(dt > 0.0)) throw ArgumentError("times must be strictly ascending");
        sum += 0.5 * dt * (values[i] + values[i - 1]);
    }
    return sum;
}

namespace {
// Survival products accumulate rounding; anything this close to a violation is noise.
constexpr double kMonotoneSlack = 1e-14;
}  // namespace

SurvivalCurve::SurvivalCurve(std::vector<double> times, std::vector<double> survival,
                             std::vector<double> step_absorption)
    : times_(std::move(times)), survival_(std::move(survival)), step_absorption_(std::move(step_absorption)) {
    if (times_.empty() || times_.size() != survival_.size())
        throw ArgumentError("survival curve: times and survival must be non-empty and equal length");
    if (step_absorption_.size() + 1 != times_.size())
        throw ArgumentError("survival curve: need one absorption value per step");
    if (std::abs(survival_[0] - 1.0) > kMonotoneSlack) throw ArgumentError("survival curve must start at 1");
    survival_[0] = 1.0;
    for (std::size_t i = 0; i < survival_.size(); ++i) {
        if (!(survival_[i] > 0.0 && survival_[i] <= 1.0))
            throw ArgumentError("survival values must lie in (0, 1]");
        if (i > 0) {
            if (!(times_[i] > times_[i - 1])) throw ArgumentError("survival curve times must ascend");
            if (survival_[i] > survival_[i - 1] * (1.0 + kMonotoneSlack))
                throw ArgumentError("survival curve must be non-increasing");
            survival_[i] = std::min(survival_[i], survival_[i - 1]);
        }
    }
    for (double p : step_absorption_)
        if (!(p >= 0.0 && p < 1.0)) throw ArgumentError("step absorption must lie in [0, 1)");
}

SurvivalCurve SurvivalCurve::from_survival(std::vector<double> times, std::vector<double> survival) {
    std::vector<double> p;
    if (!survival.empty()) {
        p.reserve(survival.size() - 1);
        for (std::size_t i = 1; i < survival.size(); ++i)
            p.push_back(std::clamp(1.0 - survival[i] / survival[i - 1], 0.0, 1.0));
    }
    return SurvivalCurve(std::move(times), std::move(survival), std::move(p));
}

double SurvivalCurve::at(double t) const {
    if (t < times_.front() || t > times_.back()) throw ArgumentError("time outside survival curve range");
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    if (it == times_.end()) return survival_.back();
    const std::size_t j = static_cast<std::size_t>(it - times_.begin());
    const double w = (t - times_[j - 1]) / (times_[j] - times_[j - 1]);
    return (1.0 - w) * survival_[j - 1] + w * survival_[j];
}

}  // namespace qabsorb
