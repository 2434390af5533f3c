#include "qabsorb/propagation.hpp"

#include <algorithm>
#include <cmath>

namespace qabsorb {

namespace {

StepAbsorption discount(double flux_left, double flux_right, double dt, const AbsorberSpec& absorber,
                        const PhysicalParams& params) {
    StepAbsorption s;
    s.unclamped = absorption_prefactor(absorber.prefactor, params) * dt *
                  (absorber.lambda_left * flux_left + absorber.lambda_right * flux_right);
    s.probability = std::clamp(s.unclamped, 0.0, std::nextafter(1.0, 0.0));
    return s;
}

}  // namespace

StepAbsorption absorb_probability(const WaveField& field, double dt, const AbsorberSpec& absorber,
                                  const PhysicalParams& params) {
    const double left = absorber.lambda_left > 0.0 ? std::norm(boundary_derivative(field, Wall::Left)) : 0.0;
    const double right = absorber.lambda_right > 0.0 ? std::norm(boundary_derivative(field, Wall::Right)) : 0.0;
    return discount(left, right, dt, absorber, params);
}

WaveField DiscountedField::psi() const {
    WaveField out = kernel;
    const double s = std::sqrt(survival);
    for (auto& z : out.values) z *= s;
    return out;
}

PropagationResult propagate_with_absorption(const WaveField& initial, const PropagationConfig& config) {
    config.params.validate();
    config.absorber.validate();
    if (!(initial.grid == config.grid)) throw ArgumentError("initial field grid differs from the configured grid");
    if (!is_dirichlet(initial)) throw ContractViolation("initial field is not Dirichlet-confined");
    if (std::abs(l2_norm_sq(initial) - 1.0) > 1e-6) throw ContractViolation("initial field is not normalized");

    const Potential potential = config.potential.value_or(Potential::zero(config.grid.size()));
    auto stepper = make_stepper(config.stepper, config.grid, config.dt, potential, config.params,
                                config.stepper_options);

    std::vector<double> times{initial.time};
    std::vector<double> survival{1.0};
    std::vector<double> absorbed;
    times.reserve(config.n_steps + 1);
    survival.reserve(config.n_steps + 1);
    absorbed.reserve(config.n_steps);

    PropagationResult result{SurvivalCurve{}, DiscountedField{initial, 1.0}, {}, {}, {}, false, 0};
    result.flux_left.reserve(config.n_steps);
    result.flux_right.reserve(config.n_steps);
    if (config.history_stride > 0) result.history.push_back(initial);

    WaveField kernel = initial;
    double s = 1.0;
    for (std::size_t j = 1; j <= config.n_steps; ++j) {
        kernel = stepper->step(kernel);
        if (!kernel.all_finite()) throw NumericError("propagation produced non-finite values");
        const double left = std::norm(boundary_derivative(kernel, Wall::Left));
        const double right = std::norm(boundary_derivative(kernel, Wall::Right));
        const StepAbsorption p = discount(left, right, config.dt, config.absorber, config.params);
        if (p.too_coarse()) ++result.coarse_steps;
        const double next = s * (1.0 - p.probability);
        if (next < kSurvivalFloor) {
            result.truncated = true;
            break;
        }
        s = next;
        times.push_back(kernel.time);
        survival.push_back(s);
        absorbed.push_back(p.probability);
        result.flux_left.push_back(left);
        result.flux_right.push_back(right);
        if (config.history_stride > 0 && j % config.history_stride == 0) result.history.push_back(kernel);
    }

    result.curve = SurvivalCurve(std::move(times), std::move(survival), std::move(absorbed));
    result.final_state = DiscountedField{std::move(kernel), s};
    return result;
}

SurvivalCurve combined_cavity_decay(const SurvivalCurve& transverse, const SurvivalCurve& axial) {
    if (transverse.size() == 0 || axial.size() == 0) throw ArgumentError("empty survival curve");
    const double start = std::max(transverse.times().front(), axial.times().front());
    const double stop = std::min(transverse.times().back(), axial.times().back());
    if (!(start <= stop)) throw ArgumentError("survival curves have non-overlapping time ranges");

    std::vector<double> times;
    std::vector<double> product;
    if (transverse.times() == axial.times()) {
        times = transverse.times();
        product.resize(times.size());
        for (std::size_t i = 0; i < times.size(); ++i) product[i] = transverse.survival()[i] * axial.survival()[i];
    } else {
        for (std::size_t i = 0; i < transverse.size(); ++i) {
            const double t = transverse.times()[i];
            if (t < start || t > stop) continue;
            times.push_back(t);
            product.push_back(transverse.survival()[i] * axial.at(t));
        }
        if (times.empty() || times.front() > start) {
            times.insert(times.begin(), start);
            product.insert(product.begin(), transverse.at(start) * axial.at(start));
        }
    }
    const double base = product.front();
    for (auto& v : product) v /= base;
    return SurvivalCurve::from_survival(std::move(times), std::move(product));
}

}  // namespace qabsorb
