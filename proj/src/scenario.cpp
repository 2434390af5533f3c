#include "qabsorb/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <future>

#include <json.hpp>

#include "qabsorb/analysis.hpp"
#include "qabsorb/propagation.hpp"

namespace qabsorb {

namespace fs = std::filesystem;

std::string format_number(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

void write_file_atomic(const fs::path& path, std::string_view content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open '" + tmp.string() + "' for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.close();
        if (!out) throw Error("failed writing '" + tmp.string() + "'");
    }
    fs::rename(tmp, path);
}

namespace {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add(std::vector<double> values) {
        std::vector<std::string> row;
        row.reserve(values.size());
        for (double v : values) row.push_back(format_number(v));
        rows.push_back(std::move(row));
    }

    std::string render() const {
        std::string out;
        auto line = [&](const std::vector<std::string>& cells) {
            for (std::size_t i = 0; i < cells.size(); ++i) {
                if (i) out += ',';
                out += cells[i];
            }
            out += '\n';
        };
        line(header);
        for (const auto& r : rows) line(r);
        return out;
    }
};

std::vector<double> sample_times(const NumericSettings& n) {
    std::vector<double> t(n.samples);
    for (std::size_t i = 0; i < n.samples; ++i)
        t[i] = n.t_max * static_cast<double>(i) / static_cast<double>(n.samples - 1);
    t.back() = n.t_max;
    return t;
}

std::size_t steps_for(double t_max, double dt) {
    return static_cast<std::size_t>(std::ceil(t_max / dt - 1e-9));
}

double rel_diff(double value, double reference) {
    const double d = std::abs(value - reference);
    return reference != 0.0 ? d / std::abs(reference) : d;
}

/// Linear interpolation of y(t) on ascending nodes.
double interpolate(const std::vector<double>& t, const std::vector<double>& y, double x) {
    if (x <= t.front()) return y.front();
    if (x >= t.back()) return y.back();
    const auto it = std::upper_bound(t.begin(), t.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - t.begin()) - 1;
    const double w = (x - t[i]) / (t[i + 1] - t[i]);
    return (1.0 - w) * y[i] + w * y[i + 1];
}

PropagationConfig propagation_setup(const ScenarioConfig& c, const SpatialGrid& grid, const AbsorberSpec& absorber) {
    PropagationConfig pc;
    pc.dt = c.numeric.dt;
    pc.n_steps = steps_for(c.numeric.t_max, c.numeric.dt);
    pc.stepper = c.numeric.stepper;
    pc.stepper_options.cn_scheme = c.numeric.cn_scheme;
    pc.grid = grid;
    pc.absorber = absorber;
    pc.params = c.physical;
    return pc;
}

PropagationResult run_box(const ScenarioConfig& c, const EigenExpansion& state) {
    const SpatialGrid grid = make_grid(c.box.domain(), c.numeric.grid_points);
    return propagate_with_absorption(sample_box_kernel(state, grid, 0.0, c.physical),
                                     propagation_setup(c, grid, c.absorber));
}

double survival_at(const PropagationResult& r, double t) {
    const double end = r.curve.times().back();
    if (t <= end) return r.curve.at(t);
    // Accumulated step times can fall short of t_max by rounding.
    if (!r.truncated && t - end <= 1e-9 * std::max(1.0, t)) return r.curve.survival().back();
    if (r.truncated) return 0.0;
    throw NumericError("numerical survival curve ends before t = " + format_number(t));
}

struct Outcome {
    std::map<std::string, double> headline;
    std::vector<Deviation> deviations;
    std::vector<std::pair<std::string, Table>> tables;  // file suffix, table
};

double max_of(const std::vector<double>& v) {
    return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

Outcome box_decay(const ScenarioConfig& c) {
    const EigenExpansion state = c.expansion();
    const PropagationResult run = run_box(c, state);
    Table table{{"t [time]", "survival_closed [1]", "survival_numeric [1]", "rel_diff [1]"}, {}};
    std::vector<double> diffs;
    for (double t : sample_times(c.numeric)) {
        const double closed = survival_box(state, c.absorber, t, c.physical);
        const double numeric = survival_at(run, t);
        diffs.push_back(rel_diff(numeric, closed));
        table.add({t, closed, numeric, diffs.back()});
    }
    Outcome o;
    const double t_end = c.numeric.t_max;
    o.headline["decay_rate_closed"] = -std::log(survival_box(state, c.absorber, t_end, c.physical)) / t_end;
    if (const double s = survival_at(run, t_end); s > 0.0) o.headline["decay_rate_numeric"] = -std::log(s) / t_end;
    o.headline["survival_numeric_end"] = survival_at(run, t_end);
    o.headline["coarse_steps"] = static_cast<double>(run.coarse_steps);
    o.deviations.push_back({"survival_numeric_vs_closed", max_of(diffs), 1e-3});
    o.tables.emplace_back("", std::move(table));
    return o;
}

Outcome two_level(const ScenarioConfig& c) {
    const EigenExpansion state = c.expansion();
    std::vector<std::size_t> levels;
    for (std::size_t n = 1; n <= state.max_mode(); ++n)
        if (state.coefficient(n) != cplx{}) levels.push_back(n);
    const std::size_t n = levels.at(0), k = levels.at(1);
    const double a_n = state.coefficient(n).real(), a_k = state.coefficient(k).real();
    const double lambda = c.absorber.lambda_left + c.absorber.lambda_right;

    const PropagationResult run = run_box(c, state);
    Table table{{"t [time]", "tau [1]", "survival_quoted [1]", "survival_series [1]", "survival_numeric [1]",
                 "rel_diff_numeric_series [1]", "rel_diff_numeric_quoted [1]"},
                {}};
    std::vector<double> d_series, d_quoted, d_forms;
    for (double t : sample_times(c.numeric)) {
        const double quoted = survival_two_level(k, n, a_k, a_n, c.absorber, t, c.physical, c.box);
        const double series = survival_two_level_series(k, n, a_k, a_n, c.absorber, t, c.physical, c.box);
        const double numeric = survival_at(run, t);
        d_series.push_back(rel_diff(numeric, series));
        d_quoted.push_back(rel_diff(numeric, quoted));
        d_forms.push_back(rel_diff(quoted, series));
        table.add({t, dimensionless_time(t, lambda, c.box, c.physical), quoted, series, numeric, d_series.back(),
                   d_quoted.back()});
    }

    Outcome o;
    const double omega = beat_frequency(k, n, c.box, c.physical);
    o.headline["beat_frequency"] = omega;
    o.headline["level_k"] = static_cast<double>(k);
    o.headline["level_n"] = static_cast<double>(n);
    o.headline["survival_numeric_end"] = survival_at(run, c.numeric.t_max);
    o.deviations.push_back({"survival_numeric_vs_series", max_of(d_series), 1e-3});
    o.deviations.push_back({"survival_quoted_vs_series", max_of(d_forms), 1e-3});

    // The rate oscillates only if the weighted cross slope products survive.
    double cross = 0.0;
    for (auto [side, lam] : {std::pair{Wall::Left, c.absorber.lambda_left}, std::pair{Wall::Right, c.absorber.lambda_right}})
        cross += lam * mode_wall_slope(k, side, c.box) * mode_wall_slope(n, side, c.box);
    const double period = 2.0 * kPi / omega;
    if (std::abs(cross) * std::abs(a_k * a_n) > 1e-12 && c.numeric.t_max >= period && !run.truncated) {
        const RateSeries rates = decay_rate_series(run.curve);
        const SinusoidFit fit = fit_sinusoid(rates.times, rates.rates, 0.5 * omega, 1.5 * omega);
        o.headline["beat_frequency_fit"] = fit.omega;
        o.headline["beat_amplitude_fit"] = fit.amplitude;
        o.deviations.push_back({"beat_frequency_fit", rel_diff(fit.omega, omega), 1e-3});
    }
    o.tables.emplace_back("", std::move(table));
    return o;
}

struct PacketCurves {
    std::vector<double> times;
    std::vector<double> flux;
    std::vector<double> survival;  // exp(-c lambda int_0^t flux)
};

PacketCurves packet_closed(const GaussianPacket& packet, const std::vector<double>& times, double c_lambda) {
    PacketCurves out{times, {}, {}};
    for (double t : times) {
        out.flux.push_back(packet.wall_flux(t));
        const double integral = t > 0.0 ? packet_flux_integral(packet, t) : 0.0;
        out.survival.push_back(std::exp(-c_lambda * integral));
    }
    return out;
}

Outcome packet_reflect(const ScenarioConfig& c) {
    const GaussianPacket packet(c.packet, c.physical);
    const double c_lambda = absorption_prefactor(c.absorber.prefactor, c.physical) * c.packet.lambda_wall;
    const ReflectionReport report =
        reflection_coefficient(packet, c.numeric.t_max, c.numeric.tail_tol, c.absorber.prefactor);

    const double length = packet.truncation_length(c.numeric.t_max);
    const SpatialGrid grid = make_grid({-length, 0.0}, c.numeric.grid_points);
    const WaveField initial = packet.sample(grid, 0.0);
    const AbsorberSpec wall{0.0, c.packet.lambda_wall, c.absorber.prefactor};
    PropagationConfig setup = propagation_setup(c, grid, wall);
    setup.history_stride = std::max<std::size_t>(1, setup.n_steps / 200);
    const PropagationResult run = propagate_with_absorption(initial, setup);

    // Spurious reflection from the truncation wall: field magnitude within one
    // packet width of -L.
    double far_end = 0.0;
    for (const WaveField& f : run.history)
        for (std::size_t i = 0; i < grid.size() && grid.node(i) <= -length + c.packet.width; ++i)
            far_end = std::max(far_end, std::abs(f.values[i]));

    std::vector<double> flux_numeric{std::norm(boundary_derivative(initial, Wall::Right))};
    flux_numeric.insert(flux_numeric.end(), run.flux_right.begin(), run.flux_right.end());

    const std::vector<double> times = sample_times(c.numeric);
    const PacketCurves closed = packet_closed(packet, times, c_lambda);
    Table table{{"t [time]", "wall_flux_closed [1/length^3]", "wall_flux_numeric [1/length^3]",
                 "absorbed_closed [1]", "absorbed_numeric [1]"},
                {}};
    std::vector<double> diffs;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double numeric = survival_at(run, times[i]);
        diffs.push_back(rel_diff(numeric, closed.survival[i]));
        table.add({times[i], closed.flux[i], interpolate(run.curve.times(), flux_numeric, times[i]),
                   1.0 - closed.survival[i], 1.0 - numeric});
    }

    Outcome o;
    const double reflection_numeric = survival_at(run, c.numeric.t_max);
    o.headline["reflection"] = report.reflection;
    o.headline["reflection_numeric"] = reflection_numeric;
    o.headline["flux_integral"] = report.flux_integral;
    o.headline["tail_estimate"] = report.tail_estimate;
    o.headline["tail_bound"] = report.tail_bound;
    o.headline["arrival_time"] = packet.arrival_time();
    o.deviations.push_back({"survival_numeric_vs_closed", max_of(diffs), 1e-2});
    o.deviations.push_back({"reflection_numeric_vs_closed", rel_diff(reflection_numeric, report.reflection), 1e-2});
    o.deviations.push_back({"far_end_amplitude", far_end, 1e-6});
    o.tables.emplace_back("", std::move(table));
    return o;
}

Outcome cavity(const ScenarioConfig& c) {
    const EigenExpansion state = c.expansion();
    const PropagationResult run = run_box(c, state);
    if (run.truncated) throw NumericError("transverse survival underflowed before t_max");

    const std::vector<double> times = sample_times(c.numeric);
    std::vector<double> transverse;
    for (double t : times) transverse.push_back(survival_at(run, t));

    const GaussianPacket packet(c.packet, c.physical);
    const double c_lambda = absorption_prefactor(c.absorber.prefactor, c.physical) * c.packet.lambda_wall;
    const PacketCurves axial = packet_closed(packet, times, c_lambda);

    const SurvivalCurve t_curve = SurvivalCurve::from_survival(times, transverse);
    const SurvivalCurve a_curve = SurvivalCurve::from_survival(times, axial.survival);
    const SurvivalCurve combined = combined_cavity_decay(t_curve, a_curve);

    Table table{{"t [time]", "transverse [1]", "axial [1]", "combined [1]"}, {}};
    std::vector<double> diffs;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double product = transverse[i] * axial.survival[i];
        diffs.push_back(rel_diff(combined.survival()[i], product));
        table.add({times[i], transverse[i], axial.survival[i], combined.survival()[i]});
    }
    Outcome o;
    o.headline["combined_end"] = combined.survival().back();
    o.headline["transverse_end"] = transverse.back();
    o.headline["axial_end"] = axial.survival.back();
    o.deviations.push_back({"combined_vs_product", max_of(diffs), 1e-12});
    o.tables.emplace_back("", std::move(table));
    return o;
}

double box_error(const ScenarioConfig& c, const EigenExpansion& state, StepperKind kind, std::size_t points,
                 double dt) {
    const SpatialGrid grid = make_grid(c.box.domain(), points);
    StepperOptions options;
    options.cn_scheme = c.numeric.cn_scheme;
    auto stepper = make_stepper(kind, grid, dt, Potential::zero(points), c.physical, options);
    WaveField field = sample_box_kernel(state, grid, 0.0, c.physical);
    const std::size_t steps = steps_for(c.numeric.t_max, dt);
    for (std::size_t i = 0; i < steps; ++i) field = stepper->step(field);
    const WaveField exact = sample_box_kernel(state, grid, field.time, c.physical);
    return std::sqrt(l2_distance_sq(field, exact) / l2_norm_sq(exact));
}

Outcome convergence(const ScenarioConfig& c) {
    const EigenExpansion state = c.expansion();
    const std::vector<std::string> header{"stepper", "dt [time]", "grid_points [1]", "spacing [length]",
                                          "l2_error [1]"};
    Table by_dt{header, {}}, by_spacing{header, {}};
    Outcome o;
    for (StepperKind kind : {StepperKind::SpectralSine, StepperKind::CrankNicolson, StepperKind::FeynmanKernel}) {
        const std::string name(to_string(kind));
        std::vector<double> errors;
        for (std::size_t level = 0; level <= c.numeric.halvings; ++level) {
            const double dt = c.numeric.dt / std::ldexp(1.0, static_cast<int>(level));
            const std::size_t points = c.numeric.grid_points;
            errors.push_back(box_error(c, state, kind, points, dt));
            const double h = c.box.domain().width() / static_cast<double>(points - 1);
            by_dt.rows.push_back({name, format_number(dt), std::to_string(points), format_number(h),
                                  format_number(errors.back())});
        }
        // The sine-series stepper is exact in time for V = 0; its errors are round-off.
        if (kind == StepperKind::SpectralSine) {
            o.headline[name + "_max_error"] = *std::max_element(errors.begin(), errors.end());
        } else {
            bool monotone = true;
            for (std::size_t i = 1; i < errors.size(); ++i) monotone = monotone && errors[i] < errors[i - 1];
            o.headline[name + "_dt_monotone"] = monotone ? 1.0 : 0.0;
            o.headline[name + "_dt_order"] =
                std::log2(errors.front() / errors.back()) / static_cast<double>(c.numeric.halvings);
        }

        for (std::size_t level = 0; level <= c.numeric.halvings; ++level) {
            const std::size_t points = (c.numeric.grid_points - 1) * (std::size_t{1} << level) + 1;
            const double h = c.box.domain().width() / static_cast<double>(points - 1);
            const double err = box_error(c, state, kind, points, c.numeric.dt);
            by_spacing.rows.push_back({name, format_number(c.numeric.dt), std::to_string(points), format_number(h),
                                       format_number(err)});
        }
    }
    o.tables.emplace_back("_dt", std::move(by_dt));
    o.tables.emplace_back("_spacing", std::move(by_spacing));
    return o;
}

nlohmann::ordered_json config_json(const ScenarioConfig& c) {
    nlohmann::ordered_json j;
    j["scenario"] = std::string(to_string(c.scenario));
    j["physical"] = {{"hbar", c.physical.hbar}, {"mass", c.physical.mass}};
    j["absorber"] = {{"lambda_left", c.absorber.lambda_left},
                     {"lambda_right", c.absorber.lambda_right},
                     {"prefactor", std::string(to_string(c.absorber.prefactor))}};
    j["box"] = {{"half_width", c.box.half_width},
                {"modes", std::string(to_string(c.box.modes))},
                {"coefficients", c.coefficients}};
    j["packet"] = {{"width", c.packet.width},
                   {"center", c.packet.center},
                   {"wavenumber", c.packet.wavenumber},
                   {"lambda", c.packet.lambda_wall}};
    j["numeric"] = {{"grid_points", c.numeric.grid_points},
                    {"dt", c.numeric.dt},
                    {"t_max", c.numeric.t_max},
                    {"samples", c.numeric.samples},
                    {"stepper", std::string(to_string(c.numeric.stepper))},
                    {"cn_scheme", std::string(to_string(c.numeric.cn_scheme))},
                    {"halvings", c.numeric.halvings},
                    {"tail_tol", c.numeric.tail_tol}};
    j["output"] = {{"directory", c.output.directory.string()}, {"prefix", c.stem()}};
    return j;
}

void prepare_directory(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir))
        throw ConfigError({"output.directory: cannot create '" + dir.string() + "'"});
    const fs::path probe = dir / ".qabsorb_probe";
    {
        std::ofstream out(probe);
        if (!out) throw ConfigError({"output.directory: '" + dir.string() + "' is not writable"});
    }
    fs::remove(probe, ec);
}

}  // namespace

std::string RunSummary::to_json() const {
    nlohmann::ordered_json j;
    j["version"] = version;
    j["config"] = config_json(config);
    j["headline"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : headline) j["headline"][k] = v;
    j["deviations"] = nlohmann::ordered_json::array();
    for (const auto& d : deviations)
        j["deviations"].push_back({{"name", d.name}, {"value", d.value}, {"tolerance", d.tolerance},
                                   {"within", d.within()}});
    j["wall_clock_seconds"] = wall_seconds;
    j["artifacts"] = nlohmann::ordered_json::array();
    for (const auto& a : artifacts) j["artifacts"].push_back(a.string());
    return j.dump(2) + "\n";
}

RunSummary run_scenario(const ScenarioConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    prepare_directory(config.output.directory);

    Outcome outcome;
    switch (config.scenario) {
        case Scenario::BoxDecay: outcome = box_decay(config); break;
        case Scenario::TwoLevel: outcome = two_level(config); break;
        case Scenario::PacketReflect: outcome = packet_reflect(config); break;
        case Scenario::CavityCombined: outcome = cavity(config); break;
        case Scenario::Convergence: outcome = convergence(config); break;
    }
    for (const auto& [name, value] : outcome.headline)
        if (!std::isfinite(value)) throw NumericError("headline value '" + name + "' is not finite");

    RunSummary summary;
    summary.config = config;
    summary.headline = std::move(outcome.headline);
    summary.deviations = std::move(outcome.deviations);
    for (const auto& [suffix, table] : outcome.tables) {
        const fs::path path = config.output.directory / (config.stem() + suffix + ".csv");
        write_file_atomic(path, table.render());
        summary.artifacts.push_back(path);
    }
    const fs::path json_path = config.output.directory / (config.stem() + "_summary.json");
    summary.artifacts.push_back(json_path);
    summary.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_file_atomic(json_path, summary.to_json());
    return summary;
}

std::vector<RunSummary> run_batch(const std::vector<ScenarioConfig>& configs) {
    std::vector<std::future<RunSummary>> workers;
    workers.reserve(configs.size());
    for (const auto& c : configs) workers.push_back(std::async(std::launch::async, [&c] { return run_scenario(c); }));

    std::vector<RunSummary> out;
    std::exception_ptr first;
    for (auto& w : workers) {
        try {
            out.push_back(w.get());
        } catch (...) {
            if (!first) first = std::current_exception();
        }
    }
    if (first) std::rethrow_exception(first);
    return out;
}

}  // namespace qabsorb
