// qabsorb: run a named scenario and write its CSV curves and JSON summary.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical or convergence failure.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "qabsorb/scenario.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

struct Request {
    std::string config_path;
    std::string out_dir;
    std::vector<std::string> overrides;
    std::string stepper;
};

void print_summary(const qabsorb::RunSummary& s) {
    std::cout << "scenario " << qabsorb::to_string(s.config.scenario) << '\n';
    for (const auto& [name, value] : s.headline) std::cout << "  " << name << " = " << qabsorb::format_number(value) << '\n';
    for (const auto& d : s.deviations)
        std::cout << "  " << d.name << " = " << qabsorb::format_number(d.value) << " (tolerance "
                  << qabsorb::format_number(d.tolerance) << ", " << (d.within() ? "within" : "exceeded") << ")\n";
    for (const auto& a : s.artifacts) std::cout << "  wrote " << a.string() << '\n';
}

int run(qabsorb::Scenario scenario, const Request& req) {
    std::vector<std::string> overrides = req.overrides;
    if (!req.stepper.empty()) overrides.push_back("numeric.stepper=" + req.stepper);
    if (!req.out_dir.empty()) overrides.push_back("output.directory=" + req.out_dir);

    const qabsorb::ScenarioConfig config = req.config_path.empty()
                                               ? qabsorb::validate_config("", scenario, overrides)
                                               : qabsorb::load_config(req.config_path, scenario, overrides);
    print_summary(qabsorb::run_scenario(config));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Confined wave propagation with absorbing walls"};
    app.require_subcommand(1);

    const std::vector<std::pair<qabsorb::Scenario, std::string>> commands{
        {qabsorb::Scenario::BoxDecay, "Survival of a box eigenstate superposition"},
        {qabsorb::Scenario::TwoLevel, "Beat-modulated decay of a two-level superposition"},
        {qabsorb::Scenario::PacketReflect, "Gaussian packet reflected by one absorbing wall"},
        {qabsorb::Scenario::CavityCombined, "Product of transverse box decay and axial packet survival"},
        {qabsorb::Scenario::Convergence, "Stepper error against dt and grid spacing"},
    };

    Request req;
    std::optional<qabsorb::Scenario> chosen;
    for (const auto& [scenario, help] : commands) {
        auto* sub = app.add_subcommand(std::string(qabsorb::to_string(scenario)), help);
        sub->add_option("--config", req.config_path, "Key-value configuration file")->check(CLI::ExistingFile);
        sub->add_option("--out", req.out_dir, "Output directory");
        sub->add_option("--override", req.overrides, "section.key=value, may repeat");
        sub->add_option("--stepper", req.stepper, "Time stepper")
            ->check(CLI::IsMember({"spectral", "cn", "feynman"}));
        sub->callback([&chosen, s = scenario] { chosen = s; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        return run(*chosen, req);
    } catch (const qabsorb::ConfigError& e) {
        std::cerr << e.what() << '\n';
        return kExitConfig;
    } catch (const qabsorb::ConfigurationError& e) {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "run failed: " << e.what() << '\n';
        return kExitNumeric;
    }
}
