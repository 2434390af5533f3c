#include "qabsorb/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace qabsorb {

std::string_view to_string(Scenario scenario) {
    switch (scenario) {
        case Scenario::BoxDecay: return "box-decay";
        case Scenario::TwoLevel: return "two-level";
        case Scenario::PacketReflect: return "packet-reflect";
        case Scenario::CavityCombined: return "cavity";
        case Scenario::Convergence: return "convergence";
    }
    return "unknown";
}

Scenario parse_scenario(std::string_view name) {
    for (Scenario s : {Scenario::BoxDecay, Scenario::TwoLevel, Scenario::PacketReflect, Scenario::CavityCombined,
                       Scenario::Convergence})
        if (to_string(s) == name) return s;
    throw ArgumentError("unknown scenario '" + std::string(name) + "'");
}

std::string_view to_string(ModeConvention modes) {
    return modes == ModeConvention::Harmonic ? "harmonic" : "full-well";
}

std::string_view to_string(PrefactorConvention prefactor) {
    return prefactor == PrefactorConvention::Continuum ? "continuum" : "step-product";
}

std::string_view to_string(LaplacianScheme scheme) {
    return scheme == LaplacianScheme::Second ? "second" : "compact4";
}

StepperKind parse_stepper(std::string_view name) {
    for (StepperKind k : {StepperKind::SpectralSine, StepperKind::CrankNicolson, StepperKind::FeynmanKernel})
        if (to_string(k) == name) return k;
    throw ArgumentError("unknown stepper '" + std::string(name) + "'");
}

EigenExpansion ScenarioConfig::expansion() const {
    std::vector<cplx> c(coefficients.begin(), coefficients.end());
    return EigenExpansion::normalized(box, std::move(c));
}

std::string ScenarioConfig::stem() const {
    return output.prefix.empty() ? std::string(to_string(scenario)) : output.prefix;
}

ScenarioConfig default_config(Scenario scenario) {
    ScenarioConfig c;
    c.scenario = scenario;
    switch (scenario) {
        case Scenario::BoxDecay:
            c.absorber.lambda_left = 1.0;
            c.absorber.lambda_right = 1.0;
            c.coefficients = {1.0};
            c.numeric.dt = 2e-5;
            c.numeric.t_max = 1.0;
            c.numeric.samples = 101;
            break;
        case Scenario::TwoLevel:
            // tau = pi t for lambda = 1, so t_max = 2 / pi covers tau in [0, 2].
            c.absorber.lambda_right = 1.0;
            c.coefficients = {std::sqrt(0.5), std::sqrt(0.5)};
            c.numeric.dt = 1e-5;
            c.numeric.t_max = 2.0 / kPi;
            c.numeric.samples = 201;
            break;
        case Scenario::PacketReflect:
            c.numeric.grid_points = 8193;
            c.numeric.dt = 2e-4;
            c.numeric.t_max = 8.0;
            c.numeric.samples = 201;
            break;
        case Scenario::CavityCombined:
            c.absorber.lambda_right = 1.0;
            c.coefficients = {std::sqrt(0.5), std::sqrt(0.5)};
            c.numeric.dt = 1e-4;
            c.numeric.t_max = 4.0;
            c.numeric.samples = 201;
            break;
        case Scenario::Convergence:
            c.coefficients = {std::sqrt(0.5), std::sqrt(0.5)};
            c.numeric.grid_points = 2049;
            c.numeric.dt = 1e-3;
            c.numeric.t_max = 0.1;
            c.numeric.samples = 2;
            break;
    }
    return c;
}

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(std::string_view s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = s.find(',', start);
        out.push_back(trim(s.substr(start, comma == std::string_view::npos ? s.npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

const std::map<std::string, std::set<std::string>>& schema() {
    static const std::map<std::string, std::set<std::string>> keys{
        {"physical", {"hbar", "mass"}},
        {"absorber", {"lambda_left", "lambda_right", "prefactor"}},
        {"box", {"half_width", "modes", "coefficients"}},
        {"packet", {"width", "center", "wavenumber", "lambda"}},
        {"numeric", {"grid_points", "dt", "t_max", "samples", "stepper", "cn_scheme", "halvings", "tail_tol"}},
        {"output", {"directory", "prefix"}},
    };
    return keys;
}

class Resolver {
public:
    std::vector<std::string> issues;

    void add_entry(const std::string& dotted, std::string value, const std::string& where, bool replace) {
        const auto dot = dotted.find('.');
        if (dot == std::string::npos) {
            issues.push_back(where + "key '" + dotted + "' is outside any section");
            return;
        }
        const std::string section = dotted.substr(0, dot);
        const std::string key = dotted.substr(dot + 1);
        const auto it = schema().find(section);
        if (it == schema().end()) {
            issues.push_back(where + "unknown section '" + section + "'");
            return;
        }
        if (!it->second.count(key)) {
            issues.push_back(where + "unknown key '" + dotted + "'");
            return;
        }
        if (!replace && values_.count(dotted)) {
            issues.push_back(where + "duplicate key '" + dotted + "'");
            return;
        }
        values_[dotted] = std::move(value);
    }

    void parse(std::string_view text) {
        std::string section;
        std::set<std::string> seen_sections;
        std::istringstream in{std::string(text)};
        std::string raw;
        std::size_t line_no = 0;
        while (std::getline(in, raw)) {
            ++line_no;
            const std::string where = "line " + std::to_string(line_no) + ": ";
            std::string line = raw;
            const auto hash = line.find_first_of("#;");
            if (hash != std::string::npos) line.erase(hash);
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']') {
                    issues.push_back(where + "malformed section header");
                    continue;
                }
                section = trim(std::string_view(line).substr(1, line.size() - 2));
                if (!schema().count(section)) issues.push_back(where + "unknown section '" + section + "'");
                else if (!seen_sections.insert(section).second)
                    issues.push_back(where + "section '" + section + "' appears twice");
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                issues.push_back(where + "expected 'key = value'");
                continue;
            }
            const std::string key = trim(std::string_view(line).substr(0, eq));
            const std::string value = trim(std::string_view(line).substr(eq + 1));
            if (section.empty()) {
                issues.push_back(where + "key '" + key + "' is outside any section");
                continue;
            }
            if (!schema().count(section)) continue;  // already reported
            add_entry(section + "." + key, value, where, false);
        }
    }

    void apply_override(const std::string& text) {
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            issues.push_back("override '" + text + "': expected section.key=value");
            return;
        }
        add_entry(trim(std::string_view(text).substr(0, eq)), trim(std::string_view(text).substr(eq + 1)),
                  "override: ", true);
    }

    std::optional<std::string> raw(const std::string& key) const {
        const auto it = values_.find(key);
        if (it == values_.end()) return std::nullopt;
        return it->second;
    }

    void number(const std::string& key, double& out) {
        const auto v = raw(key);
        if (!v) return;
        if (auto parsed = to_double(*v)) out = *parsed;
        else issues.push_back(key + ": expected a number, got '" + *v + "'");
    }

    void count(const std::string& key, std::size_t& out) {
        const auto v = raw(key);
        if (!v) return;
        std::size_t parsed = 0;
        const auto* end = v->data() + v->size();
        const auto res = std::from_chars(v->data(), end, parsed);
        if (res.ec != std::errc{} || res.ptr != end || v->empty())
            issues.push_back(key + ": expected a non-negative integer, got '" + *v + "'");
        else
            out = parsed;
    }

    static std::optional<double> to_double(const std::string& s) {
        double parsed = 0.0;
        const auto* end = s.data() + s.size();
        const auto res = std::from_chars(s.data(), end, parsed);
        if (s.empty() || res.ec != std::errc{} || res.ptr != end) return std::nullopt;
        return parsed;
    }

private:
    std::map<std::string, std::string> values_;
};

void require(std::vector<std::string>& issues, bool ok, const std::string& message) {
    if (!ok) issues.push_back(message);
}

bool positive(double v) { return std::isfinite(v) && v > 0.0; }
bool non_negative(double v) { return std::isfinite(v) && v >= 0.0; }

}  // namespace

ScenarioConfig validate_config(std::string_view text, Scenario scenario, const std::vector<std::string>& overrides) {
    Resolver r;
    r.parse(text);
    for (const auto& o : overrides) r.apply_override(o);

    ScenarioConfig c = default_config(scenario);
    auto& issues = r.issues;

    r.number("physical.hbar", c.physical.hbar);
    r.number("physical.mass", c.physical.mass);
    r.number("absorber.lambda_left", c.absorber.lambda_left);
    r.number("absorber.lambda_right", c.absorber.lambda_right);
    if (auto v = r.raw("absorber.prefactor")) {
        if (*v == "continuum") c.absorber.prefactor = PrefactorConvention::Continuum;
        else if (*v == "step-product") c.absorber.prefactor = PrefactorConvention::StepProduct;
        else issues.push_back("absorber.prefactor: expected continuum or step-product, got '" + *v + "'");
    }

    r.number("box.half_width", c.box.half_width);
    if (auto v = r.raw("box.modes")) {
        std::set<ModeConvention> requested;
        for (const auto& item : split_list(*v)) {
            if (item == "harmonic") requested.insert(ModeConvention::Harmonic);
            else if (item == "full-well") requested.insert(ModeConvention::FullWell);
            else issues.push_back("box.modes: expected harmonic or full-well, got '" + item + "'");
        }
        if (requested.size() > 1) issues.push_back("box.modes: harmonic and full-well are mutually exclusive");
        else if (requested.size() == 1) c.box.modes = *requested.begin();
    }
    if (auto v = r.raw("box.coefficients")) {
        std::vector<double> coeffs;
        bool ok = true;
        for (const auto& item : split_list(*v)) {
            if (auto d = Resolver::to_double(item)) coeffs.push_back(*d);
            else {
                issues.push_back("box.coefficients: expected a number, got '" + item + "'");
                ok = false;
            }
        }
        if (ok) c.coefficients = std::move(coeffs);
    }

    r.number("packet.width", c.packet.width);
    r.number("packet.center", c.packet.center);
    r.number("packet.wavenumber", c.packet.wavenumber);
    r.number("packet.lambda", c.packet.lambda_wall);

    r.count("numeric.grid_points", c.numeric.grid_points);
    r.number("numeric.dt", c.numeric.dt);
    r.number("numeric.t_max", c.numeric.t_max);
    r.count("numeric.samples", c.numeric.samples);
    r.count("numeric.halvings", c.numeric.halvings);
    r.number("numeric.tail_tol", c.numeric.tail_tol);
    if (auto v = r.raw("numeric.stepper")) {
        try {
            c.numeric.stepper = parse_stepper(*v);
        } catch (const ArgumentError&) {
            issues.push_back("numeric.stepper: expected spectral, cn or feynman, got '" + *v + "'");
        }
    }
    if (auto v = r.raw("numeric.cn_scheme")) {
        if (*v == "second") c.numeric.cn_scheme = LaplacianScheme::Second;
        else if (*v == "compact4") c.numeric.cn_scheme = LaplacianScheme::Compact4;
        else issues.push_back("numeric.cn_scheme: expected second or compact4, got '" + *v + "'");
    }

    if (auto v = r.raw("output.directory")) {
        if (v->empty()) issues.push_back("output.directory: must not be empty");
        else c.output.directory = *v;
    }
    if (auto v = r.raw("output.prefix")) {
        if (v->find_first_of("/\\") != std::string::npos) issues.push_back("output.prefix: must not contain a path separator");
        else c.output.prefix = *v;
    }

    require(issues, positive(c.physical.hbar), "physical.hbar: must be positive");
    require(issues, positive(c.physical.mass), "physical.mass: must be positive");
    require(issues, non_negative(c.absorber.lambda_left), "absorber.lambda_left: must be non-negative");
    require(issues, non_negative(c.absorber.lambda_right), "absorber.lambda_right: must be non-negative");
    require(issues, positive(c.box.half_width), "box.half_width: must be positive");

    const bool uses_box = scenario != Scenario::PacketReflect;
    if (uses_box) {
        double norm = 0.0;
        std::size_t nonzero = 0;
        bool finite = true;
        for (double a : c.coefficients) {
            finite = finite && std::isfinite(a);
            norm += a * a;
            if (a != 0.0) ++nonzero;
        }
        require(issues, finite, "box.coefficients: must be finite");
        require(issues, !c.coefficients.empty() && norm > 0.0, "box.coefficients: need at least one nonzero entry");
        if (scenario == Scenario::TwoLevel)
            require(issues, nonzero == 2, "box.coefficients: two-level needs exactly two nonzero entries");
    }

    const bool uses_packet = scenario == Scenario::PacketReflect || scenario == Scenario::CavityCombined;
    if (uses_packet) {
        require(issues, positive(c.packet.width), "packet.width: must be positive");
        require(issues, std::isfinite(c.packet.center) && c.packet.center < 0.0, "packet.center: must be negative");
        require(issues, positive(c.packet.wavenumber), "packet.wavenumber: must be positive");
        require(issues, non_negative(c.packet.lambda_wall), "packet.lambda: must be non-negative");
        require(issues, positive(c.numeric.tail_tol), "numeric.tail_tol: must be positive");
    }

    require(issues, c.numeric.grid_points >= SpatialGrid::min_points,
            "numeric.grid_points: must be at least " + std::to_string(SpatialGrid::min_points));
    require(issues, positive(c.numeric.dt), "numeric.dt: must be positive");
    require(issues, positive(c.numeric.t_max), "numeric.t_max: must be positive");
    if (positive(c.numeric.dt) && positive(c.numeric.t_max))
        require(issues, c.numeric.dt <= c.numeric.t_max, "numeric.dt: must not exceed numeric.t_max");
    require(issues, c.numeric.samples >= 2, "numeric.samples: must be at least 2");
    if (scenario == Scenario::Convergence)
        require(issues, c.numeric.halvings >= 1, "numeric.halvings: must be at least 1");

    if (!issues.empty()) throw ConfigError(std::move(issues));
    return c;
}

ScenarioConfig load_config(const std::filesystem::path& path, Scenario scenario,
                           const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError({"cannot read configuration file '" + path.string() + "'"});
    std::stringstream buffer;
    buffer << in.rdbuf();
    return validate_config(buffer.str(), scenario, overrides);
}

}  // namespace qabsorb
