#include "nsp_app/config.hpp"

#include "nsp/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

namespace nsp::app {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v)
{
    double out = 0.0;
    const auto* end = v.data() + v.size();
    const auto [p, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || p != end || !std::isfinite(out))
        throw ConfigError(key + ": expected a number, got '" + v + "'");
    return out;
}

std::size_t to_size(const std::string& key, const std::string& v)
{
    std::size_t out = 0;
    const auto* end = v.data() + v.size();
    const auto [p, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || p != end) throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
    return out;
}

bool to_bool(const std::string& key, const std::string& v)
{
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

using Setter = std::function<void(ExperimentConfig&, const std::string& key, const std::string& value)>;

const std::map<std::string, Setter>& setters()
{
    static const std::map<std::string, Setter> table = {
        {"scenario.type",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             if (v == "shock") c.scenario = Scenario::Shock;
             else if (v == "rarefaction") c.scenario = Scenario::Rarefaction;
             else throw ConfigError(k + ": expected shock or rarefaction, got '" + v + "'");
         }},
        {"scenario.A", [](auto& c, auto& k, auto& v) { c.A = to_double(k, v); }},
        {"states.n_minus", [](auto& c, auto& k, auto& v) { c.n_minus = to_double(k, v); }},
        {"states.u_minus", [](auto& c, auto& k, auto& v) { c.u_minus = to_double(k, v); }},
        {"states.n_plus", [](auto& c, auto& k, auto& v) { c.n_plus = to_double(k, v); }},
        {"states.delta", [](auto& c, auto& k, auto& v) { c.delta = to_double(k, v); }},
        {"states.delta_r", [](auto& c, auto& k, auto& v) { c.delta_r = to_double(k, v); }},
        {"states.epsilon", [](auto& c, auto& k, auto& v) { c.epsilon = to_double(k, v); }},
        {"perturbation.nu", [](auto& c, auto& k, auto& v) { c.nu = to_double(k, v); }},
        {"perturbation.gamma0", [](auto& c, auto& k, auto& v) { c.gamma0 = to_double(k, v); }},
        {"perturbation.eps0", [](auto& c, auto& k, auto& v) { c.eps0 = to_double(k, v); }},
        {"perturbation.random_phases", [](auto& c, auto& k, auto& v) { c.random_phases = to_bool(k, v); }},
        {"perturbation.seed", [](auto& c, auto& k, auto& v) { c.seed = to_size(k, v); }},
        {"minus.period", [](auto& c, auto& k, auto& v) { c.minus.period = to_double(k, v); }},
        {"minus.modes", [](auto& c, auto& k, auto& v) { c.minus.modes = parse_modes(k, v); }},
        {"plus.period", [](auto& c, auto& k, auto& v) { c.plus.period = to_double(k, v); }},
        {"plus.modes", [](auto& c, auto& k, auto& v) { c.plus.modes = parse_modes(k, v); }},
        {"bump.n_amplitude", [](auto& c, auto& k, auto& v) { c.n_bump.amplitude = to_double(k, v); }},
        {"bump.m_amplitude", [](auto& c, auto& k, auto& v) { c.m_bump.amplitude = to_double(k, v); }},
        {"bump.center",
         [](auto& c, auto& k, auto& v) { c.n_bump.center = c.m_bump.center = to_double(k, v); }},
        {"bump.width", [](auto& c, auto& k, auto& v) { c.n_bump.width = c.m_bump.width = to_double(k, v); }},
        {"bump.max_amplitude", [](auto& c, auto& k, auto& v) { c.bump_max = to_double(k, v); }},
        {"bump.zero_mass", [](auto& c, auto& k, auto& v) { c.zero_mass = to_bool(k, v); }},
        {"grid.n_points", [](auto& c, auto& k, auto& v) { c.n_points = to_size(k, v); }},
        {"grid.profile_spacing", [](auto& c, auto& k, auto& v) { c.profile_spacing = to_double(k, v); }},
        {"grid.window", [](auto& c, auto& k, auto& v) { c.window = to_double(k, v); }},
        {"grid.domain_factor", [](auto& c, auto& k, auto& v) { c.domain_factor = to_double(k, v); }},
        {"solver.cfl_hyperbolic", [](auto& c, auto& k, auto& v) { c.cfl_hyperbolic = to_double(k, v); }},
        {"solver.cfl_parabolic", [](auto& c, auto& k, auto& v) { c.cfl_parabolic = to_double(k, v); }},
        {"solver.pb_tol", [](auto& c, auto& k, auto& v) { c.pb_tol = to_double(k, v); }},
        {"solver.T_end", [](auto& c, auto& k, auto& v) { c.T_end = to_double(k, v); }},
        {"solver.output_interval", [](auto& c, auto& k, auto& v) { c.output_interval = to_double(k, v); }},
        {"solver.cell_output_interval",
         [](auto& c, auto& k, auto& v) { c.cell_output_interval = to_double(k, v); }},
        {"solver.t_transient", [](auto& c, auto& k, auto& v) { c.t_transient = to_double(k, v); }},
        {"output.dir", [](auto& c, auto&, auto& v) { c.out_dir = v; }},
        {"output.svg", [](auto& c, auto& k, auto& v) { c.svg = to_bool(k, v); }},
    };
    return table;
}

bool is_multiple(double a, double b)
{
    const double q = a / b;
    return std::abs(q - std::round(q)) <= 1e-9 * std::max(1.0, q) && std::round(q) >= 1.0;
}

void require(bool ok, const std::string& key, const std::string& what)
{
    if (!ok) throw ConfigError(key + ": " + what);
}

std::string num(double x)
{
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

void scale_modes(periodic::PerturbationSpec& s, double f)
{
    for (auto& m : s.modes) {
        m.amp_n *= f;
        m.amp_m *= f;
    }
}

}  // namespace

RawConfig parse_text(const std::string& text, const std::string& origin)
{
    RawConfig raw;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3)
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string full = section.empty() ? key : section + "." + key;
        if (key.empty()) throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        if (raw.values.count(full))
            throw ConfigError(full + ": given twice (lines " + std::to_string(raw.lines[full]) + " and " +
                              std::to_string(lineno) + ")");
        raw.values[full] = trim(line.substr(eq + 1));
        raw.lines[full] = lineno;
    }
    return raw;
}

std::vector<periodic::Mode> parse_modes(const std::string& key, const std::string& text)
{
    std::vector<periodic::Mode> out;
    std::istringstream groups(text);
    std::string group;
    while (std::getline(groups, group, ';')) {
        group = trim(group);
        if (group.empty()) continue;
        std::istringstream f(group);
        std::vector<std::string> tok;
        for (std::string t; f >> t;) tok.push_back(t);
        if (tok.size() != 5)
            throw ConfigError(key + ": each mode needs 5 numbers (k amp_n amp_m phase_n phase_m), got '" + group + "'");
        periodic::Mode m;
        const std::size_t k = to_size(key, tok[0]);
        if (k < 1) throw ConfigError(key + ": wave number must be at least 1");
        m.k = static_cast<int>(k);
        m.amp_n = to_double(key, tok[1]);
        m.amp_m = to_double(key, tok[2]);
        m.phase_n = to_double(key, tok[3]);
        m.phase_m = to_double(key, tok[4]);
        out.push_back(m);
    }
    return out;
}

std::string format_modes(const std::vector<periodic::Mode>& modes)
{
    std::string s;
    for (const auto& m : modes) {
        if (!s.empty()) s += "; ";
        s += std::to_string(m.k) + " " + num(m.amp_n) + " " + num(m.amp_m) + " " + num(m.phase_n) + " " +
             num(m.phase_m);
    }
    return s;
}

std::size_t ExperimentConfig::points_plus() const
{
    return static_cast<std::size_t>(std::llround(plus.period / spacing()));
}

double ExperimentConfig::strength() const
{
    return scenario == Scenario::Shock ? n_minus - n_plus.value_or(n_minus - delta) : delta_r;
}

riemann::ShockConnection ExperimentConfig::shock() const
{
    return riemann::hugoniot_connect(riemann::EndState(n_minus, u_minus), n_plus.value_or(n_minus - delta), A);
}

riemann::RarefactionEndpoints ExperimentConfig::rarefaction() const
{
    return riemann::make_rarefaction_by_strength(riemann::EndState(n_minus, u_minus), delta_r, A);
}

double ExperimentConfig::nu_value() const
{
    return std::max(periodic::perturbation_size(minus, points_minus()),
                    periodic::perturbation_size(plus, points_plus()));
}

std::size_t suggest_points(double period_minus, double period_plus, std::size_t n_points, std::size_t max_points)
{
    for (std::size_t n = std::max<std::size_t>(n_points, 8); n <= max_points; ++n)
        if (is_multiple(period_plus, period_minus / static_cast<double>(n))) return n;
    return 0;
}

ExperimentConfig default_config(Scenario s)
{
    ExperimentConfig c;
    c.scenario = s;
    if (s == Scenario::Rarefaction) {
        c.n_minus = 1.0;
        c.T_end = 100.0;
        c.output_interval = 1.0;
    }
    c.minus.period = 2.0 * std::numbers::pi;
    c.plus.period = 1.5 * std::numbers::pi;
    c.minus.modes = {{1, 1.0, 0.5, 0.3, 1.1}};
    c.plus.modes = {{1, 0.5, 1.0, -0.7, 0.4}};
    c.nu = 1e-3;
    return c;
}

ExperimentConfig config_from_raw(const RawConfig& raw)
{
    Scenario s = Scenario::Shock;
    if (auto it = raw.values.find("scenario.type"); it != raw.values.end() && it->second == "rarefaction")
        s = Scenario::Rarefaction;
    ExperimentConfig c = default_config(s);
    const auto& table = setters();
    for (const auto& [key, value] : raw.values) {
        const auto it = table.find(key);
        if (it == table.end()) {
            const auto line = raw.lines.find(key);
            throw ConfigError(key + ": unknown key" +
                              (line != raw.lines.end() ? " (line " + std::to_string(line->second) + ")" : ""));
        }
        it->second(c, key, value);
    }
    if (c.random_phases) {
        std::mt19937_64 rng(c.seed);
        std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
        for (auto* spec : {&c.minus, &c.plus})
            for (auto& m : spec->modes) {
                m.phase_n = phase(rng);
                m.phase_m = phase(rng);
            }
        c.random_phases = false;
    }
    validate(c);
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return config_from_raw(parse_text(buf.str(), path.string()));
}

void refine(ExperimentConfig& c, int factor)
{
    if (factor < 1) throw ConfigError("refine: factor must be a positive integer");
    c.n_points *= static_cast<std::size_t>(factor);
    c.profile_spacing /= factor;
    validate(c);
}

void validate(ExperimentConfig& c)
{
    require(c.A > 0.0, "scenario.A", "must be positive");
    require(c.n_minus > 0.0, "states.n_minus", "must be positive");
    if (c.scenario == Scenario::Shock) {
        const double np = c.n_plus.value_or(c.n_minus - c.delta);
        require(np > 0.0 && np < c.n_minus, c.n_plus ? "states.n_plus" : "states.delta",
                "a 2-shock needs 0 < n_plus < n_minus");
    } else {
        require(c.delta_r > 0.0, "states.delta_r", "must be positive");
        require(c.epsilon > 0.0, "states.epsilon", "must be positive");
    }
    require(c.minus.period > 0.0, "minus.period", "must be positive");
    require(c.plus.period > 0.0, "plus.period", "must be positive");
    require(c.n_points >= 8, "grid.n_points", "must be at least 8");
    if (!is_multiple(c.plus.period, c.spacing())) {
        const std::size_t n = suggest_points(c.minus.period, c.plus.period, c.n_points);
        throw ConfigError("grid.n_points: plus.period = " + num(c.plus.period) + " is not a whole multiple of the line spacing " +
                          num(c.spacing()) +
                          (n ? "; suggested n_points = " + std::to_string(n)
                             : "; the two periods have no common spacing up to 65536 points"));
    }
    require(c.profile_spacing > 0.0, "grid.profile_spacing", "must be positive");
    require(c.window > 0.0, "grid.window", "must be positive");
    require(c.domain_factor >= 1.0, "grid.domain_factor", "must be at least 1");
    require(c.cfl_hyperbolic > 0.0 && c.cfl_hyperbolic <= 1.0, "solver.cfl_hyperbolic", "must lie in (0, 1]");
    require(c.cfl_parabolic > 0.0 && c.cfl_parabolic <= 0.5, "solver.cfl_parabolic", "must lie in (0, 0.5]");
    require(c.pb_tol > 0.0 && c.pb_tol <= 1e-8, "solver.pb_tol", "must lie in (0, 1e-8]");
    require(c.cell_output_interval > 0.0, "solver.cell_output_interval", "must be positive");
    require(is_multiple(c.output_interval, c.cell_output_interval), "solver.output_interval",
            "must be a whole multiple of solver.cell_output_interval");
    require(is_multiple(c.T_end, c.output_interval), "solver.T_end", "must be a whole multiple of solver.output_interval");
    require(is_multiple(c.T_end, 2.0 * c.cell_output_interval), "solver.T_end",
            "must be an even number of cell output intervals");
    require(c.t_transient >= 0.0 && c.t_transient < c.T_end, "solver.t_transient", "must lie in [0, T_end)");
    try {
        c.minus.validate();
    } catch (const Error& e) {
        throw ConfigError(std::string("minus.modes: ") + e.what());
    }
    try {
        c.plus.validate();
    } catch (const Error& e) {
        throw ConfigError(std::string("plus.modes: ") + e.what());
    }

    if (c.nu) {
        require(*c.nu >= 0.0, "perturbation.nu", "must be non-negative");
        const double now = c.nu_value();
        if (*c.nu == 0.0) {
            scale_modes(c.minus, 0.0);
            scale_modes(c.plus, 0.0);
        } else {
            require(now > 0.0, "perturbation.nu", "positive nu needs at least one nonzero mode amplitude");
            scale_modes(c.minus, *c.nu / now);
            scale_modes(c.plus, *c.nu / now);
        }
    }
    const double nu = c.nu_value();
    require(c.gamma0 > 0.0, "perturbation.gamma0", "must be positive");
    if (nu > c.gamma0 * c.strength())
        throw ConfigError("perturbation.nu: nu = " + num(nu) + " exceeds gamma0 * delta = " +
                          num(c.gamma0 * c.strength()) + " (smallness condition of the stability theorem)");
    require(c.eps0 > 0.0, "perturbation.eps0", "must be positive");
    require(std::abs(c.n_bump.amplitude) <= c.bump_max, "bump.n_amplitude",
            "exceeds bump.max_amplitude = " + num(c.bump_max));
    require(std::abs(c.m_bump.amplitude) <= c.bump_max, "bump.m_amplitude",
            "exceeds bump.max_amplitude = " + num(c.bump_max));
    require(c.n_bump.width > 0.0, "bump.width", "must be positive");
}

std::string describe(const ExperimentConfig& c)
{
    std::ostringstream os;
    os << "scenario.type = " << (c.scenario == Scenario::Shock ? "shock" : "rarefaction") << "\n"
       << "scenario.A = " << num(c.A) << "\n"
       << "states.n_minus = " << num(c.n_minus) << "\n"
       << "states.u_minus = " << num(c.u_minus) << "\n";
    if (c.scenario == Scenario::Shock)
        os << "states.n_plus = " << num(c.n_plus.value_or(c.n_minus - c.delta)) << "\n";
    else
        os << "states.delta_r = " << num(c.delta_r) << "\n"
           << "states.epsilon = " << num(c.epsilon) << "\n";
    os << "perturbation.nu = " << num(c.nu_value()) << "\n"
       << "perturbation.gamma0 = " << num(c.gamma0) << "\n"
       << "perturbation.eps0 = " << num(c.eps0) << "\n"
       << "minus.period = " << num(c.minus.period) << "\n"
       << "minus.modes = " << format_modes(c.minus.modes) << "\n"
       << "plus.period = " << num(c.plus.period) << "\n"
       << "plus.modes = " << format_modes(c.plus.modes) << "\n"
       << "bump.n_amplitude = " << num(c.n_bump.amplitude) << "\n"
       << "bump.m_amplitude = " << num(c.m_bump.amplitude) << "\n"
       << "bump.center = " << num(c.n_bump.center) << "\n"
       << "bump.width = " << num(c.n_bump.width) << "\n"
       << "bump.zero_mass = " << (c.zero_mass ? "true" : "false") << "\n"
       << "grid.n_points = " << c.n_points << "\n"
       << "# grid.spacing = " << num(c.spacing()) << "\n"
       << "grid.profile_spacing = " << num(c.profile_spacing) << "\n"
       << "grid.window = " << num(c.window) << "\n"
       << "grid.domain_factor = " << num(c.domain_factor) << "\n"
       << "solver.cfl_hyperbolic = " << num(c.cfl_hyperbolic) << "\n"
       << "solver.cfl_parabolic = " << num(c.cfl_parabolic) << "\n"
       << "solver.pb_tol = " << num(c.pb_tol) << "\n"
       << "solver.T_end = " << num(c.T_end) << "\n"
       << "solver.output_interval = " << num(c.output_interval) << "\n"
       << "solver.cell_output_interval = " << num(c.cell_output_interval) << "\n"
       << "solver.t_transient = " << num(c.t_transient) << "\n";
    return os.str();
}

}  // namespace nsp::app
