#pragma once

#include "nsp/periodic.hpp"
#include "nsp/riemann.hpp"
#include "nsp/shifts.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

namespace nsp::app {

/// Parsed `key = value` text grouped by `[section]`, keyed "section.key".
struct RawConfig {
    std::map<std::string, std::string> values;
    std::map<std::string, int> lines;
};

RawConfig parse_text(const std::string& text, const std::string& origin = "<config>");

enum class Scenario { Shock, Rarefaction };

struct ExperimentConfig {
    Scenario scenario = Scenario::Shock;
    double A = 1.0;

    // [states]
    double n_minus = 1.1, u_minus = 0.0;
    std::optional<double> n_plus;  ///< shock: defaults to n_minus - delta
    double delta = 0.1;
    double delta_r = 0.2;
    double epsilon = 0.1;

    // [perturbation], [minus], [plus]
    periodic::PerturbationSpec minus, plus;
    std::optional<double> nu;  ///< rescales both sides so the larger H3 size equals nu
    double gamma0 = 0.1;
    double eps0 = 0.1;
    bool random_phases = false;
    std::uint64_t seed = 0;

    // [bump]
    shifts::Bump n_bump, m_bump;
    double bump_max = 0.05;
    bool zero_mass = true;

    // [grid]
    std::size_t n_points = 64;  ///< line nodes per minus period
    double profile_spacing = 0.05;
    double window = 20.0;
    double domain_factor = 1.0;

    // [solver]
    double cfl_hyperbolic = 0.4, cfl_parabolic = 0.25;
    double pb_tol = 1e-11;
    double T_end = 40.0;
    double output_interval = 0.5;
    double cell_output_interval = 0.05;
    double t_transient = 1.0;

    // [output]
    std::filesystem::path out_dir = "out";
    bool svg = true;

    double spacing() const { return minus.period / static_cast<double>(n_points); }
    std::size_t points_minus() const { return n_points; }
    std::size_t points_plus() const;
    /// Wave strength entering the smallness condition.
    double strength() const;
    riemann::ShockConnection shock() const;
    riemann::RarefactionEndpoints rarefaction() const;
    /// Larger discrete H3 size of the two periodic perturbations.
    double nu_value() const;
};

/// Builds and validates a config. Rejections name the offending key.
ExperimentConfig config_from_raw(const RawConfig& raw);
ExperimentConfig load_config(const std::filesystem::path& path);
/// Default config with every key at its default.
ExperimentConfig default_config(Scenario s);

/// Multiplies the line and cell resolution by factor and divides the profile
/// spacing by it.
void refine(ExperimentConfig& c, int factor);

/// Checks ranges, divisibility, smallness. Throws ConfigError.
void validate(ExperimentConfig& c);

/// Smallest n >= n_points making both periods whole multiples of the line
/// spacing, or 0 if none exists up to max_points.
std::size_t suggest_points(double period_minus, double period_plus, std::size_t n_points,
                           std::size_t max_points = 65536);

/// "k amp_n amp_m phase_n phase_m; ..." for one side.
std::vector<periodic::Mode> parse_modes(const std::string& key, const std::string& text);
std::string format_modes(const std::vector<periodic::Mode>& modes);

/// key = value listing of the resolved config.
std::string describe(const ExperimentConfig& c);

}  // namespace nsp::app
