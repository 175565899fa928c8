#include "doctest.h"

#include "nsp/error.hpp"
#include "nsp_app/assets.hpp"
#include "nsp_app/config.hpp"
#include "nsp_app/output.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace nsp;
using namespace nsp::app;

namespace {

std::string error_of(const std::string& text)
{
    try {
        config_from_raw(parse_text(text));
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_CASE("config parses sections and comments")
{
    const auto c = config_from_raw(parse_text("# shock run\n[scenario]\ntype = shock\nA = 1.0\n\n[solver]\nT_end = 20 # short\n"));
    CHECK(c.scenario == Scenario::Shock);
    CHECK(c.T_end == 20.0);
    CHECK(c.nu_value() == doctest::Approx(1e-3).epsilon(1e-12));
}

TEST_CASE("unknown keys are rejected with their name")
{
    const auto e = error_of("[solver]\nT_end = 20\nbogus = 1\n");
    CHECK(e.find("solver.bogus") != std::string::npos);
    CHECK(e.find("line 3") != std::string::npos);
}

TEST_CASE("duplicate keys are rejected")
{
    CHECK_THROWS_AS(parse_text("[grid]\nn_points = 64\nn_points = 128\n"), ConfigError);
}

TEST_CASE("perturbations violating the smallness condition are rejected")
{
    const auto e = error_of("[perturbation]\nnu = 0.05\n");
    CHECK(e.find("perturbation.nu") != std::string::npos);
    CHECK(e.find("smallness") != std::string::npos);
}

TEST_CASE("incommensurate periods get a suggested resolution")
{
    const auto e = error_of("[grid]\nn_points = 50\n");
    CHECK(e.find("grid.n_points") != std::string::npos);
    CHECK(e.find("suggested n_points = 52") != std::string::npos);
}

TEST_CASE("bad values name their key")
{
    CHECK(error_of("[solver]\ncfl_parabolic = 0.9\n").find("solver.cfl_parabolic") != std::string::npos);
    CHECK(error_of("[bump]\nn_amplitude = 0.5\n").find("bump.n_amplitude") != std::string::npos);
    CHECK(error_of("[states]\nn_plus = 1.5\n").find("states.n_plus") != std::string::npos);
    CHECK(error_of("[minus]\nmodes = 1 2\n").find("minus.modes") != std::string::npos);
}

TEST_CASE("random phases are reproducible from the seed")
{
    const std::string text = "[perturbation]\nrandom_phases = true\nseed = 42\n";
    const auto a = config_from_raw(parse_text(text));
    const auto b = config_from_raw(parse_text(text));
    CHECK(a.minus.modes[0].phase_n == b.minus.modes[0].phase_n);
    CHECK(a.plus.modes[0].phase_m == b.plus.modes[0].phase_m);
    const auto c = config_from_raw(parse_text("[perturbation]\nrandom_phases = true\nseed = 43\n"));
    CHECK(a.minus.modes[0].phase_n != c.minus.modes[0].phase_n);
}

TEST_CASE("resolved config round-trips through its description")
{
    ExperimentConfig c = default_config(Scenario::Rarefaction);
    validate(c);
    const auto again = config_from_raw(parse_text(describe(c)));
    CHECK(describe(again) == describe(c));
}

TEST_CASE("CSV output is deterministic and exact")
{
    CsvTable t({"t", "value"});
    t.add_row({0.1, 1.0 / 3.0});
    t.add_row({0.2, -2e-17});
    CHECK(t.str() == t.str());
    CHECK(t.str() == "t,value\n0.10000000000000001,0.33333333333333331\n0.20000000000000001,-2.0000000000000001e-17\n");
    CHECK_THROWS_AS(t.add_row({1.0}), InvalidArgument);
}

TEST_CASE(".dat output keeps its time column increasing")
{
    const auto dir = std::filesystem::temp_directory_path() / "nsp_unit_dat";
    std::vector<double> t, y;
    for (int k = 0; k <= 10; ++k) {
        t.push_back(0.5 * k);
        y.push_back(std::exp(-0.5 * k));
    }
    write_dat(dir / "series.dat", t, y, "t y");
    std::istringstream in(slurp(dir / "series.dat"));
    std::string line;
    std::getline(in, line);
    CHECK(line == "# t y");
    double prev = -1.0, a = 0.0, b = 0.0;
    int rows = 0;
    while (in >> a >> b) {
        CHECK(a > prev);
        prev = a;
        ++rows;
    }
    CHECK(rows == 11);
    std::filesystem::remove_all(dir);
}

TEST_CASE("SVG chart holds one polyline per curve")
{
    Chart ch{"decay", "t", "norm", true, {{"a", {0, 1, 2}, {1, 0.1, 0.01}}, {"b", {0, 1, 2}, {2, 0.5, 0.1}}}, {{"floor", 1e-3}}};
    const std::string svg = render_svg(ch);
    std::size_t count = 0;
    for (std::size_t pos = svg.find("<polyline"); pos != std::string::npos; pos = svg.find("<polyline", pos + 1)) ++count;
    CHECK(count == 2);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("floor") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("initial antiderivatives vanish at the right end")
{
    ExperimentConfig c = default_config(Scenario::Shock);
    c.n_points = 128;
    c.T_end = 10.0;
    validate(c);
    const auto a = build_shock_assets(c);
    // only the t = 0 record matters, so the line run is kept short
    c.T_end = 0.5;
    c.t_transient = 0.0;
    const auto run = run_shock_scenario(c, *a, 1.0);
    const auto& r0 = run.series.records.front();
    CHECK(std::abs(r0.anti_phi_end) <= 1e-8);
    CHECK(std::abs(r0.anti_psi_end) <= 1e-8);
    CHECK(run.initial_h2 <= c.eps0);
}
