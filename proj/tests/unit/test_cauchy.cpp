#include "doctest.h"

#include "nsp/cauchy.hpp"
#include "nsp/error.hpp"

#include <cmath>
#include <numbers>

using namespace nsp;

TEST_CASE("constant state is unchanged over many steps")
{
    const double n = 1.2, u = 0.3, h = 2.0 * std::numbers::pi / 32.0;
    const cauchy::Domain d{h, -40, 40};
    periodic::PerturbationSpec spec;
    auto bc = [&](const ansatz::CellPair&, double, long long) { return ansatz::AnsatzPoint{n, n * u, -std::log(n)}; };
    cauchy::CauchySolver s(d, 1.0, riemann::EndState(n, u), spec, riemann::EndState(n, u), spec, bc,
                           std::vector<double>(d.size(), n), std::vector<double>(d.size(), n * u));
    const double dt = s.stable_dt(0.4, 0.25);
    for (int k = 0; k < 1000; ++k) s.step(dt);
    for (std::size_t i = 0; i < d.size(); ++i) {
        CHECK(std::abs(s.state().n[i] - n) <= 1e-12);
        CHECK(std::abs(s.state().m[i] - n * u) <= 1e-12);
    }
    CHECK(s.pb_residual() <= 1e-10);
}

TEST_CASE("cell resolution must divide the period")
{
    CHECK(cauchy::cell_points(2.0 * std::numbers::pi, 2.0 * std::numbers::pi / 64.0) == 64);
    CHECK_THROWS_AS(cauchy::cell_points(2.0 * std::numbers::pi, 0.1), InvalidArgument);
}

TEST_CASE("shock run conserves mass and momentum up to the boundary flux")
{
    const auto c = riemann::hugoniot_connect(riemann::EndState(1.1, 0.0), 1.0, 1.0);
    const auto p = profile::compute_profile(c);
    const double h = 2.0 * std::numbers::pi / 32.0;
    shifts::ShockInitialData data;
    data.profile = &p;
    data.minus.period = 2.0 * std::numbers::pi;
    data.plus.period = 1.5 * std::numbers::pi;
    data.minus.modes = {{1, 1e-3, 0.0, 0.0, 0.0}};
    data.n_bump = {0.01, 0.0, 1.0};
    const auto d = cauchy::shock_domain(c, h, 2.0, 10.0);
    auto solver = cauchy::make_shock_solver(data, d, 0.0, 0.0);
    cauchy::RunOptions ro;
    ro.T_end = 2.0;
    ro.output_interval = 0.5;
    ro.window_lo = -10.0;
    ro.window_hi = 10.0;
    const auto series = cauchy::run_shock(solver, p, ro);
    REQUIRE(series.records.size() == 5);
    for (const auto& r : series.records) {
        CHECK(r.conservation_defect <= 1e-9);
        CHECK(r.pb_residual <= 1e-8);
    }
    // a few extra nodes on each side leave the distance series unchanged
    const cauchy::Domain shifted{d.h, d.i0 - 8, d.i1 + 8};
    auto wide = cauchy::make_shock_solver(data, shifted, 0.0, 0.0);
    const auto series2 = cauchy::run_shock(wide, p, ro);
    CHECK(cauchy::series_difference(series, series2) <= 1e-6);
}
