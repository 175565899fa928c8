#include "doctest.h"

#include "nsp/periodic.hpp"
#include "nsp/scheme.hpp"

#include <cmath>
#include <numbers>
#include <vector>

using namespace nsp;

namespace {

template <class Exact, class Density>
double pb_error(std::size_t points, Exact exact, Density density)
{
    const double h = 2.0 * std::numbers::pi / static_cast<double>(points);
    std::vector<double> n(points), phi(points, 0.0);
    for (std::size_t i = 0; i < points; ++i) n[i] = density(h * static_cast<double>(i));
    const double res = scheme::solve_pb_periodic(n, phi, h, 1e-14);
    CHECK(res <= 1e-12);
    double err = 0.0;
    for (std::size_t i = 0; i < points; ++i) err = std::max(err, std::abs(phi[i] - exact(h * static_cast<double>(i))));
    return err;
}

}  // namespace

TEST_CASE("Poisson-Boltzmann manufactured solution converges at second order")
{
    auto star = [](double x) { return 0.3 * std::sin(x) + 0.1 * std::cos(2.0 * x); };
    auto dens = [&](double x) { return -0.3 * std::sin(x) - 0.4 * std::cos(2.0 * x) + std::exp(-star(x)); };
    const double e1 = pb_error(64, star, dens), e2 = pb_error(128, star, dens);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));
    CHECK(e2 <= std::pow(2.0 * std::numbers::pi / 128.0, 2));
}

TEST_CASE("Poisson-Boltzmann small forcing follows the linearised Fourier response")
{
    const double a = 1e-6;
    for (int k : {1, 3}) {
        auto lin = [&](double x) { return -a * std::cos(k * x) / (1.0 + k * k); };
        auto dens = [&](double x) { return 1.0 + a * std::cos(k * x); };
        const double e1 = pb_error(64, lin, dens) / a, e2 = pb_error(128, lin, dens) / a;
        CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));
    }
}

TEST_CASE("constant cell is a fixed point")
{
    periodic::PerturbationSpec spec;
    periodic::PeriodicSolver s(riemann::EndState(1.3, 0.4), spec, 1.0, 32);
    const double dt = s.stable_dt(0.4, 0.25);
    for (int i = 0; i < 200; ++i) s.step(dt);
    for (std::size_t i = 0; i < 32; ++i) {
        CHECK(std::abs(s.state().n[i] - 1.3) <= 1e-13);
        CHECK(std::abs(s.state().m[i] - 1.3 * 0.4) <= 1e-13);
        CHECK(std::abs(s.state().phi[i] + std::log(1.3)) <= 1e-13);
    }
}

TEST_CASE("cell averages are conserved and the perturbation decays")
{
    periodic::PerturbationSpec spec;
    spec.period = 2.0 * std::numbers::pi;
    spec.modes = {{1, 1e-3, 5e-4, 0.2, 0.9}, {2, 2e-4, 0.0, 0.0, 0.0}};
    periodic::SolverOptions o;
    o.points = 64;
    o.output_interval = 0.5;
    const auto h = periodic::evolve_periodic(riemann::EndState(1.0, 0.0), spec, 1.0, 10.0, o);
    for (std::size_t k = 0; k < h.times.size(); ++k) {
        const auto [dn, dm] = h.average_drift(k);
        CHECK(std::abs(dn) <= 1e-12);
        CHECK(std::abs(dm) <= 1e-12);
        CHECK(h.pb_residual(k) <= 1e-8);
    }
    CHECK(h.norms(h.times.size() - 1).h1_total < 0.1 * h.norms(0).h1_total);
}

TEST_CASE("perturbation spec basics")
{
    periodic::PerturbationSpec spec;
    CHECK(spec.is_zero());
    spec.modes = {{2, 0.1, 0.0, 0.3, 0.0}};
    CHECK_FALSE(spec.is_zero());
    // zero average
    double sum = 0.0;
    const int N = 400;
    for (int i = 0; i < N; ++i) sum += spec.rho(spec.period * i / N);
    CHECK(std::abs(sum / N) <= 1e-14);
    CHECK(periodic::perturbation_size(spec, 64) > 0.0);
}
