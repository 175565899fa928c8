#include "doctest.h"

#include "nsp/scheme.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace nsp;

TEST_CASE("flux form telescopes")
{
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-0.2, 0.2);
    const std::size_t M = 50;
    std::vector<double> n(M + 4), m(M + 4), phi(M + 4), dn(M), dm(M);
    for (std::size_t i = 0; i < M + 4; ++i) {
        n[i] = 1.0 + u(rng);
        m[i] = u(rng);
        phi[i] = u(rng);
    }
    const double h = 0.1;
    scheme::EdgeFluxes e;
    scheme::flux_divergence(n, m, phi, h, 1.0, dn, dm, &e);
    double sn = 0.0, sm = 0.0;
    for (std::size_t i = 0; i < M; ++i) {
        sn += h * dn[i];
        sm += h * dm[i];
    }
    CHECK(sn == doctest::Approx(e.mass_left - e.mass_right).epsilon(1e-12));
    CHECK(sm == doctest::Approx(e.momentum_left - e.momentum_right).epsilon(1e-12));
}

TEST_CASE("flux form vanishes on a constant quasineutral state")
{
    const std::size_t M = 20;
    std::vector<double> n(M + 4, 1.2), m(M + 4, 0.6), phi(M + 4, -std::log(1.2)), dn(M), dm(M);
    scheme::flux_divergence(n, m, phi, 0.05, 2.0, dn, dm);
    for (std::size_t i = 0; i < M; ++i) {
        CHECK(std::abs(dn[i]) <= 1e-13);
        CHECK(std::abs(dm[i]) <= 1e-12);
    }
}

TEST_CASE("stable step shrinks with spacing")
{
    std::vector<double> n(40, 1.0), m(40, 0.5);
    const double a = scheme::stable_dt(n, m, 0.1, 1.0, 0.4, 0.25);
    const double b = scheme::stable_dt(n, m, 0.05, 1.0, 0.4, 0.25);
    CHECK(a > 0.0);
    CHECK(b < a);
}

TEST_CASE("Dirichlet Poisson-Boltzmann keeps the end values")
{
    const std::size_t N = 81;
    const double h = 0.1;
    std::vector<double> n(N), phi(N, 0.0);
    for (std::size_t i = 0; i < N; ++i) n[i] = 1.0 + 0.1 * std::tanh(0.5 * (static_cast<double>(i) * h - 4.0));
    phi.front() = -std::log(n.front());
    phi.back() = -std::log(n.back());
    const double res = scheme::solve_pb_dirichlet(n, phi, h, 1e-12);
    CHECK(res <= 1e-12);
    CHECK(phi.front() == -std::log(n.front()));
    CHECK(phi.back() == -std::log(n.back()));
    for (std::size_t i = 1; i + 1 < N; ++i) {
        const double r = (phi[i + 1] - 2.0 * phi[i] + phi[i - 1]) / (h * h) - n[i] + std::exp(-phi[i]);
        CHECK(std::abs(r) <= 1e-10);
    }
}
