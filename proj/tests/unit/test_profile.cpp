#include "doctest.h"

#include "nsp/shock_profile.hpp"

#include <cmath>

using namespace nsp;

namespace {

const profile::ShockProfile& test_profile()
{
    static const auto p = profile::compute_profile(riemann::hugoniot_connect(riemann::EndState(1.1, 0.0), 1.0, 1.0));
    return p;
}

}  // namespace

TEST_CASE("profile residual is second order")
{
    const auto c = test_profile().connection;
    profile::ProfileOptions o;
    o.spacing = 0.05;
    const double r1 = profile::traveling_wave_residual(profile::compute_profile(c, o)).max();
    o.spacing = 0.025;
    const double r2 = profile::traveling_wave_residual(profile::compute_profile(c, o)).max();
    CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.25));
}

TEST_CASE("profile structure")
{
    const auto& p = test_profile();
    const auto s = profile::verify_profile_structure(p);
    CHECK(s.n_decreasing);
    CHECK(s.phi_increasing);
    CHECK(s.sigma_monotone);
    CHECK(s.flux_identity_error <= 1e-6);
    CHECK(std::abs(s.sigma_at_zero - 0.5) <= 1e-10);
    CHECK(s.comparability >= 1.0);
}

TEST_CASE("profile reaches the end states and is quasineutral there")
{
    const auto& p = test_profile();
    const auto& c = p.connection;
    CHECK(p.n.front() == doctest::Approx(c.left.n).epsilon(1e-6));
    CHECK(p.n.back() == doctest::Approx(c.right.n).epsilon(1e-6));
    CHECK(p.phi.front() == doctest::Approx(-std::log(p.n.front())).epsilon(1e-6));
    CHECK(p.phi.back() == doctest::Approx(-std::log(p.n.back())).epsilon(1e-6));
    CHECK(p.n_at(-1e6) == c.left.n);
    CHECK(p.n_at(1e6) == c.right.n);
}

TEST_CASE("tails are log-linear at the linearised rates")
{
    const auto& p = test_profile();
    const auto d = profile::fit_profile_decay(p);
    for (const auto* f : {&d.n_left, &d.n_right, &d.u_left, &d.u_right, &d.phi_left, &d.phi_right})
        CHECK(f->r_squared >= 0.999);
    CHECK(d.n_left.rate == doctest::Approx(p.left_lin.slow_rate).epsilon(0.05));
    CHECK(d.n_right.rate == doctest::Approx(p.right_lin.slow_rate).epsilon(0.05));
}

TEST_CASE("Hermite sampling agrees with the table")
{
    const auto& p = test_profile();
    for (std::size_t i = 5; i + 5 < p.n.size(); i += 37) {
        const auto s = p.sample(p.grid.x(i));
        CHECK(s.n == doctest::Approx(p.n[i]).epsilon(1e-12));
        CHECK(s.phi == doctest::Approx(p.phi[i]).epsilon(1e-12));
        CHECK(s.u == doctest::Approx(p.u_of_n(p.n[i])).epsilon(1e-12));
    }
}
