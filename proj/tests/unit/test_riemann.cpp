#include "doctest.h"

#include "nsp/ansatz.hpp"
#include "nsp/error.hpp"
#include "nsp/riemann.hpp"

#include <cmath>
#include <tuple>

using namespace nsp;

TEST_CASE("test shock end states")
{
    const auto c = riemann::hugoniot_connect(riemann::EndState(1.1, 0.0), 1.0, 1.0);
    CHECK(c.s == doctest::Approx(1.3484).epsilon(1e-4));
    CHECK(c.j < 0.0);
    CHECK(c.right.phi == doctest::Approx(-std::log(1.0)));
    CHECK(c.left.phi == doctest::Approx(-std::log(1.1)));
}

TEST_CASE("Rankine-Hugoniot residuals vanish across parameters")
{
    for (const auto& [nl, ul, np, A] : {std::tuple{1.1, 0.0, 1.0, 1.0}, std::tuple{2.0, 0.5, 1.2, 0.5},
                                        std::tuple{1.0, -1.0, 0.3, 3.0}, std::tuple{5.0, 2.0, 4.9, 0.1}}) {
        const auto c = riemann::hugoniot_connect(riemann::EndState(nl, ul), np, A);
        const auto r = riemann::rh_residuals(c);
        CHECK(std::abs(r.mass) <= 1e-12);
        CHECK(std::abs(r.momentum) <= 1e-12);
        CHECK(riemann::lax_report(c).characteristic_inequality);
    }
}

TEST_CASE("inadmissible jump is rejected")
{
    CHECK_THROWS_AS(riemann::hugoniot_connect(riemann::EndState(1.0, 0.0), 1.2, 1.0), InvalidArgument);
}

TEST_CASE("rarefaction curve keeps the Riemann invariant")
{
    const auto r = riemann::make_rarefaction_by_strength(riemann::EndState(1.0, 0.0), 0.2, 1.0);
    CHECK(r.strength() == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(std::abs(riemann::rarefaction_relation_residual(r)) <= 1e-12);
    CHECK(r.w_right() > r.w_left());
    // fan is monotone between the end states
    double prev = riemann::rarefaction_exact(r, r.w_left() - 1.0).n;
    for (double xi = r.w_left() - 1.0; xi <= r.w_right() + 1.0; xi += 0.01) {
        const double n = riemann::rarefaction_exact(r, xi).n;
        CHECK(n >= prev - 1e-15);
        prev = n;
    }
}

TEST_CASE("smoothed Burgers data agrees with characteristic tracing")
{
    const double wl = 0.4, wr = 1.1, eps = 0.1;
    double err = 0.0;
    for (double t : {0.0, 0.5, 5.0, 50.0})
        for (int j = 0; j <= 2000; ++j) {
            const double xi = -300.0 + 0.3 * j;
            const double w0 = 0.5 * (wl + wr) + 0.5 * (wr - wl) * std::tanh(eps * xi);
            err = std::max(err, std::abs(ansatz::burgers_smooth(xi + t * w0, t, wl, wr, eps).w - w0));
        }
    CHECK(err <= 1e-8);
}

TEST_CASE("smoothed Burgers derivative matches a difference quotient")
{
    const double h = 1e-4;
    for (double x : {-20.0, -3.0, 0.0, 4.0, 30.0}) {
        const auto s = ansatz::burgers_smooth(x, 7.0, 0.4, 1.1, 0.1);
        const double fd = (ansatz::burgers_smooth(x + h, 7.0, 0.4, 1.1, 0.1).w -
                           ansatz::burgers_smooth(x - h, 7.0, 0.4, 1.1, 0.1).w) / (2.0 * h);
        CHECK(s.wx == doctest::Approx(fd).epsilon(1e-6));
        CHECK(s.wx >= 0.0);
    }
}
