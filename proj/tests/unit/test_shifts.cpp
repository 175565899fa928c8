#include "doctest.h"

#include "nsp/shifts.hpp"

#include <cmath>
#include <numbers>

using namespace nsp;

namespace {

struct Setup {
    profile::ShockProfile p;
    shifts::ShockInitialData d;
    double h = 2.0 * std::numbers::pi / 64.0;

    Setup()
    {
        p = profile::compute_profile(riemann::hugoniot_connect(riemann::EndState(1.1, 0.0), 1.0, 1.0));
        d.profile = &p;
        d.minus.period = 2.0 * std::numbers::pi;
        d.plus.period = 1.5 * std::numbers::pi;
        d.minus.modes = {{1, 1e-3, 5e-4, 0.3, 1.1}};
        d.plus.modes = {{1, 5e-4, 1e-3, -0.7, 0.4}};
        d.n_bump = {0.02, -3.0, 1.5};
        d.m_bump = {0.01, 2.0, 1.0};
    }
};

const Setup& setup()
{
    static const Setup s;
    return s;
}

// Total mass of n0 minus the blended ansatz shifted by X, by a plain fine
// trapezoid rule on a long interval.
double ansatz_mass_defect(const shifts::ShockInitialData& d, double X)
{
    const auto& p = *d.profile;
    const double dx = 0.005, L = 90.0;
    double sum = 0.0;
    for (double x = -L; x <= L + 1e-9; x += dx) {
        const double sg = p.sigma(x - X);
        const double f = d.n0(x) - p.n_at(x - X) - d.minus.rho(x) * (1.0 - sg) - d.plus.rho(x) * sg;
        sum += (std::abs(x) >= L - 1e-9 ? 0.5 : 1.0) * f * dx;
    }
    return sum;
}

}  // namespace

TEST_CASE("initial density shift matches a root scan of the mass defect")
{
    const auto& s = setup();
    const auto g = shifts::line_grid(s.d, s.h);
    const auto x0 = shifts::initial_shifts(s.d, g, shifts::compute_ledger(s.d, g));

    double lo = -5.0, flo = ansatz_mass_defect(s.d, lo), root = NAN;
    for (double X = -5.0 + 0.05; X <= 5.0 + 1e-9; X += 0.05) {
        const double f = ansatz_mass_defect(s.d, X);
        if ((f > 0) != (flo > 0)) {
            double a = lo, b = X, fa = flo;
            for (int it = 0; it < 60; ++it) {
                const double c = 0.5 * (a + b), fc = ansatz_mass_defect(s.d, c);
                if ((fc > 0) == (fa > 0)) {
                    a = c;
                    fa = fc;
                } else {
                    b = c;
                }
            }
            root = 0.5 * (a + b);
            break;
        }
        lo = X;
        flo = f;
    }
    REQUIRE(std::isfinite(root));
    CHECK(std::abs(x0.X0 - root) <= 1e-4);
    CHECK(std::abs(x0.slope_a1 - 1.0) < 1.0);
}

TEST_CASE("initial shifts follow a translation of the data")
{
    const auto& s = setup();
    const auto g = shifts::line_grid(s.d, s.h);
    const auto x0 = shifts::initial_shifts(s.d, g, shifts::compute_ledger(s.d, g));
    for (double a : {0.7, -1.3}) {
        const auto dt = s.d.translated(a);
        const auto gt = shifts::line_grid(dt, s.h);
        const auto xt = shifts::initial_shifts(dt, gt, shifts::compute_ledger(dt, gt));
        CHECK(xt.X0 - a == doctest::Approx(x0.X0).epsilon(1e-6));
        CHECK(xt.Y0 - a == doctest::Approx(x0.Y0).epsilon(1e-6));
    }
}

TEST_CASE("without perturbation the shift velocities vanish")
{
    const auto& s = setup();
    periodic::PerturbationSpec zm = s.d.minus, zp = s.d.plus;
    zm.modes.clear();
    zp.modes.clear();
    periodic::SolverOptions o;
    o.points = 64;
    const auto hm = periodic::evolve_periodic(s.p.connection.left, zm, 1.0, 1.0, o);
    o.points = 48;
    const auto hp = periodic::evolve_periodic(s.p.connection.right, zp, 1.0, 1.0, o);
    const shifts::ShiftSystem sys(s.p, hm, hp);
    for (std::size_t k = 0; k < sys.snapshots(); k += 5)
        for (double X : {-1.0, 0.0, 2.5}) {
            const auto [dx, dy] = sys.rhs_at(k, X, -X);
            CHECK(std::abs(dx) <= 1e-12);
            CHECK(std::abs(dy) <= 1e-12);
        }
    const auto tr = shifts::integrate_shifts(sys, 0.4, -0.3, 1.0);
    CHECK(tr.terminal().X == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(tr.terminal().Y == doctest::Approx(-0.3).epsilon(1e-12));
}

TEST_CASE("zero-mass correction makes the two limits coincide")
{
    const auto& s = setup();
    periodic::SolverOptions o;
    o.points = 64;
    o.output_interval = 0.05;
    const auto hm = periodic::evolve_periodic(s.p.connection.left, s.d.minus, 1.0, 40.0, o);
    o.points = 48;
    const auto hp = periodic::evolve_periodic(s.p.connection.right, s.d.plus, 1.0, 40.0, o);
    const shifts::ShiftSystem sys(s.p, hm, hp);
    const auto g = shifts::line_grid(s.d, s.h);
    const auto zm = shifts::enforce_zero_mass(s.d, g, sys);
    CHECK(std::abs(zm.asymptotic.zero_mass_residual) <= 1e-10);
    CHECK(std::abs(zm.asymptotic.X_inf - zm.asymptotic.Y_inf) <= 1e-6);
    // the ODE limit agrees with the closed form
    const auto tr = shifts::integrate_shifts(sys, zm.shifts.X0, zm.shifts.Y0, 40.0);
    CHECK(std::abs(tr.terminal().X - zm.asymptotic.X_inf) <= 1e-3 * std::max(1.0, std::abs(zm.asymptotic.X_inf)));
    CHECK(std::abs(tr.terminal().Y - zm.asymptotic.Y_inf) <= 1e-3 * std::max(1.0, std::abs(zm.asymptotic.Y_inf)));
}
