#include "doctest.h"

#include "nsp/ansatz.hpp"

#include <cmath>

using namespace nsp;

namespace {

const ansatz::SmoothRarefaction& rare()
{
    static const ansatz::SmoothRarefaction r(riemann::make_rarefaction_by_strength(riemann::EndState(1.0, 0.0), 0.2, 1.0),
                                             0.1);
    return r;
}

}  // namespace

TEST_CASE("smoothed rarefaction approaches the fan")
{
    const auto& r = rare();
    const double d10 = ansatz::distance_to_fan(r, 10.0);
    const double d100 = ansatz::distance_to_fan(r, 100.0);
    const double d1000 = ansatz::distance_to_fan(r, 1000.0);
    CHECK(d100 < d10);
    CHECK(d1000 < d100);
}

TEST_CASE("smoothed rarefaction is monotone between its end states")
{
    const auto& r = rare();
    const auto& e = r.endpoints();
    for (double t : {0.0, 3.0, 30.0}) {
        const auto [lo, hi] = r.support(t);
        CHECK(std::abs(r.at(lo, t).n - e.left.n) <= 1e-10);
        CHECK(std::abs(r.at(hi, t).n - e.right.n) <= 1e-10);
        double prev = r.at(lo, t).n;
        for (double x = lo; x <= hi; x += 0.25) {
            const auto s = r.at(x, t);
            CHECK(s.n >= prev - 1e-14);
            CHECK(s.n_x >= -1e-14);
            CHECK(std::abs(s.phi + std::log(s.n)) <= 1e-12);
            prev = s.n;
        }
    }
}

TEST_CASE("derivative envelopes stay bounded")
{
    std::vector<double> times;
    for (double t = 1.0; t <= 100.0; t *= 1.1) times.push_back(t);
    for (const auto& e : ansatz::rarefaction_envelopes(rare(), times)) CHECK(e.c_max <= 10.0);
}

TEST_CASE("envelope constant of an exact exponential")
{
    std::vector<double> t, v;
    for (int k = 0; k <= 40; ++k) {
        t.push_back(k);
        v.push_back(3.0 * 1e-3 * std::sqrt(0.1) * std::exp(-0.5 * k));
    }
    CHECK(ansatz::envelope_constant(t, v, 1e-3, 0.1, 0.5, 0.5) == doctest::Approx(3.0));
}
