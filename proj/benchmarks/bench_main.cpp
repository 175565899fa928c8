#include "nsp/periodic.hpp"
#include "nsp/scheme.hpp"
#include "nsp/shock_profile.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <vector>

using namespace nsp;

static void BM_ShockProfile(benchmark::State& state)
{
    const auto c = riemann::hugoniot_connect(riemann::EndState(1.1, 0.0), 1.0, 1.0);
    profile::ProfileOptions o;
    o.spacing = 0.1 / static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(profile::compute_profile(c, o));
}
BENCHMARK(BM_ShockProfile)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_FluxDivergence(benchmark::State& state)
{
    const auto M = static_cast<std::size_t>(state.range(0));
    std::vector<double> n(M + 4), m(M + 4), phi(M + 4), dn(M), dm(M);
    for (std::size_t i = 0; i < M + 4; ++i) {
        n[i] = 1.0 + 0.1 * std::sin(0.01 * i);
        m[i] = 0.1 * std::cos(0.01 * i);
        phi[i] = -std::log(n[i]);
    }
    for (auto _ : state) {
        scheme::flux_divergence(n, m, phi, 0.1, 1.0, dn, dm);
        benchmark::DoNotOptimize(dn.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long long>(M));
}
BENCHMARK(BM_FluxDivergence)->Range(1 << 10, 1 << 14);

static void BM_PoissonBoltzmannPeriodic(benchmark::State& state)
{
    const auto P = static_cast<std::size_t>(state.range(0));
    const double h = 2.0 * std::numbers::pi / static_cast<double>(P);
    std::vector<double> n(P), phi(P);
    for (std::size_t i = 0; i < P; ++i) n[i] = 1.0 + 1e-3 * std::cos(h * static_cast<double>(i));
    for (auto _ : state) {
        std::fill(phi.begin(), phi.end(), 0.0);
        benchmark::DoNotOptimize(scheme::solve_pb_periodic(n, phi, h, 1e-11));
    }
}
BENCHMARK(BM_PoissonBoltzmannPeriodic)->Range(64, 4096);

static void BM_PeriodicStep(benchmark::State& state)
{
    periodic::PerturbationSpec spec;
    spec.modes = {{1, 1e-3, 5e-4, 0.0, 0.0}};
    periodic::PeriodicSolver s(riemann::EndState(1.0, 0.0), spec, 1.0, static_cast<std::size_t>(state.range(0)));
    const double dt = s.stable_dt(0.4, 0.25);
    for (auto _ : state) s.step(dt);
}
BENCHMARK(BM_PeriodicStep)->Arg(64)->Arg(256);
BENCHMARK_MAIN();
