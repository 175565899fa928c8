#include "nsp/scheme.hpp"

#include "nsp/error.hpp"
#include "nsp/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace nsp::scheme {

void flux_divergence(std::span<const double> n, std::span<const double> m, std::span<const double> phi, double h,
                     double A, std::span<double> dn, std::span<double> dm, EdgeFluxes* edges)
{
    const std::size_t M = dn.size();
    if (n.size() != M + 4 || m.size() != M + 4 || phi.size() != M + 4 || dm.size() != M)
        throw InvalidArgument("flux_divergence: arrays must carry two ghost points per side");
    // Node fluxes at extended indices 1 .. M+2.
    thread_local std::vector<double> f, u;
    f.resize(M + 4);
    u.resize(M + 4);
    const double inv2h = 0.5 / h;
    for (std::size_t e = 1; e <= M + 2; ++e) {
        const double px = (phi[e + 1] - phi[e - 1]) * inv2h;
        u[e] = m[e] / n[e];
        f[e] = m[e] * u[e] + A * n[e] - 0.5 * px * px + std::exp(-phi[e]);
    }
    // Face e+1/2 for e = 1 .. M+1.
    double G_prev = 0.5 * (m[1] + m[2]);
    double F_prev = 0.5 * (f[1] + f[2]) - (u[2] - u[1]) / h;
    if (edges) {
        edges->mass_left = G_prev;
        edges->momentum_left = F_prev;
    }
    for (std::size_t i = 0; i < M; ++i) {
        const std::size_t e = i + 2;
        const double G = 0.5 * (m[e] + m[e + 1]);
        const double F = 0.5 * (f[e] + f[e + 1]) - (u[e + 1] - u[e]) / h;
        dn[i] = -(G - G_prev) / h;
        dm[i] = -(F - F_prev) / h;
        G_prev = G;
        F_prev = F;
    }
    if (edges) {
        edges->mass_right = G_prev;
        edges->momentum_right = F_prev;
    }
}

double stable_dt(std::span<const double> n, std::span<const double> m, double h, double A, double cfl_hyperbolic,
                 double cfl_parabolic)
{
    double vmax = 0.0;
    double nmin = 1e300;
    const double c = std::sqrt(A + 1.0);
    for (std::size_t i = 0; i < n.size(); ++i) {
        vmax = std::max(vmax, std::abs(m[i] / n[i]) + c);
        nmin = std::min(nmin, n[i]);
    }
    // The viscous term acts on u with coefficient 1/n.
    return std::min(cfl_hyperbolic * h / vmax, cfl_parabolic * h * h * std::min(1.0, nmin));
}

namespace {

constexpr int kMaxNewton = 50;

template <class Residual, class Solve>
double newton_loop(std::span<double> phi, double tol, Residual&& residual, Solve&& solve)
{
    std::vector<double> F, trial;
    double rnorm = residual(phi, F);
    bool polished = false;
    for (int it = 0; it < kMaxNewton; ++it) {
        if (rnorm <= tol) {
            // One extra step squares the remaining error, so the potential is
            // accurate to rounding rather than merely to tol.
            if (polished) return rnorm;
            polished = true;
            std::vector<double> delta = solve(phi, F);
            trial.assign(phi.begin(), phi.end());
            for (std::size_t i = 0; i < delta.size(); ++i) trial[i] += delta[i];
            std::vector<double> Ft;
            const double tn = residual(std::span<double>(trial), Ft);
            if (std::isfinite(tn) && tn <= std::max(rnorm, tol)) {
                std::copy(trial.begin(), trial.end(), phi.begin());
                rnorm = tn;
            }
            return rnorm;
        }
        std::vector<double> delta = solve(phi, F);
        double lambda = 1.0;
        double scale = 0.0, step = 0.0;
        for (;;) {
            trial.assign(phi.begin(), phi.end());
            for (std::size_t i = 0; i < delta.size(); ++i) trial[i] += lambda * delta[i];
            std::vector<double> Ft;
            const double tn = residual(std::span<double>(trial), Ft);
            if (std::isfinite(tn) && (tn < rnorm || lambda < 1e-3)) {
                std::copy(trial.begin(), trial.end(), phi.begin());
                F.swap(Ft);
                rnorm = tn;
                break;
            }
            lambda *= 0.5;
        }
        for (std::size_t i = 0; i < delta.size(); ++i) {
            scale = std::max(scale, std::abs(phi[i]));
            step = std::max(step, std::abs(lambda * delta[i]));
        }
        // Converged to rounding: further iterations cannot reduce the residual.
        if (step <= 8e-16 * std::max(1.0, scale) && rnorm <= 1e3 * tol) return rnorm;
    }
    if (rnorm <= tol) return rnorm;
    throw NumericalFailure("Poisson-Boltzmann Newton iteration did not converge in 50 steps (residual " +
                           std::to_string(rnorm) + ")");
}

void check_density(std::span<const double> n)
{
    for (double v : n)
        if (!(v > 0.0)) throw NumericalFailure("Poisson-Boltzmann solve: nonpositive density");
}

}  // namespace

double solve_pb_periodic(std::span<const double> n, std::span<double> phi, double h, double tol)
{
    const std::size_t P = n.size();
    if (phi.size() != P || P < 3) throw InvalidArgument("solve_pb_periodic: size mismatch");
    check_density(n);
    const double ih2 = 1.0 / (h * h);
    auto residual = [&](std::span<double> p, std::vector<double>& F) {
        F.resize(P);
        double r = 0.0;
        for (std::size_t i = 0; i < P; ++i) {
            const double pl = p[i == 0 ? P - 1 : i - 1];
            const double pr = p[i + 1 == P ? 0 : i + 1];
            F[i] = (pr - 2.0 * p[i] + pl) * ih2 - n[i] + std::exp(-p[i]);
            r = std::max(r, std::abs(F[i]));
        }
        return r;
    };
    auto solve = [&](std::span<double> p, const std::vector<double>& F) {
        TridiagonalSystem sys;
        sys.cyclic = true;
        sys.lower.assign(P, ih2);
        sys.upper.assign(P, ih2);
        sys.diag.resize(P);
        sys.rhs.resize(P);
        for (std::size_t i = 0; i < P; ++i) {
            sys.diag[i] = -2.0 * ih2 - std::exp(-p[i]);
            sys.rhs[i] = -F[i];
        }
        return solve_tridiagonal(sys);
    };
    return newton_loop(phi, tol, residual, solve);
}

double solve_pb_dirichlet(std::span<const double> n, std::span<double> phi, double h, double tol)
{
    const std::size_t N = n.size();
    if (phi.size() != N || N < 3) throw InvalidArgument("solve_pb_dirichlet: size mismatch");
    check_density(n);
    const double ih2 = 1.0 / (h * h);
    const std::size_t K = N - 2;
    // Unknowns are the interior values; work on a copy that includes the ends.
    std::vector<double> full(phi.begin(), phi.end());
    std::vector<double> inner(full.begin() + 1, full.end() - 1);
    auto residual = [&](std::span<double> p, std::vector<double>& F) {
        F.resize(K);
        double r = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
            const double pl = k == 0 ? full.front() : p[k - 1];
            const double pr = k + 1 == K ? full.back() : p[k + 1];
            F[k] = (pr - 2.0 * p[k] + pl) * ih2 - n[k + 1] + std::exp(-p[k]);
            r = std::max(r, std::abs(F[k]));
        }
        return r;
    };
    auto solve = [&](std::span<double> p, const std::vector<double>& F) {
        TridiagonalSystem sys;
        sys.lower.assign(K, ih2);
        sys.upper.assign(K, ih2);
        sys.lower[0] = 0.0;
        sys.upper[K - 1] = 0.0;
        sys.diag.resize(K);
        sys.rhs.resize(K);
        for (std::size_t k = 0; k < K; ++k) {
            sys.diag[k] = -2.0 * ih2 - std::exp(-p[k]);
            sys.rhs[k] = -F[k];
        }
        return solve_tridiagonal(sys);
    };
    const double r = newton_loop(std::span<double>(inner), tol, residual, solve);
    std::copy(inner.begin(), inner.end(), phi.begin() + 1);
    return r;
}

}  // namespace nsp::scheme
