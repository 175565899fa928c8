#include "nsp/periodic.hpp"

#include "nsp/error.hpp"
#include "nsp/operators.hpp"
#include "nsp/regression.hpp"
#include "nsp/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace nsp::periodic {

namespace {

double wavenumber(const PerturbationSpec& s, int k) { return 2.0 * std::numbers::pi * k / s.period; }

}  // namespace

double PerturbationSpec::rho(double x) const
{
    double v = 0.0;
    for (const auto& md : modes) v += md.amp_n * std::cos(wavenumber(*this, md.k) * x + md.phase_n);
    return v;
}

double PerturbationSpec::w(double x) const
{
    double v = 0.0;
    for (const auto& md : modes) v += md.amp_m * std::cos(wavenumber(*this, md.k) * x + md.phase_m);
    return v;
}

// int_0^x a cos(kappa y + p) dy = a (sin(kappa x + p) - sin p) / kappa, and the
// first term averages to zero over whole periods.
double PerturbationSpec::double_integral_mean_rho() const
{
    double v = 0.0;
    for (const auto& md : modes) v -= md.amp_n * std::sin(md.phase_n) / wavenumber(*this, md.k);
    return v;
}

double PerturbationSpec::double_integral_mean_w() const
{
    double v = 0.0;
    for (const auto& md : modes) v -= md.amp_m * std::sin(md.phase_m) / wavenumber(*this, md.k);
    return v;
}

bool PerturbationSpec::is_zero() const
{
    return std::all_of(modes.begin(), modes.end(), [](const Mode& m) { return m.amp_n == 0.0 && m.amp_m == 0.0; });
}

void PerturbationSpec::validate() const
{
    if (!(period > 0.0) || !std::isfinite(period)) throw InvalidArgument("perturbation period must be positive");
    for (const auto& md : modes) {
        if (md.k < 1) throw InvalidArgument("perturbation modes need wavenumber k >= 1 (zero average)");
        if (!std::isfinite(md.amp_n) || !std::isfinite(md.amp_m) || !std::isfinite(md.phase_n) ||
            !std::isfinite(md.phase_m))
            throw InvalidArgument("perturbation mode has a non-finite entry");
    }
}

Grid1D cell_grid(double period, std::size_t points) { return Grid1D(0.0, period, points + 1); }

double perturbation_size(const PerturbationSpec& spec, std::size_t points)
{
    const Grid1D g = cell_grid(spec.period, points);
    const auto rho = SpatialField::sample(g, BoundaryKind::Periodic, [&](double x) { return spec.rho(x); });
    const auto w = SpatialField::sample(g, BoundaryKind::Periodic, [&](double x) { return spec.w(x); });
    return std::hypot(norm_h3(rho), norm_h3(w));
}

SpatialField poisson_boltzmann_solve(const SpatialField& n, double tol, double left_value, double right_value,
                                     const SpatialField* initial_guess)
{
    SpatialField phi(n.grid, n.boundary);
    for (double v : n.values)
        if (!(v > 0.0)) throw NumericalFailure("poisson_boltzmann_solve: nonpositive density");
    for (std::size_t i = 0; i < n.size(); ++i) phi[i] = initial_guess ? (*initial_guess)[i] : -std::log(n[i]);
    const double h = n.grid.spacing();
    if (n.boundary == BoundaryKind::Periodic) {
        const std::size_t P = n.size() - 1;
        scheme::solve_pb_periodic(std::span<const double>(n.values.data(), P), std::span<double>(phi.values.data(), P),
                                  h, tol);
        phi.values.back() = phi.values.front();
    } else {
        phi.values.front() = left_value;
        phi.values.back() = right_value;
        scheme::solve_pb_dirichlet(n.values, phi.values, h, tol);
    }
    return phi;
}

PeriodicSolver::PeriodicSolver(const riemann::EndState& base, const PerturbationSpec& spec, double A,
                               std::size_t points, double pb_tol)
    : A_(A), h_(spec.period / static_cast<double>(points)), pb_tol_(pb_tol), P_(points)
{
    spec.validate();
    if (points < 8) throw InvalidArgument("periodic cell needs at least 8 points");
    if (!(A > 0.0)) throw InvalidArgument("A must be positive");
    cur_.n.resize(P_);
    cur_.m.resize(P_);
    cur_.phi.resize(P_);
    for (std::size_t i = 0; i < P_; ++i) {
        const double x = static_cast<double>(i) * h_;
        cur_.n[i] = base.n + spec.rho(x);
        cur_.m[i] = base.m + spec.w(x);
        if (!(cur_.n[i] > 0.0)) throw InvalidArgument("periodic initial density is not positive");
        cur_.phi[i] = -std::log(cur_.n[i]);
    }
    scheme::solve_pb_periodic(cur_.n, cur_.phi, h_, pb_tol_);
    stage_ = cur_;
    ext_n_.resize(P_ + 4);
    ext_m_.resize(P_ + 4);
    ext_phi_.resize(P_ + 4);
    dn0_.resize(P_);
    dm0_.resize(P_);
    dn1_.resize(P_);
    dm1_.resize(P_);
}

double PeriodicSolver::stable_dt(double cfl_h, double cfl_p) const
{
    return scheme::stable_dt(cur_.n, cur_.m, h_, A_, cfl_h, cfl_p);
}

void PeriodicSolver::rhs(const State& s, std::vector<double>& dn, std::vector<double>& dm)
{
    for (std::size_t e = 0; e < P_ + 4; ++e) {
        const std::size_t i = (e + 2 * P_ - 2) % P_;
        ext_n_[e] = s.n[i];
        ext_m_[e] = s.m[i];
        ext_phi_[e] = s.phi[i];
    }
    scheme::flux_divergence(ext_n_, ext_m_, ext_phi_, h_, A_, dn, dm);
}

void PeriodicSolver::solve_phi(State& s, const std::vector<double>& guess)
{
    s.phi = guess;
    scheme::solve_pb_periodic(s.n, s.phi, h_, pb_tol_);
}

void PeriodicSolver::step(double dt)
{
    rhs(cur_, dn0_, dm0_);
    for (std::size_t i = 0; i < P_; ++i) {
        stage_.n[i] = cur_.n[i] + dt * dn0_[i];
        stage_.m[i] = cur_.m[i] + dt * dm0_[i];
    }
    solve_phi(stage_, cur_.phi);
    rhs(stage_, dn1_, dm1_);
    for (std::size_t i = 0; i < P_; ++i) {
        cur_.n[i] = 0.5 * cur_.n[i] + 0.5 * (stage_.n[i] + dt * dn1_[i]);
        cur_.m[i] = 0.5 * cur_.m[i] + 0.5 * (stage_.m[i] + dt * dm1_[i]);
    }
    solve_phi(cur_, stage_.phi);
    t_ += dt;
}

std::size_t PeriodicHistory::wrap(long long i) const
{
    const auto P = static_cast<long long>(points);
    long long r = i % P;
    if (r < 0) r += P;
    return static_cast<std::size_t>(r);
}

std::size_t PeriodicHistory::index_at(double t) const
{
    const double k = std::round(t / output_interval);
    if (std::abs(k * output_interval - t) > 1e-9 * std::max(1.0, std::abs(t)) || k < 0.0 ||
        k >= static_cast<double>(times.size()))
        throw InvalidArgument("periodic history has no snapshot at t = " + std::to_string(t));
    return static_cast<std::size_t>(k);
}

SpatialField PeriodicHistory::field(std::size_t idx, char which) const
{
    const auto& s = snapshots.at(idx);
    const std::vector<double>* src = nullptr;
    switch (which) {
    case 'n': src = &s.n; break;
    case 'm': src = &s.m; break;
    case 'p': src = &s.phi; break;
    default: throw InvalidArgument("PeriodicHistory::field: unknown field");
    }
    std::vector<double> v(*src);
    v.push_back(v.front());
    return SpatialField(grid(), std::move(v), BoundaryKind::Periodic);
}

SnapshotNorms PeriodicHistory::norms(std::size_t idx) const
{
    const auto& s = snapshots.at(idx);
    const Grid1D g = grid();
    SpatialField rho(g, BoundaryKind::Periodic), w(g, BoundaryKind::Periodic), v(g, BoundaryKind::Periodic),
        vp(g, BoundaryKind::Periodic);
    for (std::size_t i = 0; i <= points; ++i) {
        const std::size_t j = i % points;
        rho[i] = s.n[j] - base.n;
        w[i] = s.m[j] - base.m;
        v[i] = s.m[j] / s.n[j] - base.u;
        vp[i] = s.phi[j] - base.phi;
    }
    SnapshotNorms out;
    out.l2_n = norm_l2(rho);
    out.l2_m = norm_l2(w);
    const double a = norm_h1(rho), b = norm_h1(w), c = norm_h1(v), d = norm_h1(vp);
    out.h1_total = std::sqrt(a * a + b * b + c * c + d * d);
    return out;
}

std::pair<double, double> PeriodicHistory::average_drift(std::size_t idx) const
{
    const auto& s = snapshots.at(idx);
    double sn = 0.0, sm = 0.0;
    for (std::size_t i = 0; i < points; ++i) {
        sn += s.n[i] - base.n;
        sm += s.m[i] - base.m;
    }
    return {sn / static_cast<double>(points), sm / static_cast<double>(points)};
}

double PeriodicHistory::pb_residual(std::size_t idx) const
{
    const auto& s = snapshots.at(idx);
    const double ih2 = 1.0 / (spacing * spacing);
    double r = 0.0;
    for (std::size_t i = 0; i < points; ++i) {
        const double pl = s.phi[(i + points - 1) % points], pr = s.phi[(i + 1) % points];
        r = std::max(r, std::abs((pr - 2.0 * s.phi[i] + pl) * ih2 - s.n[i] + std::exp(-s.phi[i])));
    }
    return r;
}

PeriodicHistory evolve_periodic(const riemann::EndState& base, const PerturbationSpec& spec, double A, double T_end,
                                const SolverOptions& opt)
{
    if (!(T_end >= 0.0)) throw InvalidArgument("evolve_periodic: T_end must be nonnegative");
    if (!(opt.output_interval > 0.0)) throw InvalidArgument("evolve_periodic: output_interval must be positive");
    PeriodicSolver solver(base, spec, A, opt.points, opt.pb_tol);

    PeriodicHistory h;
    h.base = base;
    h.A = A;
    h.spec = spec;
    h.period = spec.period;
    h.points = opt.points;
    h.spacing = solver.spacing();
    h.output_interval = opt.output_interval;
    h.nu = perturbation_size(spec, opt.points);

    // Stable step, shrunk so that the output interval is a whole number of steps.
    const double dt_max = opt.dt > 0.0 ? opt.dt : solver.stable_dt(opt.cfl_hyperbolic, opt.cfl_parabolic);
    const double ratio = opt.output_interval / dt_max;
    std::size_t per_output = static_cast<std::size_t>(std::ceil(ratio - 1e-9));
    if (opt.dt > 0.0 && std::abs(ratio - std::round(ratio)) > 1e-9)
        throw InvalidArgument("evolve_periodic: output_interval must be a multiple of dt");
    per_output = std::max<std::size_t>(per_output, 1);
    h.dt = opt.output_interval / static_cast<double>(per_output);
    const auto outputs = static_cast<std::size_t>(std::llround(std::floor(T_end / opt.output_interval + 1e-9)));

    h.times.push_back(0.0);
    h.snapshots.push_back(solver.state());
    const double h1_0 = h.norms(0).h1_total;
    const double bound = opt.blowup_factor * h1_0 + 1e-12;
    for (std::size_t k = 1; k <= outputs; ++k) {
        for (std::size_t s = 0; s < per_output; ++s) solver.step(h.dt);
        h.times.push_back(static_cast<double>(k) * opt.output_interval);
        h.snapshots.push_back(solver.state());
        const double nrm = h.norms(k).h1_total;
        if (!std::isfinite(nrm) || nrm > bound)
            throw NumericalFailure("periodic evolution blew up at t = " + std::to_string(h.times.back()) +
                                   " (H1 perturbation norm " + std::to_string(nrm) + " > " + std::to_string(bound) + ")");
    }
    return h;
}

AlphaFit fit_alpha(const PeriodicHistory& h, double t_start, double floor, double min_decades)
{
    if (!(h.nu > 0.0)) throw InvalidArgument("fit_alpha: zero perturbation has no decay rate");
    std::vector<double> ts, ls, norms;
    for (std::size_t k = 0; k < h.times.size(); ++k) {
        if (h.times[k] < t_start) continue;
        const double v = h.norms(k).h1_total;
        if (!(v > floor)) break;
        ts.push_back(h.times[k]);
        ls.push_back(std::log(v));
        norms.push_back(v);
    }
    if (ts.size() < 3) throw NumericalFailure("fit_alpha: fewer than three samples above the floor");
    const double decades = std::log10(*std::max_element(norms.begin(), norms.end()) /
                                      *std::min_element(norms.begin(), norms.end()));
    if (decades < min_decades)
        throw NumericalFailure("fit_alpha: history spans only " + std::to_string(decades) + " decades of decay");
    const LinearFit f = fit_line(ts, ls);
    AlphaFit out;
    out.alpha = -f.slope;
    out.intercept = f.intercept;
    out.r_squared = f.r_squared;
    out.window_start = ts.front();
    out.window_end = ts.back();
    out.decades = decades;
    if (!(out.alpha > 0.0)) throw NumericalFailure("fit_alpha: fitted rate is not positive");
    for (std::size_t i = 0; i < ts.size(); ++i)
        out.envelope_c = std::max(out.envelope_c, norms[i] / (h.nu * std::exp(-out.alpha * ts[i])));
    return out;
}

}  // namespace nsp::periodic
