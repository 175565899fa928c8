#include "nsp_app/assets.hpp"

#include "nsp/error.hpp"

#include <algorithm>
#include <cmath>

namespace nsp::app {

CellHistories evolve_cells(const ExperimentConfig& c, const riemann::EndState& left, const riemann::EndState& right,
                           double T_end)
{
    periodic::SolverOptions o;
    o.cfl_hyperbolic = c.cfl_hyperbolic;
    o.cfl_parabolic = c.cfl_parabolic;
    o.output_interval = c.cell_output_interval;
    o.pb_tol = c.pb_tol;
    CellHistories h;
    o.points = c.points_minus();
    h.minus = periodic::evolve_periodic(left, c.minus, c.A, T_end, o);
    o.points = c.points_plus();
    h.plus = periodic::evolve_periodic(right, c.plus, c.A, T_end, o);
    return h;
}

std::unique_ptr<ShockAssets> build_shock_assets(const ExperimentConfig& c)
{
    if (c.scenario != Scenario::Shock) throw ConfigError("scenario.type: shock pipeline needs a shock scenario");
    auto a = std::make_unique<ShockAssets>();
    a->connection = c.shock();
    profile::ProfileOptions po;
    po.spacing = c.profile_spacing;
    a->profile = profile::compute_profile(a->connection, po);
    a->cells = evolve_cells(c, a->connection.left, a->connection.right, c.T_end);
    a->system = std::make_unique<shifts::ShiftSystem>(a->profile, a->cells.minus, a->cells.plus);
    a->nu = ansatz::perturbation_nu(a->cells.minus, a->cells.plus);

    shifts::ShockInitialData d;
    d.profile = &a->profile;
    d.minus = c.minus;
    d.plus = c.plus;
    d.n_bump = c.n_bump;
    d.m_bump = c.m_bump;
    a->grid = shifts::line_grid(d, c.spacing());
    if (c.zero_mass) {
        const shifts::ZeroMassResult zm = shifts::enforce_zero_mass(d, a->grid, *a->system);
        a->data = zm.data;
        a->ledger = zm.ledger;
        a->initial = zm.shifts;
        a->asymptotic = zm.asymptotic;
        a->added_amplitude = zm.added_amplitude;
    } else {
        a->data = d;
        a->ledger = shifts::compute_ledger(d, a->grid);
        a->initial = shifts::initial_shifts(d, a->grid, a->ledger);
        a->asymptotic = shifts::asymptotic_shifts(d, a->grid, a->ledger, a->initial, *a->system);
    }
    a->data.profile = &a->profile;
    a->trajectory = shifts::integrate_shifts(*a->system, a->initial.X0, a->initial.Y0, c.T_end);
    return a;
}

std::pair<double, double> shifts_at(const shifts::ShiftTrajectory& tr, double t)
{
    const auto& s = tr.samples;
    if (s.size() < 2) return {s.front().X, s.front().Y};
    const double dt = s[1].t - s[0].t;
    const auto k = static_cast<std::size_t>(std::clamp(std::llround(t / dt), 0LL, static_cast<long long>(s.size() - 1)));
    return {s[k].X, s[k].Y};
}

double antiderivative_h2(const cauchy::DiagnosticRecord& r)
{
    return std::sqrt(r.anti_phi * r.anti_phi + r.anti_psi * r.anti_psi + r.h1_pert_norm * r.h1_pert_norm);
}

namespace {

// Rejects initial data whose antiderivative size exceeds eps0, before any step.
std::function<void(const cauchy::DiagnosticRecord&)> smallness_guard(const ExperimentConfig& c)
{
    const double eps0 = c.eps0;
    return [eps0](const cauchy::DiagnosticRecord& r) {
        if (r.t != 0.0) return;
        const double h2 = antiderivative_h2(r);
        if (h2 > eps0)
            throw ConfigError("perturbation.eps0: initial antiderivative size " + std::to_string(h2) +
                              " exceeds eps0 = " + std::to_string(eps0));
    };
}

}  // namespace

ShockRun run_shock_scenario(const ExperimentConfig& c, const ShockAssets& a, double domain_factor)
{
    ShockRun run;
    run.domain = cauchy::shock_domain(a.connection, c.spacing(), c.T_end, c.window, domain_factor);
    cauchy::CauchySolver solver =
        cauchy::make_shock_solver(a.data, run.domain, a.asymptotic.X_inf, a.asymptotic.Y_inf, c.pb_tol);
    cauchy::RunOptions ro;
    ro.T_end = c.T_end;
    ro.output_interval = c.output_interval;
    ro.cfl_hyperbolic = c.cfl_hyperbolic;
    ro.cfl_parabolic = c.cfl_parabolic;
    ro.window_lo = -c.window;
    ro.window_hi = c.window;
    ro.X_inf = a.asymptotic.X_inf;
    const shifts::ShiftTrajectory* tr = &a.trajectory;
    ro.shifts = [tr](double t) { return shifts_at(*tr, t); };
    ro.on_record = smallness_guard(c);
    run.series = cauchy::run_shock(solver, a.profile, ro);
    run.initial_h2 = antiderivative_h2(run.series.records.front());
    return run;
}

RarefactionRun run_rarefaction_scenario(const ExperimentConfig& c, const ansatz::SmoothRarefaction& r)
{
    RarefactionRun run;
    run.domain = cauchy::rarefaction_domain(r, c.spacing(), c.T_end, c.domain_factor);
    cauchy::CauchySolver solver =
        cauchy::make_rarefaction_solver(r, c.minus, c.plus, run.domain, c.n_bump, c.m_bump, c.pb_tol);
    cauchy::RunOptions ro;
    ro.T_end = c.T_end;
    ro.output_interval = c.output_interval;
    ro.cfl_hyperbolic = c.cfl_hyperbolic;
    ro.cfl_parabolic = c.cfl_parabolic;
    ro.window_lo = r.support(0.0).first;
    ro.window_hi = r.support(c.T_end).second;
    ro.on_record = smallness_guard(c);
    run.series = cauchy::run_rarefaction(solver, r, ro);
    run.initial_h2 = antiderivative_h2(run.series.records.front());
    return run;
}

double decay_factor(const cauchy::DiagnosticsSeries& s, double t_transient)
{
    double peak = 0.0;
    for (const auto& r : s.records)
        if (r.t >= t_transient - 1e-12) peak = std::max(peak, r.dist_linf);
    return peak / s.records.back().dist_linf;
}

double dist_at(const cauchy::DiagnosticsSeries& s, double t)
{
    for (const auto& r : s.records)
        if (std::abs(r.t - t) <= 1e-9 * std::max(1.0, t)) return r.dist_linf;
    throw InvalidArgument("no diagnostics record at t = " + std::to_string(t));
}

}  // namespace nsp::app
