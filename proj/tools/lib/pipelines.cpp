#include "nsp_app/pipelines.hpp"

#include "nsp/error.hpp"
#include "nsp_app/assets.hpp"
#include "nsp_app/output.hpp"

#include "json.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

namespace nsp::app {

namespace fs = std::filesystem;

Check check_le(const std::string& name, double value, double hi)
{
    return {name, value, -std::numeric_limits<double>::infinity(), hi, value <= hi};
}

Check check_ge(const std::string& name, double value, double lo)
{
    return {name, value, lo, std::numeric_limits<double>::infinity(), value >= lo};
}

Check check_in(const std::string& name, double value, double lo, double hi)
{
    return {name, value, lo, hi, value >= lo && value <= hi};
}

Check check_true(const std::string& name, bool ok) { return {name, ok ? 1.0 : 0.0, 1.0, 1.0, ok}; }

bool Report::all_pass() const
{
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

void Report::add_info(const std::string& key, double value) { info.emplace_back(key, format_number(value)); }
void Report::add_info(const std::string& key, const std::string& value) { info.emplace_back(key, value); }

std::string Report::summary_text() const
{
    std::ostringstream os;
    os << "command = " << command << "\n";
    for (const auto& [k, v] : info) os << k << " = " << v << "\n";
    for (const auto& c : checks) {
        os << "check." << c.name << ".value = " << format_number(c.value) << "\n";
        if (std::isfinite(c.lo)) os << "check." << c.name << ".min = " << format_number(c.lo) << "\n";
        if (std::isfinite(c.hi)) os << "check." << c.name << ".max = " << format_number(c.hi) << "\n";
        os << "check." << c.name << ".pass = " << (c.pass ? "true" : "false") << "\n";
    }
    os << "all_pass = " << (all_pass() ? "true" : "false") << "\n";
    return os.str();
}

fs::path write_summary(const Report& r, const fs::path& out)
{
    const fs::path p = out / "summary.txt";
    write_text(p, r.summary_text());
    return p;
}

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::pair<riemann::EndState, riemann::EndState> far_fields(const ExperimentConfig& c)
{
    if (c.scenario == Scenario::Shock) {
        const auto s = c.shock();
        return {s.left, s.right};
    }
    const auto r = c.rarefaction();
    return {r.left, r.right};
}

void write_series(const fs::path& out, const cauchy::DiagnosticsSeries& s)
{
    CsvTable diag({"t", "dist_linf", "shift_obs", "h1_pert_norm", "phi_l2", "anti_phi", "anti_psi", "mass_total",
                   "momentum_total"});
    CsvTable mon({"t", "conservation_defect", "pb_residual", "anti_phi_end", "anti_psi_end"});
    std::vector<double> t, d;
    for (const auto& r : s.records) {
        diag.add_row({r.t, r.dist_linf, r.shift_obs, r.h1_pert_norm, r.phi_l2, r.anti_phi, r.anti_psi, r.mass_total,
                      r.momentum_total});
        mon.add_row({r.t, r.conservation_defect, r.pb_residual, r.anti_phi_end, r.anti_psi_end});
        t.push_back(r.t);
        d.push_back(r.dist_linf);
    }
    diag.write(out / "diagnostics.csv");
    mon.write(out / "monitors.csv");
    write_dat(out / "dist_linf.dat", t, d, "t dist_linf");

    const auto& st = s.final_state;
    CsvTable state({"x", "n", "m", "u", "phi"});
    for (std::size_t k = 0; k < st.n.size(); ++k)
        state.add_row({st.domain.x(k), st.n[k], st.m[k], st.m[k] / st.n[k], st.phi[k]});
    state.write(out / "state_final.csv");
}

double max_of(const cauchy::DiagnosticsSeries& s, double cauchy::DiagnosticRecord::*field)
{
    double m = 0.0;
    for (const auto& r : s.records) m = std::max(m, r.*field);
    return m;
}

}  // namespace

Report run_profile(const ExperimentConfig& c, const fs::path& out)
{
    const auto t0 = Clock::now();
    if (c.scenario != Scenario::Shock) throw ConfigError("scenario.type: the profile command needs a shock scenario");
    Report rep;
    rep.command = "profile";
    const auto conn = c.shock();
    profile::ProfileOptions po;
    po.spacing = c.profile_spacing;
    const auto p = profile::compute_profile(conn, po);
    po.spacing = c.profile_spacing / 2.0;
    const auto p2 = profile::compute_profile(conn, po);
    const double r1 = profile::traveling_wave_residual(p).max(), r2 = profile::traveling_wave_residual(p2).max();
    const auto st = profile::verify_profile_structure(p);
    const auto dec = profile::fit_profile_decay(p);
    const auto rh = riemann::rh_residuals(conn);
    const auto lax = riemann::lax_report(conn);

    CsvTable tab({"xi", "n", "m", "u", "phi", "sigma"});
    std::vector<double> xi, nn, sg;
    for (std::size_t i = 0; i < p.n.size(); ++i) {
        const double x = p.grid.x(i);
        tab.add_row({x, p.n[i], p.m_of_n(p.n[i]), p.u_of_n(p.n[i]), p.phi[i], p.sigma(x)});
        xi.push_back(x);
        nn.push_back(p.n[i]);
        sg.push_back(p.sigma(x));
    }
    tab.write(out / "profile.csv");
    write_dat(out / "profile_n.dat", xi, nn, "xi n");
    write_dat(out / "profile_sigma.dat", xi, sg, "xi sigma");
    if (c.svg) write_svg(out / "profile.svg", {"shock profile", "xi", "", false, {{"n", xi, nn}, {"sigma", xi, sg}}, {}});

    rep.add_info("shock_speed", conn.s);
    rep.add_info("mass_flux", conn.j);
    rep.add_info("n_plus", conn.right.n);
    rep.add_info("u_plus", conn.right.u);
    rep.add_info("newton_iterations", static_cast<double>(p.newton_iterations));
    rep.add_info("residual_h", r1);
    rep.add_info("residual_h_half", r2);
    rep.add_info("comparability_constant", st.comparability);
    rep.add_info("theta_left", dec.theta_left);
    rep.add_info("theta_right", dec.theta_right);
    rep.add_info("sound_speed_lax_inequality", lax.sound_speed_inequality ? "true" : "false");
    rep.checks.push_back(check_le("rh_mass", std::abs(rh.mass), 1e-12));
    rep.checks.push_back(check_le("rh_momentum", std::abs(rh.momentum), 1e-12));
    rep.checks.push_back(check_true("lax_characteristic", lax.characteristic_inequality));
    rep.checks.push_back(check_in("residual_halving_ratio", r1 / r2, 3.0, 5.0));
    rep.checks.push_back(check_le("flux_identity_rel", st.flux_identity_error, 1e-6));
    rep.checks.push_back(check_true("n_decreasing", st.n_decreasing));
    rep.checks.push_back(check_true("phi_increasing", st.phi_increasing));
    rep.checks.push_back(check_true("sigma_monotone", st.sigma_monotone));
    rep.checks.push_back(check_le("sigma_at_zero_error", std::abs(st.sigma_at_zero - 0.5), 1e-10));
    const std::pair<const char*, const profile::TailFit*> fits[] = {
        {"n_left", &dec.n_left},   {"n_right", &dec.n_right},     {"u_left", &dec.u_left},
        {"u_right", &dec.u_right}, {"phi_left", &dec.phi_left}, {"phi_right", &dec.phi_right}};
    for (const auto& [name, f] : fits) rep.checks.push_back(check_ge(std::string("tail_r2_") + name, f->r_squared, 0.999));
    rep.seconds = since(t0);
    return rep;
}

Report run_periodic(const ExperimentConfig& c, const fs::path& out)
{
    const auto t0 = Clock::now();
    Report rep;
    rep.command = "periodic";
    const auto [left, right] = far_fields(c);
    const CellHistories h = evolve_cells(c, left, right, c.T_end);
    for (const auto* side : {&h.minus, &h.plus}) {
        const std::string tag = side == &h.minus ? "minus" : "plus";
        CsvTable tab({"t", "l2_n", "l2_m", "h1_total", "drift_n", "drift_m"});
        std::vector<double> t, h1;
        double drift = 0.0, pb = 0.0;
        for (std::size_t k = 0; k < side->times.size(); ++k) {
            const auto nm = side->norms(k);
            const auto [dn, dm] = side->average_drift(k);
            tab.add_row({side->times[k], nm.l2_n, nm.l2_m, nm.h1_total, dn, dm});
            t.push_back(side->times[k]);
            h1.push_back(nm.h1_total);
            drift = std::max({drift, std::abs(dn), std::abs(dm)});
            pb = std::max(pb, side->pb_residual(k));
        }
        tab.write(out / ("periodic_" + tag + ".csv"));
        write_dat(out / ("periodic_" + tag + "_h1.dat"), t, h1, "t h1_total");
        rep.add_info(tag + ".nu", side->nu);
        rep.add_info(tag + ".points", static_cast<double>(side->points));
        rep.checks.push_back(check_le(tag + ".average_drift", drift, 1e-12));
        rep.checks.push_back(check_le(tag + ".pb_residual", pb, 1e-8));
        Chart chart{"periodic H1 perturbation norm (" + tag + ")", "t", "H1", true, {{"H1 norm", t, h1}}, {}};
        if (!side->spec.is_zero()) {
            try {
                const auto fit = periodic::fit_alpha(*side, c.t_transient);
                rep.add_info(tag + ".alpha", fit.alpha);
                rep.add_info(tag + ".fit_window_end", fit.window_end);
                rep.checks.push_back(check_ge(tag + ".alpha", fit.alpha, 0.0));
                rep.checks.push_back(check_ge(tag + ".fit_r2", fit.r_squared, 0.99));
                rep.checks.push_back(check_le(tag + ".envelope_c", fit.envelope_c, 10.0));
                Curve line{"fit", {}, {}};
                for (double tt : {fit.window_start, fit.window_end}) {
                    line.x.push_back(tt);
                    line.y.push_back(std::exp(fit.intercept - fit.alpha * tt));
                }
                chart.curves.push_back(line);
            } catch (const NumericalFailure& e) {
                rep.add_info(tag + ".fit_error", e.what());
                rep.checks.push_back(check_true(tag + ".alpha_fit", false));
            }
        }
        if (c.svg) write_svg(out / ("periodic_" + tag + ".svg"), chart);
    }
    rep.seconds = since(t0);
    return rep;
}

Report run_shifts(const ExperimentConfig& c, const fs::path& out)
{
    const auto t0 = Clock::now();
    Report rep;
    rep.command = "shifts";
    const auto a = build_shock_assets(c);
    const auto& as = a->asymptotic;
    const auto& tr = a->trajectory;

    CsvTable tab({"t", "X", "Y", "Xprime", "Yprime"});
    Curve cx{"X(t)", {}, {}}, cy{"Y(t)", {}, {}};
    for (const auto& s : tr.samples) {
        tab.add_row({s.t, s.X, s.Y, s.Xprime, s.Yprime});
        cx.x.push_back(s.t);
        cx.y.push_back(s.X);
        cy.x.push_back(s.t);
        cy.y.push_back(s.Y);
    }
    tab.write(out / "shifts.csv");
    write_dat(out / "shift_X.dat", cx.x, cx.y, "t X");
    write_dat(out / "shift_Y.dat", cy.x, cy.y, "t Y");
    if (c.svg) write_svg(out / "shifts.svg", {"shift curves", "t", "shift", false, {cx, cy}, {{"X_inf", as.X_inf}, {"Y_inf", as.Y_inf}}});

    nlohmann::ordered_json j;
    j["X0"] = a->initial.X0;
    j["Y0"] = a->initial.Y0;
    j["X_inf"] = as.X_inf;
    j["Y_inf"] = as.Y_inf;
    j["X_T"] = tr.terminal().X;
    j["Y_T"] = tr.terminal().Y;
    j["T"] = tr.terminal().t;
    j["zero_mass_residual"] = as.zero_mass_residual;
    j["zero_mass_amplitude"] = a->data.zero_mass_amplitude;
    j["A1_X0"] = as.a1;
    j["A2_Y0"] = as.a2;
    j["mean_double_integral_jump_rho"] = as.d_rho_jump;
    j["mean_double_integral_jump_w"] = as.d_w_jump;
    j["flux_time_integral"] = as.time_integral;
    j["time_integral_tail_bound"] = as.tail_bound;
    j["trajectory_tail_bound"] = tr.tail_bound;
    j["ledger"] = {{"int_n_left", a->ledger.int_n_left},
                   {"int_n_right", a->ledger.int_n_right},
                   {"int_m_left", a->ledger.int_m_left},
                   {"int_m_right", a->ledger.int_m_right}};
    j["nu"] = a->nu;
    j["alpha_hat"] = a->system->decay_rate();
    write_text(out / "asymptotic.json", j.dump(2) + "\n");

    rep.add_info("nu", a->nu);
    rep.add_info("alpha_hat", a->system->decay_rate());
    rep.add_info("X_inf", as.X_inf);
    rep.add_info("Y_inf", as.Y_inf);
    const double T = tr.terminal().t;
    const double settle = a->nu * std::exp(-2.0 * a->system->decay_rate() * T);
    rep.add_info("settling_measure", settle);
    if (settle < 1e-6) {
        rep.checks.push_back(check_le("terminal_X_gap", std::abs(tr.terminal().X - as.X_inf), 1e-3 * std::max(1.0, std::abs(as.X_inf))));
        rep.checks.push_back(check_le("terminal_Y_gap", std::abs(tr.terminal().Y - as.Y_inf), 1e-3 * std::max(1.0, std::abs(as.Y_inf))));
    } else {
        rep.add_info("terminal_check", "skipped: nu exp(-2 alpha T) is not below 1e-6");
    }
    if (c.zero_mass) {
        rep.checks.push_back(check_le("zero_mass_residual", std::abs(as.zero_mass_residual), 1e-10));
        rep.checks.push_back(check_le("X_inf_minus_Y_inf", std::abs(as.X_inf - as.Y_inf), 1e-6));
    }
    rep.seconds = since(t0);
    return rep;
}

Report run_simulate_shock(const ExperimentConfig& c, const fs::path& out)
{
    const auto t0 = Clock::now();
    Report rep;
    rep.command = "simulate-shock";
    const auto a = build_shock_assets(c);
    const ShockRun run = run_shock_scenario(c, *a, c.domain_factor);
    write_series(out, run.series);
    const auto& recs = run.series.records;
    std::vector<double> t, d, sh;
    for (const auto& r : recs) {
        t.push_back(r.t);
        d.push_back(r.dist_linf);
        sh.push_back(r.shift_obs);
    }
    if (c.svg) {
        write_svg(out / "dist_linf.svg", {"distance to the shifted profile", "t", "L-infinity", true, {{"dist", t, d}}, {}});
        write_svg(out / "shift_obs.svg", {"observed shift", "t", "X", false, {{"fitted shift", t, sh}}, {{"X_inf", a->asymptotic.X_inf}}});
    }
    const double h = c.spacing();
    const bool perturbed = a->nu > 0.0 || c.n_bump.amplitude != 0.0 || c.m_bump.amplitude != 0.0;
    rep.add_info("domain_min", run.domain.x_min());
    rep.add_info("domain_max", run.domain.x_max());
    rep.add_info("points", static_cast<double>(run.domain.size()));
    rep.add_info("steps", static_cast<double>(run.series.steps));
    rep.add_info("nu", a->nu);
    rep.add_info("X_inf", a->asymptotic.X_inf);
    rep.add_info("initial_antiderivative_h2", run.initial_h2);
    if (perturbed) {
        rep.checks.push_back(check_ge("distance_decay_factor", decay_factor(run.series, c.t_transient), 10.0));
    } else {
        // Unperturbed: only the O(h^2) drift of the discrete travelling wave.
        rep.checks.push_back(check_le("distance_floor", max_of(run.series, &cauchy::DiagnosticRecord::dist_linf),
                                      1e-3 * h * h * (1.0 + c.T_end)));
    }
    rep.checks.push_back(check_le("terminal_shift_gap", std::abs(recs.back().shift_obs - a->asymptotic.X_inf), 2.0 * h));
    rep.checks.push_back(check_le("conservation_defect", max_of(run.series, &cauchy::DiagnosticRecord::conservation_defect), 1e-9));
    rep.checks.push_back(check_le("pb_residual", max_of(run.series, &cauchy::DiagnosticRecord::pb_residual), 1e-8));
    double anti = 0.0;
    for (const auto& r : recs) anti = std::max(anti, std::hypot(r.anti_phi, r.anti_psi));
    // The growth bound is relative to the initial size, which is zero without a perturbation.
    if (perturbed)
        rep.checks.push_back(check_le("antiderivative_growth", anti / (run.initial_h2 + a->nu), 100.0));
    else
        rep.add_info("antiderivative_max", anti);
    rep.seconds = since(t0);
    return rep;
}

Report run_simulate_rarefaction(const ExperimentConfig& c, const fs::path& out)
{
    const auto t0 = Clock::now();
    if (c.scenario != Scenario::Rarefaction)
        throw ConfigError("scenario.type: simulate-rarefaction needs a rarefaction scenario");
    Report rep;
    rep.command = "simulate-rarefaction";
    const ansatz::SmoothRarefaction r(c.rarefaction(), c.epsilon);
    const RarefactionRun run = run_rarefaction_scenario(c, r);
    write_series(out, run.series);
    std::vector<double> t, d;
    for (const auto& rec : run.series.records)
        if (rec.t > 0.0) {
            t.push_back(rec.t);
            d.push_back(rec.dist_linf);
        }
    if (c.svg) write_svg(out / "dist_linf.svg", {"sup distance to the fan", "t", "L-infinity", true, {{"dist", t, d}}, {}});

    std::vector<double> times;
    for (double tt = 1.0; tt <= c.T_end + 1e-9; tt += 1.0) times.push_back(tt);
    CsvTable env({"order", "p", "c_max", "t_at_max"});
    for (const auto& e : ansatz::rarefaction_envelopes(r, times)) {
        env.add_row({static_cast<double>(e.order), e.p, e.c_max, e.t_at_max});
        const std::string p = std::isinf(e.p) ? "inf" : std::to_string(static_cast<int>(e.p));
        rep.checks.push_back(check_le("envelope_order" + std::to_string(e.order) + "_p" + p, e.c_max, 10.0));
    }
    env.write(out / "envelopes.csv");

    rep.add_info("domain_min", run.domain.x_min());
    rep.add_info("domain_max", run.domain.x_max());
    rep.add_info("points", static_cast<double>(run.domain.size()));
    rep.add_info("steps", static_cast<double>(run.series.steps));
    rep.add_info("initial_antiderivative_h2", run.initial_h2);
    rep.add_info("final_antiderivative_l2", std::hypot(run.series.records.back().anti_phi, run.series.records.back().anti_psi));
    if (c.T_end > 10.0) {
        const double d10 = dist_at(run.series, 10.0), dT = run.series.records.back().dist_linf;
        rep.add_info("dist_at_10", d10);
        rep.add_info("dist_at_T", dT);
        rep.add_info("smooth_profile_ratio", ansatz::distance_to_fan(r, c.T_end) / ansatz::distance_to_fan(r, 10.0));
        rep.checks.push_back(check_le("distance_ratio_T_over_10", dT / d10, 0.25));
    }
    rep.checks.push_back(check_le("conservation_defect", max_of(run.series, &cauchy::DiagnosticRecord::conservation_defect), 1e-9));
    rep.checks.push_back(check_le("pb_residual", max_of(run.series, &cauchy::DiagnosticRecord::pb_residual), 1e-8));
    rep.seconds = since(t0);
    return rep;
}

}  // namespace nsp::app
