#include "nsp/cauchy.hpp"

#include "nsp/error.hpp"
#include "nsp/operators.hpp"
#include "nsp/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace nsp::cauchy {

double boundary_horizon(double c_max, double T, double n_min)
{
    if (!(n_min > 0.0) || T < 0.0) throw InvalidArgument("boundary_horizon: need n_min > 0 and T >= 0");
    return c_max * T + 4.0 * std::sqrt(T / n_min);
}

namespace {

Domain make_domain(double lo, double hi, double h)
{
    if (!(h > 0.0)) throw InvalidArgument("domain spacing must be positive");
    Domain d;
    d.h = h;
    d.i0 = static_cast<long long>(std::floor(lo / h));
    d.i1 = static_cast<long long>(std::ceil(hi / h));
    return d;
}

}  // namespace

Domain shock_domain(const riemann::ShockConnection& c, double h, double T, double W, double factor)
{
    const double c_max = std::max(std::abs(c.left.u), std::abs(c.right.u)) + std::sqrt(c.A + 1.0);
    const double H = boundary_horizon(c_max, T, std::min(c.left.n, c.right.n));
    const double margin = (W + 1.2 * H) * factor;
    return make_domain(std::min(0.0, c.s * T) - margin, std::max(0.0, c.s * T) + margin, h);
}

Domain rarefaction_domain(const ansatz::SmoothRarefaction& r, double h, double T, double factor)
{
    const auto& e = r.endpoints();
    const double c_max = std::max(std::abs(e.left.u), std::abs(e.right.u)) + std::sqrt(e.A + 1.0);
    const double H = boundary_horizon(c_max, T, std::min(e.left.n, e.right.n));
    const auto s0 = r.support(0.0), sT = r.support(T);
    const double lo = std::min(s0.first, sT.first), hi = std::max(s0.second, sT.second);
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo) + 1.2 * H;
    return make_domain(mid - half * factor, mid + half * factor, h);
}

SpatialField CauchyState::field(char which) const
{
    const std::vector<double>* src = nullptr;
    switch (which) {
    case 'n': src = &n; break;
    case 'm': src = &m; break;
    case 'p': src = &phi; break;
    default: throw InvalidArgument("CauchyState::field: unknown field");
    }
    return SpatialField(domain.grid(), *src, BoundaryKind::Dirichlet);
}

std::size_t cell_points(double period, double h)
{
    const double q = period / h;
    const double k = std::round(q);
    if (k < 8.0 || std::abs(q - k) > 1e-9 * q) {
        std::ostringstream os;
        os << "period " << period << " is not a whole multiple of the line spacing " << h
           << "; nearest usable spacing is period/" << std::max(8.0, k);
        throw InvalidArgument(os.str());
    }
    return static_cast<std::size_t>(k);
}

CauchySolver::CauchySolver(const Domain& d, double A, const riemann::EndState& base_minus,
                           const periodic::PerturbationSpec& spec_minus, const riemann::EndState& base_plus,
                           const periodic::PerturbationSpec& spec_plus, BoundaryFn boundary, std::vector<double> n0,
                           std::vector<double> m0, double pb_tol)
    : A_(A),
      pb_tol_(pb_tol),
      base_minus_(base_minus),
      base_plus_(base_plus),
      cell_minus_(base_minus, spec_minus, A, cell_points(spec_minus.period, d.h), pb_tol),
      cell_plus_(base_plus, spec_plus, A, cell_points(spec_plus.period, d.h), pb_tol),
      boundary_(std::move(boundary))
{
    const std::size_t N = d.size();
    if (d.i1 - d.i0 < 8) throw InvalidArgument("Cauchy domain needs at least 9 nodes");
    if (n0.size() != N || m0.size() != N) throw InvalidArgument("initial data size does not match the domain");
    if (!boundary_) throw InvalidArgument("Cauchy solver needs a boundary function");
    s_.domain = d;
    s_.n = std::move(n0);
    s_.m = std::move(m0);
    s_.phi.resize(N);
    for (std::size_t k = 0; k < N; ++k) {
        if (!(s_.n[k] > 0.0)) throw InvalidArgument("initial density is not positive at x = " + std::to_string(d.x(k)));
        s_.phi[k] = -std::log(s_.n[k]);
    }
    pin_ends(cells(), 0.0, s_.n, s_.m, s_.phi);
    scheme::solve_pb_dirichlet(s_.n, s_.phi, d.h, pb_tol_);

    en_.resize(N + 2);
    em_.resize(N + 2);
    ep_.resize(N + 2);
    dn0_.resize(N - 2);
    dm0_.resize(N - 2);
    dn1_.resize(N - 2);
    dm1_.resize(N - 2);
}

ansatz::CellPair CauchySolver::cells() const
{
    return {&cell_minus_.state(), &cell_plus_.state(), base_minus_, base_plus_};
}

void CauchySolver::fill_ghosts(const ansatz::CellPair& c, double t, const std::vector<double>& n,
                               const std::vector<double>& m, const std::vector<double>& phi)
{
    const std::size_t N = n.size();
    const ansatz::AnsatzPoint lo = boundary_(c, t, s_.domain.i0 - 1);
    const ansatz::AnsatzPoint hi = boundary_(c, t, s_.domain.i1 + 1);
    en_[0] = lo.n;
    em_[0] = lo.m;
    ep_[0] = lo.phi;
    std::copy(n.begin(), n.end(), en_.begin() + 1);
    std::copy(m.begin(), m.end(), em_.begin() + 1);
    std::copy(phi.begin(), phi.end(), ep_.begin() + 1);
    en_[N + 1] = hi.n;
    em_[N + 1] = hi.m;
    ep_[N + 1] = hi.phi;
}

void CauchySolver::pin_ends(const ansatz::CellPair& c, double t, std::vector<double>& n, std::vector<double>& m,
                            std::vector<double>& phi) const
{
    const ansatz::AnsatzPoint lo = boundary_(c, t, s_.domain.i0);
    const ansatz::AnsatzPoint hi = boundary_(c, t, s_.domain.i1);
    n.front() = lo.n;
    m.front() = lo.m;
    phi.front() = lo.phi;
    n.back() = hi.n;
    m.back() = hi.m;
    phi.back() = hi.phi;
}

void CauchySolver::check_positive(const std::vector<double>& n, double t) const
{
    std::size_t k_min = 0;
    for (std::size_t k = 1; k < n.size(); ++k)
        if (!(n[k] >= n[k_min])) k_min = k;  // NaN is picked up as well
    if (!(n[k_min] > 0.0) || !std::isfinite(n[k_min])) {
        std::ostringstream os;
        os << "density lost positivity at t = " << t << ", x = " << s_.domain.x(k_min) << ", n = " << n[k_min];
        throw NumericalFailure(os.str());
    }
}

void CauchySolver::step(double dt)
{
    if (!(dt > 0.0)) throw InvalidArgument("Cauchy step needs dt > 0");
    const double h = s_.domain.h, t = s_.t;
    const std::size_t N = s_.n.size();
    scheme::EdgeFluxes e0, e1;

    fill_ghosts(cells(), t, s_.n, s_.m, s_.phi);
    scheme::flux_divergence(en_, em_, ep_, h, A_, dn0_, dm0_, &e0);

    cell_minus_.step(dt);
    cell_plus_.step(dt);
    const ansatz::CellPair stage{&cell_minus_.stage(), &cell_plus_.stage(), base_minus_, base_plus_};

    n1_ = s_.n;
    m1_ = s_.m;
    p1_ = s_.phi;
    for (std::size_t k = 1; k + 1 < N; ++k) {
        n1_[k] += dt * dn0_[k - 1];
        m1_[k] += dt * dm0_[k - 1];
    }
    pin_ends(stage, t + dt, n1_, m1_, p1_);
    check_positive(n1_, t + dt);
    scheme::solve_pb_dirichlet(n1_, p1_, h, pb_tol_);

    fill_ghosts(stage, t + dt, n1_, m1_, p1_);
    scheme::flux_divergence(en_, em_, ep_, h, A_, dn1_, dm1_, &e1);
    for (std::size_t k = 1; k + 1 < N; ++k) {
        s_.n[k] = 0.5 * s_.n[k] + 0.5 * (n1_[k] + dt * dn1_[k - 1]);
        s_.m[k] = 0.5 * s_.m[k] + 0.5 * (m1_[k] + dt * dm1_[k - 1]);
    }
    s_.phi = p1_;
    pin_ends(cells(), t + dt, s_.n, s_.m, s_.phi);
    check_positive(s_.n, t + dt);
    scheme::solve_pb_dirichlet(s_.n, s_.phi, h, pb_tol_);

    mass_in_ += 0.5 * dt * ((e0.mass_left - e0.mass_right) + (e1.mass_left - e1.mass_right));
    mom_in_ += 0.5 * dt * ((e0.momentum_left - e0.momentum_right) + (e1.momentum_left - e1.momentum_right));
    s_.t = t + dt;
}

double CauchySolver::stable_dt(double cfl_hyperbolic, double cfl_parabolic) const
{
    const double line = scheme::stable_dt(s_.n, s_.m, s_.domain.h, A_, cfl_hyperbolic, cfl_parabolic);
    return std::min({line, cell_minus_.stable_dt(cfl_hyperbolic, cfl_parabolic),
                     cell_plus_.stable_dt(cfl_hyperbolic, cfl_parabolic)});
}

double CauchySolver::pb_residual() const
{
    const double h2 = s_.domain.h * s_.domain.h;
    double r = 0.0;
    for (std::size_t k = 1; k + 1 < s_.n.size(); ++k) {
        const double lap = (s_.phi[k + 1] - 2.0 * s_.phi[k] + s_.phi[k - 1]) / h2;
        r = std::max(r, std::abs(lap - s_.n[k] + std::exp(-s_.phi[k])));
    }
    return r;
}

double CauchySolver::mass() const
{
    double sum = 0.0;
    for (std::size_t k = 1; k + 1 < s_.n.size(); ++k) sum += s_.n[k];
    return sum * s_.domain.h;
}

double CauchySolver::momentum() const
{
    double sum = 0.0;
    for (std::size_t k = 1; k + 1 < s_.m.size(); ++k) sum += s_.m[k];
    return sum * s_.domain.h;
}

CauchySolver make_shock_solver(const shifts::ShockInitialData& data, const Domain& d, double X_bc, double Y_bc,
                               double pb_tol)
{
    data.validate();
    const profile::ShockProfile* p = data.profile;
    const double h = d.h;
    std::vector<double> n0(d.size()), m0(d.size());
    for (std::size_t k = 0; k < d.size(); ++k) {
        n0[k] = data.n0(d.x(k));
        m0[k] = data.m0(d.x(k));
    }
    BoundaryFn bc = [p, h, X_bc, Y_bc](const ansatz::CellPair& c, double t, long long i) {
        return ansatz::shock_point(*p, c, h, t, i, X_bc, Y_bc);
    };
    return CauchySolver(d, p->connection.A, p->connection.left, data.minus, p->connection.right, data.plus,
                        std::move(bc), std::move(n0), std::move(m0), pb_tol);
}

CauchySolver make_rarefaction_solver(const ansatz::SmoothRarefaction& r, const periodic::PerturbationSpec& minus,
                                     const periodic::PerturbationSpec& plus, const Domain& d,
                                     const shifts::Bump& n_bump, const shifts::Bump& m_bump, double pb_tol)
{
    const auto& e = r.endpoints();
    const double h = d.h;
    // Throwaway cells give the oscillation at t = 0 on the same nodes.
    const periodic::PeriodicSolver cm(e.left, minus, e.A, cell_points(minus.period, h), pb_tol);
    const periodic::PeriodicSolver cp(e.right, plus, e.A, cell_points(plus.period, h), pb_tol);
    const ansatz::CellPair c0{&cm.state(), &cp.state(), e.left, e.right};
    std::vector<double> n0(d.size()), m0(d.size());
    for (std::size_t k = 0; k < d.size(); ++k) {
        const long long i = d.i0 + static_cast<long long>(k);
        const ansatz::AnsatzPoint a = ansatz::rarefaction_point(r, c0, h, 0.0, i);
        n0[k] = a.n + n_bump(d.x(k));
        m0[k] = a.m + m_bump(d.x(k));
    }
    const ansatz::SmoothRarefaction* rp = &r;
    BoundaryFn bc = [rp, h](const ansatz::CellPair& c, double t, long long i) {
        return ansatz::rarefaction_point(*rp, c, h, t, i);
    };
    return CauchySolver(d, e.A, e.left, minus, e.right, plus, std::move(bc), std::move(n0), std::move(m0), pb_tol);
}

double observed_shift(const CauchyState& s, const profile::ShockProfile& p, double lo, double hi, double X_lo,
                      double X_hi, double tol)
{
    const Domain& d = s.domain;
    const long long k0 = std::max(0LL, static_cast<long long>(std::ceil(lo / d.h)) - d.i0);
    const long long k1 = std::min(static_cast<long long>(d.size()) - 1, static_cast<long long>(std::floor(hi / d.h)) - d.i0);
    if (k1 <= k0) throw InvalidArgument("observed_shift: empty window");
    const double st = p.connection.s * s.t;
    auto J = [&](double X) {
        double sum = 0.0;
        for (long long k = k0; k <= k1; ++k) {
            const auto kk = static_cast<std::size_t>(k);
            const double r = s.n[kk] - p.n_at(d.x(kk) - st - X);
            sum += r * r;
        }
        return sum;
    };
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = X_lo, b = X_hi;
    double c = b - g * (b - a), e = a + g * (b - a);
    double fc = J(c), fe = J(e);
    while (b - a > tol) {
        if (fc < fe) {
            b = e;
            e = c;
            fe = fc;
            c = b - g * (b - a);
            fc = J(c);
        } else {
            a = c;
            c = e;
            fc = fe;
            e = a + g * (b - a);
            fe = J(e);
        }
    }
    return 0.5 * (a + b);
}

namespace {

std::pair<std::size_t, std::size_t> window_nodes(const Domain& d, double lo, double hi)
{
    if (!(hi > lo)) return {1, d.size() - 2};
    const long long k0 = std::max(0LL, static_cast<long long>(std::ceil(lo / d.h)) - d.i0);
    const long long k1 =
        std::min(static_cast<long long>(d.size()) - 1, static_cast<long long>(std::floor(hi / d.h)) - d.i0);
    if (k1 < k0) throw InvalidArgument("diagnostic window lies outside the domain");
    return {static_cast<std::size_t>(k0), static_cast<std::size_t>(k1)};
}

struct Reference {
    double mass0 = 0.0, momentum0 = 0.0;
};

// Perturbation and bookkeeping entries shared by both scenarios.
template <class AnsatzAt>
void fill_common(DiagnosticRecord& r, const CauchySolver& solver, const Reference& ref, AnsatzAt&& ansatz_at)
{
    const CauchyState& s = solver.state();
    const Grid1D g = s.domain.grid();
    SpatialField dn(g, BoundaryKind::Dirichlet), dm = dn, dp = dn;
    for (std::size_t k = 0; k < s.n.size(); ++k) {
        const ansatz::AnsatzPoint a = ansatz_at(s.domain.i0 + static_cast<long long>(k));
        dn[k] = s.n[k] - a.n;
        dm[k] = s.m[k] - a.m;
        dp[k] = s.phi[k] - a.phi;
    }
    const double a = norm_h1(dn), b = norm_h1(dm), c = norm_h1(dp);
    r.h1_pert_norm = std::sqrt(a * a + b * b + c * c);
    r.phi_l2 = norm_l2(dp);
    const SpatialField Phi = cumulative_integrate(dn), Psi = cumulative_integrate(dm);
    r.anti_phi = norm_l2(Phi);
    r.anti_psi = norm_l2(Psi);
    r.anti_phi_end = Phi.values.back();
    r.anti_psi_end = Psi.values.back();
    r.mass_total = solver.mass();
    r.momentum_total = solver.momentum();
    r.conservation_defect = std::max(std::abs(r.mass_total - ref.mass0 - solver.mass_inflow()),
                                     std::abs(r.momentum_total - ref.momentum0 - solver.momentum_inflow()));
    r.pb_residual = solver.pb_residual();
}

template <class Record>
DiagnosticsSeries drive(CauchySolver& solver, const RunOptions& opt, Record&& record)
{
    if (!(opt.output_interval > 0.0) || !(opt.T_end > 0.0)) throw InvalidArgument("run needs T_end > 0 and an output interval");
    const auto outputs = static_cast<std::size_t>(std::llround(opt.T_end / opt.output_interval));
    if (outputs == 0 || std::abs(static_cast<double>(outputs) * opt.output_interval - opt.T_end) > 1e-9 * opt.T_end)
        throw InvalidArgument("T_end must be a whole number of output intervals");
    DiagnosticsSeries out;
    auto emit = [&](double t) {
        out.records.push_back(record(t));
        if (opt.on_record) opt.on_record(out.records.back());
    };
    const double t0 = solver.state().t;
    emit(t0);
    for (std::size_t j = 1; j <= outputs; ++j) {
        const double t_target = t0 + static_cast<double>(j) * opt.output_interval;
        const double span = t_target - solver.state().t;
        const double dt_max = solver.stable_dt(opt.cfl_hyperbolic, opt.cfl_parabolic);
        const auto sub = static_cast<std::size_t>(std::ceil(span / dt_max * (1.0 + 1e-12)));
        const double dt = span / static_cast<double>(sub);
        for (std::size_t k = 0; k < sub; ++k) solver.step(dt);
        out.steps += sub;
        emit(t_target);
    }
    out.final_state = solver.state();
    return out;
}

}  // namespace

DiagnosticsSeries run_shock(CauchySolver& solver, const profile::ShockProfile& p, const RunOptions& opt)
{
    const Reference ref{solver.mass(), solver.momentum()};
    const double s = p.connection.s, h = solver.state().domain.h;
    auto record = [&](double t) {
        const CauchyState& st = solver.state();
        DiagnosticRecord r;
        r.t = t;
        const auto [k0, k1] = window_nodes(st.domain, s * t + opt.window_lo, s * t + opt.window_hi);
        for (std::size_t k = k0; k <= k1; ++k) {
            const profile::ProfileSample ps = p.sample(st.domain.x(k) - s * t - opt.X_inf);
            r.dist_linf = std::max({r.dist_linf, std::abs(st.n[k] - ps.n), std::abs(st.m[k] - p.m_of_n(ps.n)),
                                    std::abs(st.phi[k] - ps.phi)});
        }
        r.shift_obs = observed_shift(st, p, st.domain.x(k0), st.domain.x(k1), opt.X_inf - 3.0, opt.X_inf + 3.0, h / 10.0);
        const auto [X, Y] = opt.shifts ? opt.shifts(t) : std::pair<double, double>{opt.X_inf, opt.X_inf};
        const ansatz::CellPair c = solver.cells();
        fill_common(r, solver, ref, [&](long long i) { return ansatz::shock_point(p, c, h, t, i, X, Y); });
        return r;
    };
    return drive(solver, opt, record);
}

DiagnosticsSeries run_rarefaction(CauchySolver& solver, const ansatz::SmoothRarefaction& r, const RunOptions& opt)
{
    const Reference ref{solver.mass(), solver.momentum()};
    const double h = solver.state().domain.h;
    auto record = [&](double t) {
        const CauchyState& st = solver.state();
        DiagnosticRecord rec;
        rec.t = t;
        rec.shift_obs = std::numeric_limits<double>::quiet_NaN();
        const auto [k0, k1] = window_nodes(st.domain, opt.window_lo, opt.window_hi);
        const double tt = std::max(t, std::numeric_limits<double>::min());
        for (std::size_t k = k0; k <= k1; ++k) {
            const riemann::FanState f = riemann::rarefaction_exact(r.endpoints(), st.domain.x(k) / tt);
            rec.dist_linf = std::max({rec.dist_linf, std::abs(st.n[k] - f.n), std::abs(st.m[k] - f.n * f.u),
                                      std::abs(st.phi[k] - f.phi)});
        }
        const ansatz::CellPair c = solver.cells();
        fill_common(rec, solver, ref, [&](long long i) { return ansatz::rarefaction_point(r, c, h, t, i); });
        return rec;
    };
    return drive(solver, opt, record);
}

double series_difference(const DiagnosticsSeries& a, const DiagnosticsSeries& b)
{
    double diff = 0.0;
    std::size_t j = 0;
    for (const auto& ra : a.records) {
        while (j < b.records.size() && b.records[j].t < ra.t - 1e-9) ++j;
        if (j == b.records.size()) break;
        if (std::abs(b.records[j].t - ra.t) <= 1e-9) diff = std::max(diff, std::abs(ra.dist_linf - b.records[j].dist_linf));
    }
    return diff;
}

}  // namespace nsp::cauchy
