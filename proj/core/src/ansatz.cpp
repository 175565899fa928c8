#include "nsp/ansatz.hpp"

#include "nsp/error.hpp"
#include "nsp/operators.hpp"
#include "nsp/regression.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace nsp::ansatz {

BurgersSample burgers_smooth(double x, double t, double w_minus, double w_plus, double eps)
{
    if (!(t >= 0.0)) throw InvalidArgument("burgers_smooth: t must be nonnegative");
    if (!(w_plus >= w_minus)) throw InvalidArgument("burgers_smooth: requires w+ >= w-");
    if (!(eps > 0.0)) throw InvalidArgument("burgers_smooth: epsilon must be positive");
    const double a = 0.5 * (w_plus + w_minus), b = 0.5 * (w_plus - w_minus);
    auto w0 = [&](double xi) { return a + b * std::tanh(eps * xi); };

    // x = xi + t w0(xi) is increasing in xi; the root lies in the bracket below.
    double lo = x - t * w_plus, hi = x - t * w_minus;
    double xi = std::clamp(x - t * a, lo, hi);
    if (t > 0.0 && b > 0.0) {
        const double scale = 1.0 + std::abs(x);
        for (int it = 0; it < 200; ++it) {
            const double T = std::tanh(eps * xi);
            const double f = xi + t * (a + b * T) - x;
            if (f > 0.0)
                hi = xi;
            else
                lo = xi;
            if (std::abs(f) <= 1e-15 * scale || hi - lo <= 1e-15 * scale) break;
            const double fp = 1.0 + t * b * eps * (1.0 - T * T);
            double next = xi - f / fp;
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
            xi = next;
        }
    } else {
        xi = x - t * a;
    }

    const double T = std::tanh(eps * xi), S = 1.0 - T * T;
    const double d1 = b * eps * S;
    const double d2 = -2.0 * b * eps * eps * T * S;
    const double d3 = -2.0 * b * eps * eps * eps * S * (1.0 - 3.0 * T * T);
    const double q = 1.0 / (1.0 + t * d1);  // dxi/dx
    BurgersSample out;
    out.w = w0(xi);
    out.wx = d1 * q;
    out.wxx = d2 * q * q * q;
    out.wxxx = d3 * std::pow(q, 4) - 3.0 * t * d2 * d2 * std::pow(q, 5);
    return out;
}

SmoothRarefaction::SmoothRarefaction(const riemann::RarefactionEndpoints& r, double epsilon)
    : r_(r), eps_(epsilon), c_(std::sqrt(r.A + 1.0))
{
    if (!(epsilon > 0.0)) throw InvalidArgument("SmoothRarefaction: epsilon must be positive");
    if (!(r.right.n >= r.left.n)) throw InvalidArgument("SmoothRarefaction: not a 2-rarefaction (n+ < n-)");
}

RarefactionSample SmoothRarefaction::at(double x, double t) const
{
    const BurgersSample B = burgers_smooth(x, t + 1.0, r_.w_left(), r_.w_right(), eps_);
    RarefactionSample s;
    s.u = B.w - c_;
    s.u_x = B.wx;
    s.u_xx = B.wxx;
    s.u_xxx = B.wxxx;
    s.n = r_.left.n * std::exp((s.u - r_.left.u) / c_);
    const double a = s.u_x / c_, b = s.u_xx / c_, c = s.u_xxx / c_;
    s.n_x = s.n * a;
    s.n_xx = s.n * (b + a * a);
    s.n_xxx = s.n * (c + 3.0 * a * b + a * a * a);
    s.phi = -std::log(s.n);
    s.phi_x = -a;
    s.phi_xx = -b;
    s.phi_xxx = -c;
    return s;
}

double SmoothRarefaction::sigma(double x, double t) const
{
    const double d = r_.right.n - r_.left.n;
    return d == 0.0 ? 0.0 : (at(x, t).n - r_.left.n) / d;
}

double SmoothRarefaction::eta(double x, double t) const
{
    const double d = r_.right.u - r_.left.u;
    return d == 0.0 ? 0.0 : (at(x, t).u - r_.left.u) / d;
}

double SmoothRarefaction::delta() const
{
    return std::abs(r_.right.n - r_.left.n) + std::abs(r_.right.u - r_.left.u);
}

std::pair<double, double> SmoothRarefaction::support(double t, double tol) const
{
    // 1 - tanh(eps xi) <= 2 e^{-2 eps xi} <= tol beyond xi*.
    const double xi = std::log(2.0 / tol) / (2.0 * eps_);
    return {-xi + (t + 1.0) * r_.w_left(), xi + (t + 1.0) * r_.w_right()};
}

std::vector<DerivativeEnvelope> rarefaction_envelopes(const SmoothRarefaction& r, const std::vector<double>& times,
                                                      double h)
{
    const double inf = std::numeric_limits<double>::infinity();
    const double ps[3] = {1.0, 2.0, inf};
    std::vector<DerivativeEnvelope> out;
    for (int k = 1; k <= 3; ++k)
        for (double p : ps) out.push_back({k, p, 0.0, 0.0});

    const double d = r.delta(), e = r.epsilon();
    for (double t : times) {
        if (!(t > 0.0)) throw InvalidArgument("rarefaction_envelopes: times must be positive");
        const auto [lo, hi] = r.support(t, 1e-16);
        const auto N = static_cast<std::size_t>(std::ceil((hi - lo + 20.0) / h)) + 1;
        double l1[3] = {0, 0, 0}, l2[3] = {0, 0, 0}, li[3] = {0, 0, 0};
        for (std::size_t i = 0; i < N; ++i) {
            const double x = lo - 10.0 + static_cast<double>(i) * h;
            const RarefactionSample s = r.at(x, t);
            const double v[3] = {std::sqrt(s.n_x * s.n_x + s.u_x * s.u_x + s.phi_x * s.phi_x),
                                 std::sqrt(s.n_xx * s.n_xx + s.u_xx * s.u_xx + s.phi_xx * s.phi_xx),
                                 std::sqrt(s.n_xxx * s.n_xxx + s.u_xxx * s.u_xxx + s.phi_xxx * s.phi_xxx)};
            for (int k = 0; k < 3; ++k) {
                l1[k] += h * v[k];
                l2[k] += h * v[k] * v[k];
                li[k] = std::max(li[k], v[k]);
            }
        }
        for (auto& env : out) {
            const int k = env.order - 1;
            const double ip = std::isinf(env.p) ? 0.0 : 1.0 / env.p;
            const double norm = std::isinf(env.p) ? li[k] : (env.p == 1.0 ? l1[k] : std::sqrt(l2[k]));
            double bound = 0.0;
            if (env.order == 1)
                bound = std::min(d * std::pow(e, 1.0 - ip), std::pow(d, ip) * std::pow(t, -1.0 + ip));
            else if (env.order == 2)
                bound = std::min(d * std::pow(e, 2.0 - ip), std::pow(e, 1.0 - ip) / t);
            else
                bound = std::min(d * std::pow(e, 3.0 - ip), std::pow(e, 2.0 - ip) / t);
            const double c = norm / bound;
            if (c > env.c_max) {
                env.c_max = c;
                env.t_at_max = t;
            }
        }
    }
    return out;
}

double distance_to_fan(const SmoothRarefaction& r, double t, double h)
{
    if (!(t > 0.0)) throw InvalidArgument("distance_to_fan: t must be positive");
    const auto [lo, hi] = r.support(t, 1e-16);
    const double a = std::min(lo, r.endpoints().w_left() * t) - 10.0;
    const double b = std::max(hi, r.endpoints().w_right() * t) + 10.0;
    const auto N = static_cast<std::size_t>(std::ceil((b - a) / h)) + 1;
    double dist = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        const double x = a + static_cast<double>(i) * h;
        const RarefactionSample s = r.at(x, t);
        const riemann::FanState f = riemann::rarefaction_exact(r.endpoints(), x / t);
        dist = std::max({dist, std::abs(s.n - f.n), std::abs(s.u - f.u), std::abs(s.phi - f.phi)});
    }
    return dist;
}

CellPair CellPair::from_histories(const periodic::PeriodicHistory& minus, const periodic::PeriodicHistory& plus,
                                  std::size_t idx)
{
    if (idx >= minus.snapshots.size() || idx >= plus.snapshots.size())
        throw InvalidArgument("ansatz: time outside the periodic histories");
    return {&minus.snapshots[idx], &plus.snapshots[idx], minus.base, plus.base};
}

namespace {

std::size_t wrap(long long i, std::size_t P)
{
    long long r = i % static_cast<long long>(P);
    if (r < 0) r += static_cast<long long>(P);
    return static_cast<std::size_t>(r);
}

struct Osc {
    double rho = 0, w = 0, v = 0, vphi = 0;
};

Osc oscillation(const periodic::PeriodicSolver::State& s, const riemann::EndState& base, long long i)
{
    const std::size_t k = wrap(i, s.n.size());
    return {s.n[k] - base.n, s.m[k] - base.m, s.m[k] / s.n[k] - base.u, s.phi[k] - base.phi};
}

AnsatzFields make_fields(double h, double t, long long i0, long long i1)
{
    if (i1 <= i0 + 4) throw InvalidArgument("ansatz: window too small");
    AnsatzFields f;
    f.t = t;
    f.i0 = i0;
    const Grid1D g(static_cast<double>(i0) * h, static_cast<double>(i1) * h, static_cast<std::size_t>(i1 - i0 + 1));
    f.n = SpatialField(g, BoundaryKind::Dirichlet);
    f.m = f.u = f.phi = f.n;
    return f;
}

double spacing_of(const AnsatzFields& f) { return f.n.grid.spacing(); }

}  // namespace

AnsatzPoint shock_point(const profile::ShockProfile& p, const CellPair& cells, double h, double t, long long i,
                        double X, double Y)
{
    const double x = static_cast<double>(i) * h, s = p.connection.s;
    const double xi_x = x - s * t - X, xi_y = x - s * t - Y;
    const double sx = p.sigma(xi_x), sy = p.sigma(xi_y);
    const Osc lm = oscillation(*cells.minus, cells.minus_base, i);
    const Osc lp = oscillation(*cells.plus, cells.plus_base, i);
    AnsatzPoint a;
    a.n = p.n_at(xi_x) + lm.rho * (1.0 - sx) + lp.rho * sx;
    a.m = p.m_of_n(p.n_at(xi_y)) + lm.w * (1.0 - sy) + lp.w * sy;
    a.phi = p.sample(xi_x).phi + lm.vphi * (1.0 - sx) + lp.vphi * sx;
    return a;
}

AnsatzPoint rarefaction_point(const SmoothRarefaction& r, const CellPair& cells, double h, double t, long long i)
{
    const double x = static_cast<double>(i) * h;
    const RarefactionSample s = r.at(x, t);
    const auto& e = r.endpoints();
    const double sg = e.right.n == e.left.n ? 0.0 : (s.n - e.left.n) / (e.right.n - e.left.n);
    const double et = e.right.u == e.left.u ? 0.0 : (s.u - e.left.u) / (e.right.u - e.left.u);
    const Osc lm = oscillation(*cells.minus, cells.minus_base, i);
    const Osc lp = oscillation(*cells.plus, cells.plus_base, i);
    AnsatzPoint a;
    a.n = s.n + lm.rho * (1.0 - sg) + lp.rho * sg;
    const double u = s.u + lm.v * (1.0 - et) + lp.v * et;
    a.m = a.n * u;
    a.phi = s.phi + lm.vphi * (1.0 - sg) + lp.vphi * sg;
    return a;
}

AnsatzFields build_shock_ansatz(const profile::ShockProfile& p, const periodic::PeriodicHistory& minus,
                                const periodic::PeriodicHistory& plus, std::size_t idx, double X, double Y,
                                long long i0, long long i1)
{
    const CellPair cells = CellPair::from_histories(minus, plus, idx);
    const double h = minus.spacing, t = minus.times[idx];
    AnsatzFields f = make_fields(h, t, i0, i1);
    for (long long i = i0; i <= i1; ++i) {
        const auto k = static_cast<std::size_t>(i - i0);
        const AnsatzPoint a = shock_point(p, cells, h, t, i, X, Y);
        f.n[k] = a.n;
        f.m[k] = a.m;
        f.u[k] = a.m / a.n;
        f.phi[k] = a.phi;
    }
    return f;
}

AnsatzFields build_profile_fields(const profile::ShockProfile& p, double h, double t, double X, long long i0,
                                  long long i1)
{
    AnsatzFields f = make_fields(h, t, i0, i1);
    for (long long i = i0; i <= i1; ++i) {
        const auto k = static_cast<std::size_t>(i - i0);
        const profile::ProfileSample s = p.sample(static_cast<double>(i) * h - p.connection.s * t - X);
        f.n[k] = s.n;
        f.m[k] = p.m_of_n(s.n);
        f.u[k] = f.m[k] / s.n;
        f.phi[k] = s.phi;
    }
    return f;
}

AnsatzFields build_rarefaction_ansatz(const SmoothRarefaction& r, const periodic::PeriodicHistory& minus,
                                      const periodic::PeriodicHistory& plus, std::size_t idx, long long i0,
                                      long long i1)
{
    const CellPair cells = CellPair::from_histories(minus, plus, idx);
    const double h = minus.spacing, t = minus.times[idx];
    AnsatzFields f = make_fields(h, t, i0, i1);
    for (long long i = i0; i <= i1; ++i) {
        const auto k = static_cast<std::size_t>(i - i0);
        const AnsatzPoint a = rarefaction_point(r, cells, h, t, i);
        f.n[k] = a.n;
        f.m[k] = a.m;
        f.u[k] = a.m / a.n;
        f.phi[k] = a.phi;
    }
    return f;
}

AnsatzFields build_rarefaction_background(const SmoothRarefaction& r, double h, double t, long long i0, long long i1)
{
    AnsatzFields f = make_fields(h, t, i0, i1);
    for (long long i = i0; i <= i1; ++i) {
        const auto k = static_cast<std::size_t>(i - i0);
        const RarefactionSample s = r.at(static_cast<double>(i) * h, t);
        f.n[k] = s.n;
        f.u[k] = s.u;
        f.m[k] = s.n * s.u;
        f.phi[k] = s.phi;
    }
    return f;
}

double ErrorTerms::h2_total() const { return std::sqrt(h2[0] * h2[0] + h2[1] * h2[1] + h2[2] * h2[2]); }
double ErrorTerms::anti_total() const { return std::hypot(anti_l2[0], anti_l2[1]); }
double ResidualRecord::h_total() const { return std::sqrt(h1_h2 * h1_h2 + h2_h2 * h2_h2 + h3_h2 * h3_h2); }
double ResidualRecord::H_total() const { return std::hypot(H1_l2, H2_l2); }

namespace {

void check_triple(const AnsatzFields& a, const AnsatzFields& b, const AnsatzFields& c)
{
    if (a.i0 != b.i0 || b.i0 != c.i0 || a.n.size() != b.n.size() || b.n.size() != c.n.size())
        throw InvalidArgument("error terms: snapshots must share the window");
}

using Triple = std::array<std::vector<double>, 3>;

Triple shock_raw(const AnsatzFields& pv, const AnsatzFields& cu, const AnsatzFields& nx, double dt, double A)
{
    const std::size_t N = cu.n.size();
    const double h = spacing_of(cu), i2h = 0.5 / h, ih2 = 1.0 / (h * h), i2t = 0.5 / dt;
    const auto& n = cu.n.values;
    const auto& m = cu.m.values;
    const auto& u = cu.u.values;
    const auto& p = cu.phi.values;
    std::vector<double> F(N, 0.0);
    for (std::size_t i = 1; i + 1 < N; ++i) {
        const double px = (p[i + 1] - p[i - 1]) * i2h, pxx = (p[i + 1] - 2.0 * p[i] + p[i - 1]) * ih2;
        F[i] = m[i] * m[i] / n[i] + (A + 1.0) * n[i] - 0.5 * px * px - pxx;
    }
    Triple r;
    for (auto& v : r) v.assign(N - 4, 0.0);
    for (std::size_t i = 2; i + 2 < N; ++i) {
        const std::size_t k = i - 2;
        r[0][k] = (nx.n[i] - pv.n[i]) * i2t + (m[i + 1] - m[i - 1]) * i2h;
        r[1][k] = (nx.m[i] - pv.m[i]) * i2t + (F[i + 1] - F[i - 1]) * i2h - (u[i + 1] - 2.0 * u[i] + u[i - 1]) * ih2;
        r[2][k] = (p[i + 1] - 2.0 * p[i] + p[i - 1]) * ih2 - n[i] + std::exp(-p[i]);
    }
    return r;
}

Triple rare_raw(const AnsatzFields& pv, const AnsatzFields& cu, const AnsatzFields& nx, double dt, double A,
                const AnsatzFields& bg)
{
    const std::size_t N = cu.n.size();
    const double h = spacing_of(cu), i2h = 0.5 / h, ih2 = 1.0 / (h * h), i2t = 0.5 / dt;
    const auto& n = cu.n.values;
    const auto& u = cu.u.values;
    const auto& p = cu.phi.values;
    const auto& ur = bg.u.values;
    const auto& nr = bg.n.values;
    const auto& pr = bg.phi.values;
    Triple r;
    for (auto& v : r) v.assign(N - 4, 0.0);
    for (std::size_t i = 2; i + 2 < N; ++i) {
        const std::size_t k = i - 2;
        const double uxx = (u[i + 1] - 2.0 * u[i] + u[i - 1]) * ih2;
        const double pxx = (p[i + 1] - 2.0 * p[i] + p[i - 1]) * ih2;
        const double urxx = (ur[i + 1] - 2.0 * ur[i] + ur[i - 1]) * ih2;
        const double prxx = (pr[i + 1] - 2.0 * pr[i] + pr[i - 1]) * ih2;
        r[0][k] = -((nx.n[i] - pv.n[i]) * i2t + (n[i + 1] * u[i + 1] - n[i - 1] * u[i - 1]) * i2h);
        r[1][k] = -((nx.u[i] - pv.u[i]) * i2t + u[i] * (u[i + 1] - u[i - 1]) * i2h +
                    A * (n[i + 1] - n[i - 1]) * i2h / n[i] - (p[i + 1] - p[i - 1]) * i2h - uxx / n[i]) -
                  urxx / nr[i];
        r[2][k] = n[i] - std::exp(-p[i]) - pxx + prxx;
    }
    return r;
}

ErrorTerms finish(const Triple& r, const AnsatzFields& cu)
{
    const std::size_t N = cu.n.size();
    const Grid1D g(cu.n.grid.x(2), cu.n.grid.x(N - 3), N - 4);
    ErrorTerms e;
    e.t = cu.t;
    e.r1 = SpatialField(g, r[0], BoundaryKind::Dirichlet);
    e.r2 = SpatialField(g, r[1], BoundaryKind::Dirichlet);
    e.r3 = SpatialField(g, r[2], BoundaryKind::Dirichlet);
    e.h2[0] = norm_h2(e.r1);
    e.h2[1] = norm_h2(e.r2);
    e.h2[2] = norm_h2(e.r3);
    e.anti_l2[0] = norm_l2(cumulative_integrate(e.r1));
    e.anti_l2[1] = norm_l2(cumulative_integrate(e.r2));
    return e;
}

}  // namespace

ErrorTerms shock_error_terms(const AnsatzFields& prev, const AnsatzFields& cur, const AnsatzFields& next, double dt,
                             double A, const AnsatzFields* bg_prev, const AnsatzFields* bg_cur,
                             const AnsatzFields* bg_next)
{
    if (!(dt > 0.0)) throw InvalidArgument("error terms: dt must be positive");
    check_triple(prev, cur, next);
    Triple r = shock_raw(prev, cur, next, dt, A);
    if (bg_prev && bg_cur && bg_next) {
        check_triple(prev, *bg_prev, *bg_cur);
        check_triple(*bg_prev, *bg_cur, *bg_next);
        const Triple b = shock_raw(*bg_prev, *bg_cur, *bg_next, dt, A);
        for (int c = 0; c < 3; ++c)
            for (std::size_t k = 0; k < r[c].size(); ++k) r[c][k] -= b[c][k];
    }
    return finish(r, cur);
}

ErrorTerms rarefaction_error_terms(const AnsatzFields& prev, const AnsatzFields& cur, const AnsatzFields& next,
                                   double dt, double A, const AnsatzFields& bg_prev, const AnsatzFields& bg_cur,
                                   const AnsatzFields& bg_next)
{
    if (!(dt > 0.0)) throw InvalidArgument("error terms: dt must be positive");
    check_triple(prev, cur, next);
    check_triple(bg_prev, bg_cur, bg_next);
    check_triple(cur, bg_cur, bg_cur);
    Triple r = rare_raw(prev, cur, next, dt, A, bg_cur);
    const Triple b = rare_raw(bg_prev, bg_cur, bg_next, dt, A, bg_cur);
    for (int c = 0; c < 3; ++c)
        for (std::size_t k = 0; k < r[c].size(); ++k) r[c][k] -= b[c][k];
    return finish(r, cur);
}

namespace {

ResidualRecord record_of(const ErrorTerms& e)
{
    return {e.t, e.h2[0], e.h2[1], e.h2[2], e.anti_l2[0], e.anti_l2[1]};
}

std::pair<long long, long long> profile_window(const profile::ShockProfile& p, double h, double t, double X)
{
    const double c = p.connection.s * t + X;
    return {static_cast<long long>(std::floor((c + p.grid.x_min) / h)),
            static_cast<long long>(std::ceil((c + p.grid.x_max) / h))};
}

}  // namespace

std::vector<ResidualRecord> shock_residual_series(const shifts::ShiftSystem& sys, const shifts::ShiftTrajectory& traj,
                                                  double t_start, double t_end)
{
    const auto& p = sys.profile();
    const auto& hm = sys.minus();
    const auto& hp = sys.plus();
    const double h = sys.spacing(), A = p.connection.A;
    std::vector<ResidualRecord> out;
    const auto& S = traj.samples;
    for (std::size_t k = 1; k + 1 < S.size(); ++k) {
        if (S[k].t < t_start - 1e-12 || S[k].t > t_end + 1e-12) continue;
        const double dt = S[k + 1].t - S[k].t;
        const auto [i0, i1] = profile_window(p, h, S[k].t, S[k].X);
        AnsatzFields a[3], b[3];
        for (int j = 0; j < 3; ++j) {
            const auto& smp = S[k + j - 1];
            a[j] = build_shock_ansatz(p, hm, hp, hm.index_at(smp.t), smp.X, smp.Y, i0, i1);
            b[j] = build_profile_fields(p, h, smp.t, S[k].X, i0, i1);
        }
        out.push_back(record_of(shock_error_terms(a[0], a[1], a[2], dt, A, &b[0], &b[1], &b[2])));
    }
    return out;
}

std::vector<ResidualRecord> rarefaction_residual_series(const SmoothRarefaction& r,
                                                        const periodic::PeriodicHistory& minus,
                                                        const periodic::PeriodicHistory& plus, double t_start,
                                                        double t_end, double stride_time)
{
    const double h = minus.spacing, dt = minus.output_interval, A = r.endpoints().A;
    const auto stride = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(stride_time / dt)));
    const std::size_t last = std::min(minus.times.size(), plus.times.size()) - 1;
    std::vector<ResidualRecord> out;
    for (std::size_t k = 1; k < last; k += stride) {
        const double t = minus.times[k];
        if (t < t_start - 1e-12 || t > t_end + 1e-12) continue;
        const auto [lo, hi] = r.support(t, 1e-12);
        const auto i0 = static_cast<long long>(std::floor((lo - 10.0) / h));
        const auto i1 = static_cast<long long>(std::ceil((hi + 10.0) / h));
        AnsatzFields a[3], b[3];
        for (int j = 0; j < 3; ++j) {
            a[j] = build_rarefaction_ansatz(r, minus, plus, k + j - 1, i0, i1);
            b[j] = build_rarefaction_background(r, h, minus.times[k + j - 1], i0, i1);
        }
        out.push_back(record_of(rarefaction_error_terms(a[0], a[1], a[2], dt, A, b[0], b[1], b[2])));
    }
    return out;
}

double envelope_constant(const std::vector<double>& t, const std::vector<double>& norms, double nu, double delta,
                         double power, double rate)
{
    if (t.size() != norms.size() || t.empty()) throw InvalidArgument("envelope_constant: empty or mismatched series");
    if (!(nu > 0.0)) throw InvalidArgument("envelope_constant: nu must be positive");
    double c = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k)
        c = std::max(c, norms[k] / (nu * std::pow(delta, power) * std::exp(-rate * t[k])));
    return c;
}

std::vector<RemainderSeries> lemma_remainders(const shifts::ShiftSystem& sys, const shifts::ShiftTrajectory& traj,
                                              double t_start, double t_end)
{
    const auto& p = sys.profile();
    const auto& hm = sys.minus();
    const auto& hp = sys.plus();
    const double h = sys.spacing(), s = p.connection.s;
    const auto& L = p.connection.left;
    const auto& R = p.connection.right;
    const double alpha = 1.0, beta = 2.0;

    const char* names[] = {"identity_n",   "reciprocal_n",  "square_u",  "exp_phi",        "linear_nu",
                           "product_nu",   "derivative_u",  "corollary", "matched_square", "plain_square"};
    constexpr int K = 10;
    std::vector<RemainderSeries> out(K);
    for (int c = 0; c < K; ++c) {
        out[c].name = names[c];
        out[c].growth_only = (c == K - 1);
    }

    for (const auto& smp : traj.samples) {
        if (smp.t < t_start - 1e-12 || smp.t > t_end + 1e-12) continue;
        const std::size_t idx = hm.index_at(smp.t);
        const CellPair cells = CellPair::from_histories(hm, hp, idx);
        const auto [i0, i1] = profile_window(p, h, smp.t, smp.X);
        const auto N = static_cast<std::size_t>(i1 - i0 + 1);

        // Pointwise quantities on the window.
        std::vector<double> ns(N), us(N), ps(N), g1(N), nm(N), np(N), um(N), up(N), pm(N), pp(N), nsh(N), ush(N),
            psh(N);
        for (std::size_t k = 0; k < N; ++k) {
            const long long i = i0 + static_cast<long long>(k);
            const double xi = static_cast<double>(i) * h - s * smp.t - smp.X;
            const profile::ProfileSample ps_ = p.sample(xi);
            ns[k] = p.n_at(xi);
            us[k] = p.u_of_n(ns[k]);
            ps[k] = ps_.phi;
            g1[k] = p.sigma(xi);
            const auto km = wrap(i, cells.minus->n.size()), kp = wrap(i, cells.plus->n.size());
            nm[k] = cells.minus->n[km];
            um[k] = cells.minus->m[km] / nm[k];
            pm[k] = cells.minus->phi[km];
            np[k] = cells.plus->n[kp];
            up[k] = cells.plus->m[kp] / np[k];
            pp[k] = cells.plus->phi[kp];
            const AnsatzPoint a = shock_point(p, cells, h, smp.t, i, smp.X, smp.Y);
            nsh[k] = a.n;
            ush[k] = a.m / a.n;
            psh[k] = a.phi;
        }

        std::array<std::vector<double>, K> r;
        for (auto& v : r) v.assign(N, 0.0);
        const double us2m = L.u * L.u, us2p = R.u * R.u;
        for (std::size_t k = 0; k < N; ++k) {
            const double g = g1[k], q = 1.0 - g;
            r[0][k] = nsh[k] - ns[k] - (nm[k] - L.n) * q - (np[k] - R.n) * g;
            r[1][k] = 1.0 / nsh[k] - 1.0 / ns[k] - (1.0 / nm[k] - 1.0 / L.n) * q - (1.0 / np[k] - 1.0 / R.n) * g;
            r[2][k] = ush[k] * ush[k] - us[k] * us[k] - (um[k] * um[k] - us2m) * q - (up[k] * up[k] - us2p) * g;
            r[3][k] = std::exp(-psh[k]) - std::exp(-ps[k]) - (std::exp(-pm[k]) - std::exp(-L.phi)) * q -
                      (std::exp(-pp[k]) - std::exp(-R.phi)) * g;
            r[4][k] = alpha * nsh[k] + beta * ush[k] - alpha * ns[k] - beta * us[k] -
                      (alpha * (nm[k] - L.n) + beta * (um[k] - L.u)) * q -
                      (alpha * (np[k] - R.n) + beta * (up[k] - R.u)) * g;
            r[5][k] = nsh[k] * ush[k] - ns[k] * us[k] - (nm[k] * um[k] - L.n * L.u) * q -
                      (np[k] * up[k] - R.n * R.u) * g;
            const double gm = (us[k] * us[k] - us2m) / (us2p - us2m);
            r[8][k] = ush[k] * ush[k] - um[k] * um[k] * (1.0 - gm) - up[k] * up[k] * gm;
            r[9][k] = ush[k] * ush[k] - um[k] * um[k] * q - up[k] * up[k] * g;
        }
        const double i2h = 0.5 / h;
        auto dx = [&](const std::vector<double>& f, std::size_t k) { return (f[k + 1] - f[k - 1]) * i2h; };
        std::vector<double> qsh(N), qs(N), qm(N), qp(N);
        for (std::size_t k = 0; k < N; ++k) {
            qsh[k] = ush[k] * ush[k] / nsh[k];
            qs[k] = us[k] * us[k] / ns[k];
            qm[k] = um[k] * um[k] / nm[k];
            qp[k] = up[k] * up[k] / np[k];
        }
        for (std::size_t k = 1; k + 1 < N; ++k) {
            const double g = g1[k], q = 1.0 - g;
            r[6][k] = dx(ush, k) - dx(us, k) - dx(um, k) * q - dx(up, k) * g;
            r[7][k] = dx(qsh, k) - dx(qs, k) - dx(qm, k) * q - dx(qp, k) * g;
        }

        for (int c = 0; c < K; ++c) {
            double li = 0.0, l1 = 0.0, l2 = 0.0;
            for (std::size_t k = 1; k + 1 < N; ++k) {
                const double v = std::abs(r[c][k]);
                li = std::max(li, v);
                l1 += h * v;
                l2 += h * v * v;
            }
            out[c].t.push_back(smp.t);
            out[c].linf.push_back(li);
            out[c].l1.push_back(l1);
            out[c].l2.push_back(std::sqrt(l2));
        }
    }
    return out;
}

std::vector<RemainderCheck> lemma_error_checks(const std::vector<RemainderSeries>& series, double alpha_hat,
                                               double t_fit_start)
{
    std::vector<RemainderCheck> out;
    for (const auto& s : series) {
        RemainderCheck c;
        c.name = s.name;
        c.growth_only = s.growth_only;
        if (s.t.empty()) throw InvalidArgument("lemma_error_checks: empty series " + s.name);
        if (s.growth_only) {
            const double t0 = s.t.front();
            double ratio = 0.0;
            for (const auto* norms : {&s.l1, &s.l2}) {
                const double ip = norms == &s.l1 ? 1.0 : 0.5;
                const double c0 = norms->front() / std::pow(1.0 + t0, ip);
                if (!(c0 > 0.0)) continue;
                for (std::size_t k = 0; k < s.t.size(); ++k)
                    ratio = std::max(ratio, (*norms)[k] / (c0 * std::pow(1.0 + s.t[k], ip)));
            }
            c.growth_ratio = ratio;
            c.pass = ratio <= 10.0;
            out.push_back(c);
            continue;
        }
        const double peak = *std::max_element(s.linf.begin(), s.linf.end());
        if (peak <= 1e-13) {
            c.exact = true;
            c.pass = true;
            out.push_back(c);
            continue;
        }
        std::vector<double> ts, ls;
        for (std::size_t k = 0; k < s.t.size(); ++k) {
            if (s.t[k] < t_fit_start || !(s.linf[k] > 1e-14)) continue;
            ts.push_back(s.t[k]);
            ls.push_back(std::log(s.linf[k]));
        }
        if (ts.size() >= 3) {
            const LinearFit f = fit_line(ts, ls);
            c.rate = -f.slope;
            c.r_squared = f.r_squared;
        }
        c.pass = c.rate >= 0.5 * alpha_hat;
        out.push_back(c);
    }
    return out;
}

double perturbation_nu(const periodic::PeriodicHistory& minus, const periodic::PeriodicHistory& plus)
{
    return std::max(minus.nu, plus.nu);
}

}  // namespace nsp::ansatz
