#include "nsp/shifts.hpp"

#include "nsp/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace nsp::shifts {

namespace {

double jump_n(const profile::ShockProfile& p) { return p.connection.right.n - p.connection.left.n; }
double jump_m(const profile::ShockProfile& p) { return p.connection.right.m - p.connection.left.m; }

// Three-point Gauss-Legendre rule per grid cell over [x_lo, 0] or [0, x_hi].
// The integrands have a kink at 0, where the trapezoid end error would
// otherwise dominate.
template <class F>
double half_line(const LineGrid& g, bool left, F f)
{
    static constexpr double node = 0.7745966692414834;
    static constexpr double wts[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
    const long long a = left ? g.lo : 0, b = left ? 0 : g.hi;
    double acc = 0.0;
    for (long long i = a; i < b; ++i) {
        const double mid = g.x(i) + 0.5 * g.h;
        acc += wts[0] * f(mid - 0.5 * g.h * node) + wts[1] * f(mid) + wts[2] * f(mid + 0.5 * g.h * node);
    }
    return acc * g.h;
}

periodic::PerturbationSpec shift_phases(periodic::PerturbationSpec s, double a)
{
    for (auto& md : s.modes) {
        const double kappa = 2.0 * std::numbers::pi * md.k / s.period;
        md.phase_n -= kappa * a;
        md.phase_m -= kappa * a;
    }
    return s;
}

double slowest_rate(const periodic::PeriodicHistory& h)
{
    if (h.spec.is_zero()) return 0.0;
    if (h.fitted_alpha) return *h.fitted_alpha;
    try {
        // Only the rate is needed here, so short histories are accepted.
        return periodic::fit_alpha(h, 1.0, 1e-10, 0.5).alpha;
    } catch (const Error&) {
        return 0.0;
    }
}

}  // namespace

double Bump::operator()(double x) const
{
    if (amplitude == 0.0) return 0.0;
    const double z = (x - center) / width;
    return amplitude * std::exp(-z * z);
}

double Bump::mass() const { return amplitude * width * std::sqrt(std::numbers::pi); }

double zero_mass_window(double x)
{
    if (std::abs(x) >= 2.0) return 0.0;
    const double c = std::cos(0.25 * std::numbers::pi * x);
    return c * c;
}

double ShockInitialData::n0(double x) const
{
    const double xi = x - translation;
    const double sg = profile->sigma(xi);
    return profile->n_at(xi) + minus.rho(x) * (1.0 - sg) + plus.rho(x) * sg + n_bump(xi);
}

double ShockInitialData::m0(double x) const
{
    const double xi = x - translation;
    const double sg = profile->sigma(xi);
    return profile->m_of_n(profile->n_at(xi)) + minus.w(x) * (1.0 - sg) + plus.w(x) * sg + m_bump(xi) +
           zero_mass_amplitude * zero_mass_window(xi);
}

ShockInitialData ShockInitialData::translated(double a) const
{
    ShockInitialData out = *this;
    out.translation += a;
    out.minus = shift_phases(minus, a);
    out.plus = shift_phases(plus, a);
    return out;
}

void ShockInitialData::validate() const
{
    if (profile == nullptr) throw InvalidArgument("shock initial data has no profile");
    minus.validate();
    plus.validate();
    if (!(n_bump.width > 0.0) || !(m_bump.width > 0.0)) throw InvalidArgument("bump widths must be positive");
    if (!std::isfinite(translation)) throw InvalidArgument("translation must be finite");
}

LineGrid line_grid(const ShockInitialData& d, double h, double margin)
{
    if (!(h > 0.0)) throw InvalidArgument("line_grid: spacing must be positive");
    d.validate();
    double lo = d.profile->grid.x_min + d.translation, hi = d.profile->grid.x_max + d.translation;
    for (const Bump* b : {&d.n_bump, &d.m_bump}) {
        if (b->amplitude == 0.0) continue;
        lo = std::min(lo, d.translation + b->center - 8.0 * b->width);
        hi = std::max(hi, d.translation + b->center + 8.0 * b->width);
    }
    LineGrid g;
    g.h = h;
    g.lo = static_cast<long long>(std::floor((lo - margin) / h));
    g.hi = static_cast<long long>(std::ceil((hi + margin) / h));
    g.lo = std::min(g.lo, -1LL);
    g.hi = std::max(g.hi, 1LL);
    return g;
}

MassLedger compute_ledger(const ShockInitialData& d, const LineGrid& g)
{
    const auto& p = *d.profile;
    auto dn = [&](double x) { return d.n0(x) - p.n_at(x); };
    auto dm = [&](double x) { return d.m0(x) - p.m_of_n(p.n_at(x)); };
    MassLedger L;
    L.int_n_left = half_line(g, true, [&](double x) { return dn(x) - d.minus.rho(x); });
    L.int_n_right = half_line(g, false, [&](double x) { return dn(x) - d.plus.rho(x); });
    L.int_m_left = half_line(g, true, [&](double x) { return dm(x) - d.minus.w(x); });
    L.int_m_right = half_line(g, false, [&](double x) { return dm(x) - d.plus.w(x); });
    return L;
}

namespace {

// A(Z) and A'(Z) for the jump field f = f+ - f- and the end-state jump.
template <class F>
std::pair<double, double> functional(const ShockInitialData& d, const LineGrid& g, double Z, double jump, F f)
{
    const auto& p = *d.profile;
    const double left = half_line(g, true, [&](double x) { return f(x) * p.sigma(x - Z); });
    const double right = half_line(g, false, [&](double x) { return f(x) * (1.0 - p.sigma(x - Z)); });
    double slope = 0.0;
    for (long long i = g.lo; i <= g.hi; ++i) slope += g.h * f(g.x(i)) * p.dsigma(g.x(i) - Z);
    return {Z + (right - left) / jump, 1.0 + slope / jump};
}

std::pair<double, double> a1_pair(const ShockInitialData& d, const LineGrid& g, double X)
{
    return functional(d, g, X, jump_n(*d.profile), [&](double x) { return d.plus.rho(x) - d.minus.rho(x); });
}

std::pair<double, double> a2_pair(const ShockInitialData& d, const LineGrid& g, double Y)
{
    return functional(d, g, Y, jump_m(*d.profile), [&](double x) { return d.plus.w(x) - d.minus.w(x); });
}

template <class F>
std::pair<double, double> newton_root(F fun, double offset, const char* name, int& iters)
{
    double z = 0.0;
    for (int it = 0; it < 50; ++it) {
        const auto [val, slope] = fun(z);
        if (std::abs(slope - 1.0) >= 1.0)
            throw NumericalFailure(std::string(name) + ": |A' - 1| >= 1, perturbation too large for the contraction");
        const double step = (val + offset) / slope;
        z -= step;
        iters = std::max(iters, it + 1);
        if (!std::isfinite(z) || std::abs(z) > 1e6) throw NumericalFailure(std::string(name) + ": Newton diverged");
        if (std::abs(step) <= 1e-14 * std::max(1.0, std::abs(z))) return {z, fun(z).second};
    }
    throw NumericalFailure(std::string(name) + ": Newton did not converge");
}

}  // namespace

double functional_a1(const ShockInitialData& d, const LineGrid& g, double X) { return a1_pair(d, g, X).first; }
double functional_a2(const ShockInitialData& d, const LineGrid& g, double Y) { return a2_pair(d, g, Y).first; }

InitialShifts initial_shifts(const ShockInitialData& d, const LineGrid& g, const MassLedger& ledger)
{
    d.validate();
    const auto& p = *d.profile;
    InitialShifts out;
    int it = 0;
    const auto rx = newton_root([&](double z) { return a1_pair(d, g, z); }, ledger.n_total() / jump_n(p), "X0", it);
    const auto ry = newton_root([&](double z) { return a2_pair(d, g, z); }, ledger.m_total() / jump_m(p), "Y0", it);
    out.X0 = rx.first;
    out.slope_a1 = rx.second;
    out.Y0 = ry.first;
    out.slope_a2 = ry.second;
    out.iterations = it;
    return out;
}

namespace {

std::vector<std::vector<double>> bracket_fields(const periodic::PeriodicHistory& h)
{
    const std::size_t P = h.points;
    const double ih = 1.0 / h.spacing, ih2 = ih * ih;
    std::vector<std::vector<double>> out(h.snapshots.size(), std::vector<double>(P));
    for (std::size_t k = 0; k < h.snapshots.size(); ++k) {
        const auto& s = h.snapshots[k];
        for (std::size_t i = 0; i < P; ++i) {
            const std::size_t l = (i + P - 1) % P, r = (i + 1) % P;
            const double u_x = 0.5 * ih * (s.m[r] / s.n[r] - s.m[l] / s.n[l]);
            const double phi_x = 0.5 * ih * (s.phi[r] - s.phi[l]);
            const double phi_xx = ih2 * (s.phi[r] - 2.0 * s.phi[i] + s.phi[l]);
            out[k][i] = s.m[i] * s.m[i] / s.n[i] + (h.A + 1.0) * s.n[i] - u_x - 0.5 * phi_x * phi_x - phi_xx;
        }
    }
    return out;
}

}  // namespace

ShiftSystem::ShiftSystem(const profile::ShockProfile& p, const periodic::PeriodicHistory& minus,
                         const periodic::PeriodicHistory& plus)
    : profile_(p), minus_(minus), plus_(plus)
{
    if (std::abs(minus.spacing - plus.spacing) > 1e-12 * minus.spacing)
        throw InvalidArgument("ShiftSystem: cell histories must share the grid spacing");
    if (std::abs(minus.output_interval - plus.output_interval) > 1e-12)
        throw InvalidArgument("ShiftSystem: cell histories must share the output interval");
    if (std::abs(minus.base.n - p.connection.left.n) > 1e-12 || std::abs(plus.base.n - p.connection.right.n) > 1e-12 ||
        std::abs(minus.base.u - p.connection.left.u) > 1e-12 || std::abs(plus.base.u - p.connection.right.u) > 1e-12)
        throw InvalidArgument("ShiftSystem: cell base states differ from the profile end states");

    // Support of sigma' down to 1e-12 of its peak.
    double peak = 0.0;
    for (double v : p.dn) peak = std::max(peak, std::abs(v));
    std::size_t a = 0, b = p.dn.size() - 1;
    while (a < b && std::abs(p.dn[a]) < 1e-12 * peak) ++a;
    while (b > a && std::abs(p.dn[b]) < 1e-12 * peak) --b;
    xi_lo_ = p.grid.x(a > 0 ? a - 1 : a);
    xi_hi_ = p.grid.x(std::min(b + 1, p.dn.size() - 1));

    q_minus_ = bracket_fields(minus);
    q_plus_ = bracket_fields(plus);

    const double rm = slowest_rate(minus), rp = slowest_rate(plus);
    if ((!minus.spec.is_zero() && !(rm > 0.0)) || (!plus.spec.is_zero() && !(rp > 0.0)))
        rate_ = 0.0;
    else if (rm > 0.0 && rp > 0.0)
        rate_ = std::min(rm, rp);
    else
        rate_ = std::max(rm, rp);
}

std::pair<double, double> ShiftSystem::rhs_at(std::size_t idx, double X, double Y) const
{
    if (idx >= snapshots()) throw InvalidArgument("ShiftSystem: snapshot index beyond the histories");
    const double h = spacing(), t = minus_.times[idx], s = profile_.connection.s;
    const auto& qm = q_minus_[idx];
    const auto& qp = q_plus_[idx];

    auto window = [&](double c) {
        return std::pair{static_cast<long long>(std::ceil((c + xi_lo_) / h)),
                         static_cast<long long>(std::floor((c + xi_hi_) / h))};
    };

    double num_x = 0.0, den_x = 0.0;
    const double cx = s * t + X;
    const auto [ax, bx] = window(cx);
    for (long long i = ax; i <= bx; ++i) {
        const double w = profile_.dsigma(static_cast<double>(i) * h - cx);
        num_x += w * (plus_.m_at(idx, i) - minus_.m_at(idx, i));
        den_x += w * (plus_.n_at(idx, i) - minus_.n_at(idx, i));
    }
    double num_y = 0.0, den_y = 0.0;
    const double cy = s * t + Y;
    const auto [ay, by] = window(cy);
    for (long long i = ay; i <= by; ++i) {
        const double w = profile_.dsigma(static_cast<double>(i) * h - cy);
        num_y += w * (qp[plus_.wrap(i)] - qm[minus_.wrap(i)]);
        den_y += w * (plus_.m_at(idx, i) - minus_.m_at(idx, i));
    }
    const double jn = jump_n(profile_), jm = jump_m(profile_);
    if (std::abs(den_x * h) < 1e-3 * std::abs(jn) || std::abs(den_y * h) < 1e-3 * std::abs(jm))
        throw NumericalFailure("shift_rhs: weighted jump denominator nearly vanishes at t = " + std::to_string(t));
    return {-s + num_x / den_x, -s + num_y / den_y};
}

std::pair<double, double> ShiftSystem::rhs(double t, double X, double Y) const
{
    return rhs_at(minus_.index_at(t), X, Y);
}

double ShiftSystem::flux_average_jump(std::size_t idx) const
{
    auto avg = [](const periodic::PeriodicHistory& h, std::size_t k) {
        const auto& st = h.snapshots[k];
        const std::size_t P = h.points;
        const double ih = 1.0 / h.spacing;
        const double ref = h.base.m * h.base.m / h.base.n + (h.A + 1.0) * h.base.n;
        double acc = 0.0;
        for (std::size_t i = 0; i < P; ++i) {
            const double px = 0.5 * ih * (st.phi[(i + 1) % P] - st.phi[(i + P - 1) % P]);
            acc += st.m[i] * st.m[i] / st.n[i] + (h.A + 1.0) * st.n[i] - 0.5 * px * px - ref;
        }
        return acc / static_cast<double>(P);
    };
    return avg(plus_, idx) - avg(minus_, idx);
}

ShiftTrajectory integrate_shifts(const ShiftSystem& sys, double X0, double Y0, double T_end, const ShiftOptions& opt)
{
    if (opt.step_multiple < 1) throw InvalidArgument("integrate_shifts: step_multiple must be >= 1");
    const std::size_t last = sys.snapshots() - 1;
    std::size_t K = last;
    if (T_end > 0.0) {
        K = sys.minus().index_at(T_end);
        if (K > last) throw InvalidArgument("integrate_shifts: T_end beyond the histories");
    }
    const auto half = static_cast<std::size_t>(opt.step_multiple);
    const std::size_t stride = 2 * half;
    if (K % stride != 0)
        throw InvalidArgument("integrate_shifts: T_end must be a multiple of the RK4 step");
    const double dt = static_cast<double>(stride) * sys.output_interval();

    ShiftTrajectory tr;
    double X = X0, Y = Y0;
    auto [xp, yp] = sys.rhs_at(0, X, Y);
    tr.samples.push_back({0.0, X, Y, xp, yp});
    for (std::size_t k = 0; k < K; k += stride) {
        const auto k1 = sys.rhs_at(k, X, Y);
        const auto k2 = sys.rhs_at(k + half, X + 0.5 * dt * k1.first, Y + 0.5 * dt * k1.second);
        const auto k3 = sys.rhs_at(k + half, X + 0.5 * dt * k2.first, Y + 0.5 * dt * k2.second);
        const auto k4 = sys.rhs_at(k + stride, X + dt * k3.first, Y + dt * k3.second);
        X += dt / 6.0 * (k1.first + 2.0 * k2.first + 2.0 * k3.first + k4.first);
        Y += dt / 6.0 * (k1.second + 2.0 * k2.second + 2.0 * k3.second + k4.second);
        if (!std::isfinite(X) || !std::isfinite(Y) || std::abs(X) > opt.max_shift || std::abs(Y) > opt.max_shift)
            throw NumericalFailure("integrate_shifts: shift left the admissible bound");
        std::tie(xp, yp) = sys.rhs_at(k + stride, X, Y);
        tr.samples.push_back({sys.minus().times[k + stride], X, Y, xp, yp});
    }

    // Tail: |X(inf) - X(T)| <= max|X'| near T / rate.
    const double T = tr.samples.back().t;
    double late = 0.0;
    for (auto it = tr.samples.rbegin(); it != tr.samples.rend() && it->t >= T - 1.0; ++it)
        late = std::max({late, std::abs(it->Xprime), std::abs(it->Yprime)});
    // Below 1e-12 the derivative is rounding noise of the unperturbed identity.
    if (late > 1e-12) {
        if (!(sys.decay_rate() > 0.0))
            throw NumericalFailure("integrate_shifts: no decay rate available to bound the tail");
        tr.tail_bound = late / sys.decay_rate();
    }
    if (tr.tail_bound > opt.tail_tol)
        throw NumericalFailure("integrate_shifts: not converged by T = " + std::to_string(T) + " (tail bound " +
                               std::to_string(tr.tail_bound) + ")");
    return tr;
}

AsymptoticShifts asymptotic_shifts(const ShockInitialData& d, const LineGrid& g, const MassLedger& ledger,
                                   const InitialShifts& x0, const ShiftSystem& sys, double tail_tol)
{
    const auto& p = *d.profile;
    const double jn = jump_n(p), jm = jump_m(p), s = p.connection.s;
    AsymptoticShifts out;
    out.a1 = functional_a1(d, g, x0.X0);
    out.a2 = functional_a2(d, g, x0.Y0);
    out.d_rho_jump = d.plus.double_integral_mean_rho() - d.minus.double_integral_mean_rho();
    out.d_w_jump = d.plus.double_integral_mean_w() - d.minus.double_integral_mean_w();

    // Composite Simpson over the snapshot lattice, trapezoid on an odd leftover.
    const std::size_t K = sys.snapshots() - 1;
    const double dt = sys.output_interval();
    std::vector<double> gv(K + 1);
    for (std::size_t k = 0; k <= K; ++k) gv[k] = sys.flux_average_jump(k);
    double integral = 0.0;
    const std::size_t even = K - K % 2;
    for (std::size_t k = 0; k + 2 <= even; k += 2) integral += dt / 3.0 * (gv[k] + 4.0 * gv[k + 1] + gv[k + 2]);
    if (K % 2 == 1) integral += 0.5 * dt * (gv[K - 1] + gv[K]);
    out.time_integral = integral;

    const double T = sys.minus().times[K];
    double late = 0.0;
    for (std::size_t k = K + 1; k-- > 0 && sys.minus().times[k] >= T - 1.0;) late = std::max(late, std::abs(gv[k]));
    if (late > 1e-12) {
        if (!(sys.decay_rate() > 0.0))
            throw NumericalFailure("asymptotic_shifts: no decay rate available to bound the tail");
        out.tail_bound = late / (2.0 * sys.decay_rate());
    }
    if (out.tail_bound > tail_tol)
        throw NumericalFailure("asymptotic_shifts: time integral tail " + std::to_string(out.tail_bound) +
                               " above tolerance");

    out.X_inf = out.a1 - out.d_rho_jump / jn;
    out.Y_inf = out.a2 - out.d_w_jump / jm + out.time_integral / jm;
    out.zero_mass_residual =
        s * (ledger.n_total() + out.d_rho_jump) - (ledger.m_total() + out.d_w_jump - out.time_integral);
    return out;
}

ZeroMassResult enforce_zero_mass(const ShockInitialData& draft, const LineGrid& g, const ShiftSystem& sys,
                                 double residual_tol, double max_amplitude)
{
    ZeroMassResult r;
    r.data = draft;
    r.ledger = compute_ledger(r.data, g);
    r.shifts = initial_shifts(r.data, g, r.ledger);
    r.asymptotic = asymptotic_shifts(r.data, g, r.ledger, r.shifts, sys);

    // The residual is affine in the window amplitude with slope -(window mass).
    const auto window = [&](double x) { return zero_mass_window(x - draft.translation); };
    const double mass = half_line(g, true, window) + half_line(g, false, window);

    for (int pass = 0; pass < 3 && std::abs(r.asymptotic.zero_mass_residual) > residual_tol; ++pass) {
        const double da = r.asymptotic.zero_mass_residual / mass;
        r.data.zero_mass_amplitude += da;
        r.added_amplitude += da;
        if (std::abs(r.data.zero_mass_amplitude) > max_amplitude)
            throw NumericalFailure("enforce_zero_mass: required window amplitude " +
                                   std::to_string(r.data.zero_mass_amplitude) + " exceeds the smallness bound");
        r.ledger = compute_ledger(r.data, g);
        r.shifts = initial_shifts(r.data, g, r.ledger);
        r.asymptotic = asymptotic_shifts(r.data, g, r.ledger, r.shifts, sys);
    }
    if (std::abs(r.asymptotic.zero_mass_residual) > residual_tol)
        throw NumericalFailure("enforce_zero_mass: residual did not reach tolerance");
    return r;
}

}  // namespace nsp::shifts
