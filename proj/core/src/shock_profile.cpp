#include "nsp/shock_profile.hpp"

#include "nsp/error.hpp"
#include "nsp/linalg.hpp"
#include "nsp/operators.hpp"
#include "nsp/regression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace nsp::profile {

namespace {

// Once-integrated travelling-wave system for y = (n, phi, psi).
struct ProfileOde {
    double A, j;
    double nl, phil, nr, phir;

    explicit ProfileOde(const riemann::ShockConnection& c)
        : A(c.A), j(c.j), nl(c.left.n), phil(c.left.phi), nr(c.right.n), phir(c.right.phi)
    {
    }

    // Written in deviations from the nearer end state, which avoids losing the
    // tails to cancellation. Both forms agree because the end states satisfy
    // the jump conditions.
    double G(double n, double phi, double psi) const
    {
        const bool right = std::abs(n - nr) < std::abs(n - nl);
        const double nb = right ? nr : nl;
        const double pb = right ? phir : phil;
        const double dn = n - nb;
        return -j * j * dn / (n * nb) + A * dn - 0.5 * psi * psi + nb * std::expm1(-(phi - pb));
    }

    void rhs(const double* y, double* f) const
    {
        const double n = y[0];
        f[0] = -n * n * G(y[0], y[1], y[2]) / j;
        f[1] = y[2];
        f[2] = n - std::exp(-y[1]);
    }

    void jacobian(const double* y, double J[3][3]) const
    {
        const double n = y[0];
        const double g = G(y[0], y[1], y[2]);
        const double e = std::exp(-y[1]);
        const double gn = A - j * j / (n * n);
        J[0][0] = -(2.0 * n * g + n * n * gn) / j;
        J[0][1] = n * n * e / j;
        J[0][2] = n * n * y[2] / j;
        J[1][0] = 0.0;
        J[1][1] = 0.0;
        J[1][2] = 1.0;
        J[2][0] = 1.0;
        J[2][1] = e;
        J[2][2] = 0.0;
    }
};

std::array<double, 3> real_eigenvalues(const double J[3][3])
{
    const double tr = J[0][0] + J[1][1] + J[2][2];
    const double minors = J[0][0] * J[1][1] - J[0][1] * J[1][0] + J[0][0] * J[2][2] - J[0][2] * J[2][0] +
                          J[1][1] * J[2][2] - J[1][2] * J[2][1];
    const double det = J[0][0] * (J[1][1] * J[2][2] - J[1][2] * J[2][1]) -
                       J[0][1] * (J[1][0] * J[2][2] - J[1][2] * J[2][0]) +
                       J[0][2] * (J[1][0] * J[2][1] - J[1][1] * J[2][0]);
    // lambda^3 + a2 lambda^2 + a1 lambda + a0
    const double a2 = -tr, a1 = minors, a0 = -det;
    const double p = a1 - a2 * a2 / 3.0;
    const double q = 2.0 * a2 * a2 * a2 / 27.0 - a2 * a1 / 3.0 + a0;
    if (!(p < 0.0) || 4.0 * p * p * p + 27.0 * q * q >= 0.0)
        throw NumericalFailure("profile linearisation does not have three distinct real eigenvalues");
    const double r = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (p * r), -1.0, 1.0);
    const double theta = std::acos(arg) / 3.0;
    std::array<double, 3> roots{};
    for (int k = 0; k < 3; ++k) {
        double x = r * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0) - a2 / 3.0;
        for (int it = 0; it < 3; ++it) {
            const double f = ((x + a2) * x + a1) * x + a0;
            const double df = (3.0 * x + 2.0 * a2) * x + a1;
            if (df == 0.0) break;
            x -= f / df;
        }
        roots[static_cast<std::size_t>(k)] = x;
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

// Left eigenvector: orthogonal to every column of J - mu I.
std::array<double, 3> left_eigenvector(const double J[3][3], double mu)
{
    double B[3][3];
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) B[r][c] = J[r][c] - (r == c ? mu : 0.0);
    std::array<double, 3> best{};
    double best_norm = -1.0;
    const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
    for (const auto& pr : pairs) {
        const double a[3] = {B[0][pr[0]], B[1][pr[0]], B[2][pr[0]]};
        const double b[3] = {B[0][pr[1]], B[1][pr[1]], B[2][pr[1]]};
        std::array<double, 3> v = {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
        const double nv = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
        if (nv > best_norm) {
            best_norm = nv;
            best = v;
        }
    }
    if (!(best_norm > 0.0)) throw NumericalFailure("profile linearisation: degenerate eigenvector");
    for (double& v : best) v /= best_norm;
    return best;
}

void end_jacobian(const riemann::ShockConnection& c, bool right, double J[3][3])
{
    const ProfileOde ode(c);
    const double y[3] = {right ? c.right.n : c.left.n, right ? c.right.phi : c.left.phi, 0.0};
    ode.jacobian(y, J);
}

double hermite(double f0, double d0, double f1, double d1, double h, double t)
{
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * f0 + (t3 - 2 * t2 + t) * h * d0 + (-2 * t3 + 3 * t2) * f1 + (t3 - t2) * h * d1;
}

}  // namespace

EndLinearization linearize_left(const riemann::ShockConnection& c)
{
    double J[3][3];
    end_jacobian(c, false, J);
    EndLinearization lin;
    lin.eigenvalues = real_eigenvalues(J);
    const auto& ev = lin.eigenvalues;
    if (!(ev[0] < 0.0 && ev[1] > 0.0))
        throw NumericalFailure("left end state: expected one decaying and two growing directions");
    lin.slow_rate = ev[1];
    return lin;
}

EndLinearization linearize_right(const riemann::ShockConnection& c)
{
    double J[3][3];
    end_jacobian(c, true, J);
    EndLinearization lin;
    lin.eigenvalues = real_eigenvalues(J);
    const auto& ev = lin.eigenvalues;
    if (!(ev[1] < 0.0 && ev[2] > 0.0))
        throw NumericalFailure("right end state: expected two decaying and one growing direction");
    lin.slow_rate = -ev[1];
    return lin;
}

ShockProfile compute_profile(const riemann::ShockConnection& c, const ProfileOptions& opt)
{
    if (!(c.right.n < c.left.n)) throw InvalidArgument("compute_profile: not a 2-shock (n_plus >= n_minus)");
    if (!(opt.spacing > 0.0)) throw InvalidArgument("compute_profile: spacing must be positive");
    if (!(opt.tol > 0.0)) throw InvalidArgument("compute_profile: tol must be positive");

    ShockProfile prof;
    prof.connection = c;
    prof.left_lin = linearize_left(c);
    prof.right_lin = linearize_right(c);
    const double delta = c.strength();
    const double slow = std::min(prof.left_lin.slow_rate, prof.right_lin.slow_rate);

    // Each side extends until its slow tail has decayed to a little below tol,
    // which keeps the tails well above the rounding level of n.
    double Ll = opt.xi_halfwidth, Lr = opt.xi_halfwidth;
    if (opt.xi_halfwidth <= 0.0) {
        const double decay = 1.25 * std::log(std::max(delta / opt.tol, 10.0));
        Ll = std::max(10.0 / slow, decay / prof.left_lin.slow_rate);
        Lr = std::max(10.0 / slow, decay / prof.right_lin.slow_rate);
    }
    const double h = opt.spacing;
    const auto nleft = static_cast<std::size_t>(std::ceil((Ll + std::max(0.0, -opt.phase_xi)) / h));
    const auto nright = static_cast<std::size_t>(std::ceil((Lr + std::max(0.0, opt.phase_xi)) / h));
    const std::size_t N = nleft + nright + 1;
    prof.grid = Grid1D(-static_cast<double>(nleft) * h, static_cast<double>(nright) * h, N);
    const double pos = (opt.phase_xi - prof.grid.x_min) / h;
    if (std::abs(pos - std::round(pos)) > 1e-9) throw InvalidArgument("compute_profile: phase_xi must be a grid node");
    const auto ic = static_cast<std::size_t>(std::llround(pos));

    const ProfileOde ode(c);
    const double nm = c.left.n, np = c.right.n;

    double Jl[3][3], Jr[3][3];
    end_jacobian(c, false, Jl);
    end_jacobian(c, true, Jr);
    const auto ell_left = left_eigenvector(Jl, prof.left_lin.eigenvalues[0]);
    const auto ell_right = left_eigenvector(Jr, prof.right_lin.eigenvalues[2]);
    const double yl[3] = {nm, c.left.phi, 0.0};
    const double yr[3] = {np, c.right.phi, 0.0};

    // Smooth step with the right tail rates as a starting guess.
    std::vector<double> y(3 * N);
    const double kappa = 0.5 * (prof.left_lin.slow_rate + prof.right_lin.slow_rate);
    for (std::size_t i = 0; i < N; ++i) {
        const double xi = prof.grid.x(i) - opt.phase_xi;
        const double sg = 0.5 * (1.0 + std::tanh(0.5 * kappa * xi));
        const double dsg = 0.25 * kappa / std::pow(std::cosh(0.5 * kappa * xi), 2);
        const double n0 = nm + (np - nm) * sg;
        y[3 * i] = n0;
        y[3 * i + 1] = -std::log(n0);
        y[3 * i + 2] = -(np - nm) * dsg / n0;
    }

    const std::size_t M = 3 * N;
    auto row_of = [&](std::size_t interval, int k) {
        return (interval < ic ? 1 + 3 * interval : 2 + 3 * interval) + static_cast<std::size_t>(k);
    };
    const std::size_t phase_row = 1 + 3 * ic;

    auto residual = [&](const std::vector<double>& v, std::vector<double>& F) {
        F.assign(M, 0.0);
        double acc = 0.0;
        for (int k = 0; k < 3; ++k) acc += ell_left[static_cast<std::size_t>(k)] * (v[static_cast<std::size_t>(k)] - yl[k]);
        F[0] = acc;
        std::vector<double> f0(3), f1(3);
        ode.rhs(&v[0], f0.data());
        for (std::size_t i = 0; i + 1 < N; ++i) {
            ode.rhs(&v[3 * (i + 1)], f1.data());
            for (int k = 0; k < 3; ++k) {
                const auto kk = static_cast<std::size_t>(k);
                F[row_of(i, k)] = v[3 * (i + 1) + kk] - v[3 * i + kk] - 0.5 * h * (f0[kk] + f1[kk]);
            }
            std::swap(f0, f1);
        }
        F[phase_row] = v[3 * ic] - 0.5 * (nm + np);
        acc = 0.0;
        for (int k = 0; k < 3; ++k)
            acc += ell_right[static_cast<std::size_t>(k)] * (v[3 * (N - 1) + static_cast<std::size_t>(k)] - yr[k]);
        F[M - 1] = acc;
    };
    auto inf_norm = [](const std::vector<double>& v) {
        double m = 0.0;
        for (double x : v) m = std::max(m, std::abs(x));
        return m;
    };

    std::vector<double> F, Ft, trial;
    residual(y, F);
    double fnorm = inf_norm(F);
    BandedMatrix Jm(M, 4, 5);
    bool converged = false;
    int it = 0;
    for (; it < opt.max_newton; ++it) {
        Jm.set_zero();
        for (int k = 0; k < 3; ++k) Jm.at(0, static_cast<std::size_t>(k)) = ell_left[static_cast<std::size_t>(k)];
        double Ja[3][3], Jb[3][3];
        ode.jacobian(&y[0], Ja);
        for (std::size_t i = 0; i + 1 < N; ++i) {
            ode.jacobian(&y[3 * (i + 1)], Jb);
            for (int r = 0; r < 3; ++r) {
                const std::size_t row = row_of(i, r);
                for (int q = 0; q < 3; ++q) {
                    const auto qq = static_cast<std::size_t>(q);
                    Jm.at(row, 3 * i + qq) = -(r == q ? 1.0 : 0.0) - 0.5 * h * Ja[r][q];
                    Jm.at(row, 3 * (i + 1) + qq) = (r == q ? 1.0 : 0.0) - 0.5 * h * Jb[r][q];
                }
            }
            std::copy(&Jb[0][0], &Jb[0][0] + 9, &Ja[0][0]);
        }
        Jm.at(phase_row, 3 * ic) = 1.0;
        for (int k = 0; k < 3; ++k)
            Jm.at(M - 1, 3 * (N - 1) + static_cast<std::size_t>(k)) = ell_right[static_cast<std::size_t>(k)];

        std::vector<double> dy(M);
        for (std::size_t i = 0; i < M; ++i) dy[i] = -F[i];
        Jm.solve_in_place(dy);

        double lambda = 1.0;
        for (;;) {
            trial = y;
            bool positive = true;
            for (std::size_t i = 0; i < M; ++i) trial[i] += lambda * dy[i];
            for (std::size_t i = 0; i < N; ++i) positive = positive && trial[3 * i] > 0.0;
            if (positive) {
                residual(trial, Ft);
                const double tn = inf_norm(Ft);
                if (std::isfinite(tn) && (tn <= (1.0 - 1e-4 * lambda) * fnorm || tn < 1e-14)) break;
            }
            lambda *= 0.5;
            if (lambda < 1e-6) throw NumericalFailure("profile Newton iteration stalled (line search failed)");
        }
        y.swap(trial);
        F.swap(Ft);
        fnorm = inf_norm(F);
        const double step = lambda * inf_norm(dy);
        if (step < 1e-13 || fnorm < 1e-15) {
            converged = true;
            ++it;
            break;
        }
    }
    if (!converged && fnorm > 1e-11) throw NumericalFailure("profile Newton iteration did not converge");
    prof.newton_iterations = it;

    prof.n.resize(N);
    prof.phi.resize(N);
    prof.psi.resize(N);
    prof.dn.resize(N);
    prof.d2n.resize(N);
    prof.dpsi.resize(N);
    prof.d2psi.resize(N);
    const double j = c.j;
    for (std::size_t i = 0; i < N; ++i) {
        const double n = y[3 * i], ph = y[3 * i + 1], ps = y[3 * i + 2];
        const double g = ode.G(n, ph, ps);
        const double e = std::exp(-ph);
        const double dn = -n * n * g / j;
        const double dg = (c.A - j * j / (n * n)) * dn - n * ps;
        prof.n[i] = n;
        prof.phi[i] = ph;
        prof.psi[i] = ps;
        prof.dn[i] = dn;
        prof.d2n[i] = -(2.0 * n * dn * g + n * n * dg) / j;
        prof.dpsi[i] = n - e;
        prof.d2psi[i] = dn + e * ps;
    }
    const double err_l = std::abs(prof.n.front() - nm);
    const double err_r = std::abs(prof.n.back() - np);
    if (err_l > opt.tol || err_r > opt.tol)
        throw NumericalFailure("profile end states not reached within tol (left " + std::to_string(err_l) +
                               ", right " + std::to_string(err_r) + "); enlarge xi_halfwidth");
    return prof;
}

double ShockProfile::n_at(double xi) const
{
    if (xi <= grid.x_min) return connection.left.n;
    if (xi >= grid.x_max) return connection.right.n;
    const double h = grid.spacing();
    const double pos = (xi - grid.x_min) / h;
    const auto k = std::min(static_cast<std::size_t>(pos), grid.n_points - 2);
    const double t = pos - static_cast<double>(k);
    return hermite(n[k], dn[k], n[k + 1], dn[k + 1], h, t);
}

ProfileSample ShockProfile::sample(double xi) const
{
    ProfileSample s;
    const auto& c = connection;
    if (xi <= grid.x_min || xi >= grid.x_max) {
        const auto& e = xi <= grid.x_min ? c.left : c.right;
        s.n = e.n;
        s.m = e.m;
        s.u = e.u;
        s.phi = e.phi;
        return s;
    }
    const double h = grid.spacing();
    const double pos = (xi - grid.x_min) / h;
    const auto k = std::min(static_cast<std::size_t>(pos), grid.n_points - 2);
    const double t = pos - static_cast<double>(k);
    // Third derivative of n by differencing the analytic second derivative.
    auto d3n = [&](std::size_t i) {
        const std::size_t lo = i == 0 ? 0 : i - 1;
        const std::size_t hi = std::min(i + 1, grid.n_points - 1);
        return (d2n[hi] - d2n[lo]) / (h * static_cast<double>(hi - lo));
    };
    s.n = hermite(n[k], dn[k], n[k + 1], dn[k + 1], h, t);
    s.dn = hermite(dn[k], d2n[k], dn[k + 1], d2n[k + 1], h, t);
    s.d2n = hermite(d2n[k], d3n(k), d2n[k + 1], d3n(k + 1), h, t);
    s.phi = hermite(phi[k], psi[k], phi[k + 1], psi[k + 1], h, t);
    s.dphi = hermite(psi[k], dpsi[k], psi[k + 1], dpsi[k + 1], h, t);
    s.d2phi = hermite(dpsi[k], d2psi[k], dpsi[k + 1], d2psi[k + 1], h, t);
    s.m = m_of_n(s.n);
    s.dm = c.s * s.dn;
    s.d2m = c.s * s.d2n;
    s.u = u_of_n(s.n);
    s.du = -c.j * s.dn / (s.n * s.n);
    s.d2u = -c.j * (s.d2n / (s.n * s.n) - 2.0 * s.dn * s.dn / (s.n * s.n * s.n));
    return s;
}

double ShockProfile::sigma(double xi) const
{
    return (n_at(xi) - connection.left.n) / (connection.right.n - connection.left.n);
}

double ShockProfile::dsigma(double xi) const
{
    if (xi <= grid.x_min || xi >= grid.x_max) return 0.0;
    const double h = grid.spacing();
    const double pos = (xi - grid.x_min) / h;
    const auto k = std::min(static_cast<std::size_t>(pos), grid.n_points - 2);
    const double t = pos - static_cast<double>(k);
    return hermite(dn[k], d2n[k], dn[k + 1], d2n[k + 1], h, t) / (connection.right.n - connection.left.n);
}

double TravelingResidual::max() const { return std::max({mass, momentum, poisson}); }

TravelingResidual traveling_wave_residual(const ShockProfile& p)
{
    const auto& c = p.connection;
    const auto b = BoundaryKind::Dirichlet;
    SpatialField n(p.grid, p.n, b), phi(p.grid, p.phi, b);
    SpatialField m(p.grid, b), u(p.grid, b), flux(p.grid, b);
    for (std::size_t i = 0; i < n.size(); ++i) {
        m[i] = p.m_of_n(n[i]);
        u[i] = p.u_of_n(n[i]);
        flux[i] = m[i] * m[i] / n[i] + c.A * n[i];
    }
    const auto dn = diff1(n), dm = diff1(m), dflux = diff1(flux), dphi = diff1(phi);
    const auto d2u = diff2(u), d2phi = diff2(phi);
    TravelingResidual r;
    for (std::size_t i = 0; i < n.size(); ++i) {
        r.mass = std::max(r.mass, std::abs(-c.s * dn[i] + dm[i]));
        r.momentum = std::max(r.momentum, std::abs(-c.s * dm[i] + dflux[i] - n[i] * dphi[i] - d2u[i]));
        r.poisson = std::max(r.poisson, std::abs(d2phi[i] - n[i] + std::exp(-phi[i])));
    }
    return r;
}

namespace {

TailFit fit_tail(const ShockProfile& p, const std::vector<double>& q, double qbar, double jump, bool left)
{
    const double hi = 1e-3 * jump;
    const double lo = std::max(1e-9 * jump, 1e-13);
    std::vector<double> xs, ls;
    double dmax = 0.0, dmin = 1e300;
    for (std::size_t i = 0; i < q.size(); ++i) {
        const double xi = p.grid.x(i);
        if ((left && xi >= 0.0) || (!left && xi <= 0.0)) continue;
        const double d = std::abs(q[i] - qbar);
        if (d < lo || d > hi) continue;
        xs.push_back(xi);
        ls.push_back(std::log(d));
        dmax = std::max(dmax, d);
        dmin = std::min(dmin, d);
    }
    TailFit tf;
    tf.samples = xs.size();
    if (xs.size() < 3) return tf;
    const LinearFit f = fit_line(xs, ls);
    tf.rate = std::abs(f.slope);
    tf.r_squared = f.r_squared;
    tf.decades = std::log10(dmax / dmin);
    return tf;
}

}  // namespace

ProfileDecay fit_profile_decay(const ShockProfile& p)
{
    const auto& c = p.connection;
    const std::size_t N = p.n.size();
    std::vector<double> u(N);
    for (std::size_t i = 0; i < N; ++i) u[i] = p.u_of_n(p.n[i]);
    const double delta = c.strength();
    ProfileDecay d;
    d.n_left = fit_tail(p, p.n, c.left.n, delta, true);
    d.n_right = fit_tail(p, p.n, c.right.n, delta, false);
    d.u_left = fit_tail(p, u, c.left.u, std::abs(c.right.u - c.left.u), true);
    d.u_right = fit_tail(p, u, c.right.u, std::abs(c.right.u - c.left.u), false);
    d.phi_left = fit_tail(p, p.phi, c.left.phi, std::abs(c.right.phi - c.left.phi), true);
    d.phi_right = fit_tail(p, p.phi, c.right.phi, std::abs(c.right.phi - c.left.phi), false);
    d.theta_left = d.n_left.rate / delta;
    d.theta_right = d.n_right.rate / delta;

    const double theta = std::min(d.theta_left, d.theta_right);
    const std::vector<double>* derivs[3] = {&p.n, &p.dn, &p.d2n};
    for (int k = 0; k < 3; ++k) {
        double ck = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double xi = p.grid.x(i);
            const double dev = std::abs(p.n[i] - (xi < 0.0 ? c.left.n : c.right.n));
            if (dev < 1e-12) continue;
            double v = (*derivs[k])[i];
            if (k == 0) v = dev;
            ck = std::max(ck, std::abs(v) * std::exp(theta * delta * std::abs(xi)) / std::pow(delta, k + 1));
        }
        d.c_bounds[static_cast<std::size_t>(k)] = ck;
    }
    return d;
}

ProfileStructure verify_profile_structure(const ShockProfile& p)
{
    const auto& c = p.connection;
    ProfileStructure st;
    st.n_decreasing = true;
    st.phi_increasing = true;
    st.sigma_monotone = true;
    st.first_violation = p.n.size();
    double cmax = 1.0;
    const double floor = 1e-13;
    for (std::size_t i = 0; i < p.n.size(); ++i) {
        const bool ok = p.dn[i] < 0.0 && p.psi[i] > 0.0;
        if (!ok && st.first_violation == p.n.size()) st.first_violation = i;
        st.n_decreasing = st.n_decreasing && p.dn[i] < 0.0;
        st.phi_increasing = st.phi_increasing && p.psi[i] > 0.0;
        if (i > 0) st.sigma_monotone = st.sigma_monotone && p.n[i] < p.n[i - 1];
        const double nn = p.n[i];
        const double du = -c.j * p.dn[i] / (nn * nn);
        if (std::abs(p.dn[i]) > floor) {
            const double rel = std::abs(p.dn[i] - nn * nn * du / std::abs(c.j)) / std::abs(p.dn[i]);
            st.flux_identity_error = std::max(st.flux_identity_error, rel);
        }
        if (std::abs(p.dn[i]) > floor && std::abs(p.psi[i]) > floor) {
            const double ratio = -p.dn[i] / p.psi[i];
            if (ratio > 0.0) cmax = std::max({cmax, ratio, 1.0 / ratio});
            else cmax = std::numeric_limits<double>::infinity();
        }
    }
    st.comparability = cmax;
    st.sigma_at_zero = p.sigma(0.0);
    return st;
}

}  // namespace nsp::profile
