#include "nsp/riemann.hpp"

#include "nsp/error.hpp"

#include <cmath>
#include <string>

namespace nsp::riemann {

namespace {

void require_positive(double v, const char* what)
{
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument(std::string(what) + " must be positive and finite");
}

}  // namespace

EndState::EndState(double density, double velocity) : n(density), u(velocity), m(density * velocity), phi(0.0)
{
    require_positive(density, "density");
    if (!std::isfinite(velocity)) throw InvalidArgument("velocity must be finite");
    phi = -std::log(density);
}

EndState boost(const EndState& s, double c) { return EndState(s.n, s.u + c); }

std::pair<double, double> characteristics(double n, double u, double A)
{
    require_positive(n, "density");
    if (!(A > 0.0)) throw InvalidArgument("A must be positive");
    const double c = std::sqrt(A + 1.0);
    return {u - c, u + c};
}

ShockConnection hugoniot_states(const EndState& left, double n_plus, double A)
{
    require_positive(n_plus, "n_plus");
    require_positive(A, "A");
    ShockConnection c;
    c.A = A;
    c.left = left;
    c.j = -std::sqrt((A + 1.0) * n_plus * left.n);
    c.s = left.u - c.j / left.n;
    c.right = EndState(n_plus, c.s + c.j / n_plus);
    return c;
}

ShockConnection hugoniot_connect(const EndState& left, double n_plus, double A)
{
    require_positive(n_plus, "n_plus");
    if (!(n_plus < left.n))
        throw InvalidArgument("a 2-shock needs n_plus < n_minus (got n_plus = " + std::to_string(n_plus) +
                              ", n_minus = " + std::to_string(left.n) + ")");
    return hugoniot_states(left, n_plus, A);
}

RhResiduals rh_residuals(const ShockConnection& c)
{
    const EndState& l = c.left;
    const EndState& r = c.right;
    const double flux_l = l.m * l.m / l.n + (c.A + 1.0) * l.n;
    const double flux_r = r.m * r.m / r.n + (c.A + 1.0) * r.n;
    return {-c.s * (r.n - l.n) + (r.m - l.m), -c.s * (r.m - l.m) + (flux_r - flux_l)};
}

LaxReport lax_report(const ShockConnection& c)
{
    LaxReport rep;
    const double a1 = c.A + 1.0;
    rep.sound_speed_inequality = std::sqrt(a1 * c.right.n) < c.s && c.s < std::sqrt(a1 * c.left.n);
    rep.lambda2_left = characteristics(c.left.n, c.left.u, c.A).second;
    rep.lambda2_right = characteristics(c.right.n, c.right.u, c.A).second;
    rep.characteristic_inequality = rep.lambda2_right < c.s && c.s < rep.lambda2_left;
    return rep;
}

double RarefactionEndpoints::w_left() const { return left.u + std::sqrt(A + 1.0); }
double RarefactionEndpoints::w_right() const { return right.u + std::sqrt(A + 1.0); }

RarefactionEndpoints make_rarefaction(const EndState& left, double n_plus, double A)
{
    require_positive(n_plus, "n_plus");
    require_positive(A, "A");
    if (!(n_plus > left.n)) throw InvalidArgument("a 2-rarefaction needs n_plus > n_minus");
    RarefactionEndpoints r;
    r.A = A;
    r.left = left;
    r.right = EndState(n_plus, left.u + std::sqrt(A + 1.0) * std::log(n_plus / left.n));
    return r;
}

RarefactionEndpoints make_rarefaction_by_strength(const EndState& left, double delta_r, double A)
{
    require_positive(delta_r, "delta_r");
    require_positive(A, "A");
    const double c = std::sqrt(A + 1.0);
    // strength(dn) = dn + c ln(1 + dn/n-) is increasing; bracket then bisect.
    auto strength = [&](double dn) { return dn + c * std::log1p(dn / left.n) - delta_r; };
    double lo = 0.0;
    double hi = delta_r;
    for (int it = 0; it < 200 && hi - lo > 1e-16 * (1.0 + hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        (strength(mid) > 0.0 ? hi : lo) = mid;
    }
    return make_rarefaction(left, left.n + 0.5 * (lo + hi), A);
}

double rarefaction_relation_residual(const RarefactionEndpoints& r)
{
    return std::abs(r.right.u - r.left.u - std::sqrt(r.A + 1.0) * std::log(r.right.n / r.left.n));
}

FanState rarefaction_exact(const RarefactionEndpoints& r, double xi)
{
    if (rarefaction_relation_residual(r) > 1e-10)
        throw InvalidArgument("rarefaction_exact: end states do not lie on one 2-rarefaction curve");
    if (xi <= r.w_left()) return {r.left.n, r.left.u, r.left.phi};
    if (xi >= r.w_right()) return {r.right.n, r.right.u, r.right.phi};
    const double c = std::sqrt(r.A + 1.0);
    FanState f;
    f.u = xi - c;
    f.n = r.left.n * std::exp((f.u - r.left.u) / c);
    f.phi = -std::log(f.n);
    return f;
}

}  // namespace nsp::riemann
