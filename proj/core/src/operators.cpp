#include "nsp/operators.hpp"

#include "nsp/error.hpp"

#include <algorithm>
#include <cmath>

namespace nsp {

namespace {

void check_usable(const SpatialField& f, std::size_t min_points)
{
    if (f.values.size() != f.grid.n_points) throw InvalidArgument("field size does not match its grid");
    if (f.grid.n_points < min_points) throw InvalidArgument("grid too small for this operator");
}

bool periodic(const SpatialField& f) { return f.boundary == BoundaryKind::Periodic; }

}  // namespace

SpatialField diff1(const SpatialField& f)
{
    check_usable(f, 3);
    const std::size_t n = f.size();
    const double h = f.grid.spacing();
    SpatialField out(f.grid, f.boundary);
    const auto& v = f.values;
    for (std::size_t i = 1; i + 1 < n; ++i) out[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
    if (periodic(f)) {
        // v[n-1] duplicates v[0]; the neighbour of node 0 on the left is n-2.
        out[0] = (v[1] - v[n - 2]) / (2.0 * h);
        out[n - 1] = out[0];
    } else {
        out[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
        out[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
    }
    return out;
}

SpatialField diff2(const SpatialField& f)
{
    check_usable(f, 3);
    const std::size_t n = f.size();
    const double h2 = f.grid.spacing() * f.grid.spacing();
    SpatialField out(f.grid, f.boundary);
    const auto& v = f.values;
    for (std::size_t i = 1; i + 1 < n; ++i) out[i] = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / h2;
    if (periodic(f)) {
        out[0] = (v[1] - 2.0 * v[0] + v[n - 2]) / h2;
        out[n - 1] = out[0];
    } else if (n >= 4) {
        out[0] = (2.0 * v[0] - 5.0 * v[1] + 4.0 * v[2] - v[3]) / h2;
        out[n - 1] = (2.0 * v[n - 1] - 5.0 * v[n - 2] + 4.0 * v[n - 3] - v[n - 4]) / h2;
    } else {
        out[0] = out[1];
        out[2] = out[1];
    }
    return out;
}

double integrate(const SpatialField& f)
{
    check_usable(f, 2);
    const double h = f.grid.spacing();
    const std::size_t n = f.size();
    double s = 0.0;
    if (periodic(f)) {
        for (std::size_t i = 0; i + 1 < n; ++i) s += f[i];
        return s * h;
    }
    for (std::size_t i = 1; i + 1 < n; ++i) s += f[i];
    s += 0.5 * (f[0] + f[n - 1]);
    return s * h;
}

double integrate(const SpatialField& f, double a, double b)
{
    check_usable(f, 2);
    if (a == b) return 0.0;
    if (a > b) return -integrate(f, b, a);
    const Grid1D& g = f.grid;
    const double tol = 1e-12 * std::max(1.0, g.length());
    if (a < g.x_min - tol || b > g.x_max + tol) throw InvalidArgument("integrate: bounds outside the grid");
    a = std::max(a, g.x_min);
    b = std::min(b, g.x_max);
    const double h = g.spacing();
    const std::size_t n = f.size();
    auto value_at = [&](double x) {
        double pos = (x - g.x_min) / h;
        auto i = static_cast<std::size_t>(std::clamp(std::floor(pos), 0.0, static_cast<double>(n - 2)));
        const double t = pos - static_cast<double>(i);
        return (1.0 - t) * f[i] + t * f[i + 1];
    };
    // Nodes strictly inside (a, b).
    const double pa = (a - g.x_min) / h;
    const double pb = (b - g.x_min) / h;
    auto first = static_cast<std::size_t>(std::floor(pa) + 1.0);
    if (std::abs(pa - std::round(pa)) < 1e-12) first = static_cast<std::size_t>(std::round(pa)) + 1;
    auto last_d = std::ceil(pb) - 1.0;
    if (std::abs(pb - std::round(pb)) < 1e-12) last_d = std::round(pb) - 1.0;
    const auto last = static_cast<long long>(last_d);
    if (static_cast<long long>(first) > last) {
        return 0.5 * (value_at(a) + value_at(b)) * (b - a);
    }
    double s = 0.0;
    double xprev = a;
    double fprev = value_at(a);
    for (long long i = static_cast<long long>(first); i <= last; ++i) {
        const double xi = g.x(static_cast<std::size_t>(i));
        s += 0.5 * (fprev + f[static_cast<std::size_t>(i)]) * (xi - xprev);
        xprev = xi;
        fprev = f[static_cast<std::size_t>(i)];
    }
    s += 0.5 * (fprev + value_at(b)) * (b - xprev);
    return s;
}

SpatialField cumulative_integrate(const SpatialField& f)
{
    check_usable(f, 2);
    const double h = f.grid.spacing();
    SpatialField out(f.grid, BoundaryKind::Dirichlet);
    for (std::size_t i = 1; i < f.size(); ++i) out[i] = out[i - 1] + 0.5 * h * (f[i - 1] + f[i]);
    return out;
}

double norm_lp(const SpatialField& f, double p)
{
    if (!(p >= 1.0)) throw InvalidArgument("norm_lp: p must be >= 1");
    if (std::isinf(p)) return norm_linf(f);
    SpatialField g(f.grid, f.boundary);
    for (std::size_t i = 0; i < f.size(); ++i) g[i] = std::pow(std::abs(f[i]), p);
    return std::pow(integrate(g), 1.0 / p);
}

double norm_l2(const SpatialField& f)
{
    SpatialField g(f.grid, f.boundary);
    for (std::size_t i = 0; i < f.size(); ++i) g[i] = f[i] * f[i];
    return std::sqrt(integrate(g));
}

double norm_linf(const SpatialField& f)
{
    double m = 0.0;
    for (double v : f.values) m = std::max(m, std::abs(v));
    return m;
}

double norm_h1(const SpatialField& f)
{
    const double a = norm_l2(f);
    const double b = norm_l2(diff1(f));
    return std::sqrt(a * a + b * b);
}

double norm_h2(const SpatialField& f)
{
    const double a = norm_h1(f);
    const double c = norm_l2(diff2(f));
    return std::sqrt(a * a + c * c);
}

double norm_h3(const SpatialField& f)
{
    const double a = norm_h2(f);
    const double d = norm_l2(diff1(diff2(f)));
    return std::sqrt(a * a + d * d);
}

namespace {
void check_same(const SpatialField& a, const SpatialField& b)
{
    if (a.size() != b.size()) throw InvalidArgument("field arithmetic on mismatched grids");
}
}  // namespace

SpatialField operator+(const SpatialField& a, const SpatialField& b)
{
    check_same(a, b);
    SpatialField out = a;
    for (std::size_t i = 0; i < a.size(); ++i) out[i] += b[i];
    return out;
}

SpatialField operator-(const SpatialField& a, const SpatialField& b)
{
    check_same(a, b);
    SpatialField out = a;
    for (std::size_t i = 0; i < a.size(); ++i) out[i] -= b[i];
    return out;
}

SpatialField operator*(double c, const SpatialField& a)
{
    SpatialField out = a;
    for (double& v : out.values) v *= c;
    return out;
}

}  // namespace nsp
