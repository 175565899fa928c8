#include "nsp/grid.hpp"

#include "nsp/error.hpp"

#include <cmath>

namespace nsp {

Grid1D::Grid1D(double lo, double hi, std::size_t n) : x_min(lo), x_max(hi), n_points(n)
{
    if (n < 2) throw InvalidArgument("Grid1D needs at least two points");
    if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi))
        throw InvalidArgument("Grid1D needs a finite interval with x_max > x_min");
}

double Grid1D::x(std::size_t i) const
{
    // Interpolate from both ends so the last node is exactly x_max.
    const double t = static_cast<double>(i) / static_cast<double>(n_points - 1);
    if (i == n_points - 1) return x_max;
    return x_min + (x_max - x_min) * t;
}

std::vector<double> Grid1D::nodes() const
{
    std::vector<double> out(n_points);
    for (std::size_t i = 0; i < n_points; ++i) out[i] = x(i);
    return out;
}

SpatialField::SpatialField(const Grid1D& g, BoundaryKind b) : grid(g), values(g.n_points, 0.0), boundary(b) {}

SpatialField::SpatialField(const Grid1D& g, std::vector<double> v, BoundaryKind b)
    : grid(g), values(std::move(v)), boundary(b)
{
    if (values.size() != grid.n_points) throw InvalidArgument("SpatialField: value count does not match grid");
}

}  // namespace nsp
