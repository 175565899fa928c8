#pragma once

#include <cstddef>
#include <vector>

namespace nsp {

enum class BoundaryKind { Periodic, Dirichlet, Neumann };

/// Uniform grid on [x_min, x_max] with n_points nodes, endpoints included.
struct Grid1D {
    double x_min = 0.0;
    double x_max = 1.0;
    std::size_t n_points = 2;

    Grid1D() = default;
    Grid1D(double lo, double hi, std::size_t n);

    double spacing() const { return (x_max - x_min) / static_cast<double>(n_points - 1); }
    double x(std::size_t i) const;
    double length() const { return x_max - x_min; }
    std::vector<double> nodes() const;
};

/// Samples of a scalar function on a grid.
///
/// Periodic fields keep the duplicated endpoint: values.front() and
/// values.back() describe the same point, and the last sample is left out of
/// integrals and norms.
struct SpatialField {
    Grid1D grid;
    std::vector<double> values;
    BoundaryKind boundary = BoundaryKind::Dirichlet;

    SpatialField() = default;
    SpatialField(const Grid1D& g, BoundaryKind b);
    SpatialField(const Grid1D& g, std::vector<double> v, BoundaryKind b);

    template <class F>
    static SpatialField sample(const Grid1D& g, BoundaryKind b, F&& f)
    {
        SpatialField out(g, b);
        for (std::size_t i = 0; i < g.n_points; ++i) out.values[i] = f(g.x(i));
        if (b == BoundaryKind::Periodic) out.values.back() = out.values.front();
        return out;
    }

    std::size_t size() const { return values.size(); }
    double operator[](std::size_t i) const { return values[i]; }
    double& operator[](std::size_t i) { return values[i]; }
};

}  // namespace nsp
