#pragma once

#include "nsp/grid.hpp"

namespace nsp {

// Second-order finite differences. Periodic fields wrap around, line fields
// use one-sided stencils at the ends.
SpatialField diff1(const SpatialField& f);
SpatialField diff2(const SpatialField& f);

/// Composite trapezoid integral over [a, b]; partial cells are integrated with
/// linear interpolation so the rule is exact on affine data.
double integrate(const SpatialField& f, double a, double b);
/// Integral over the whole grid (one period for periodic fields).
double integrate(const SpatialField& f);
/// Running trapezoid integral from the left end.
SpatialField cumulative_integrate(const SpatialField& f);

double norm_lp(const SpatialField& f, double p);
double norm_l2(const SpatialField& f);
double norm_linf(const SpatialField& f);
double norm_h1(const SpatialField& f);
double norm_h2(const SpatialField& f);
double norm_h3(const SpatialField& f);

// Pointwise helpers that keep grid and boundary kind.
SpatialField operator+(const SpatialField& a, const SpatialField& b);
SpatialField operator-(const SpatialField& a, const SpatialField& b);
SpatialField operator*(double c, const SpatialField& a);

}  // namespace nsp
