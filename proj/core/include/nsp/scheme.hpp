#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace nsp::scheme {

/// Interface fluxes at the two outer faces of the updated block.
struct EdgeFluxes {
    double mass_left = 0.0, mass_right = 0.0;
    double momentum_left = 0.0, momentum_right = 0.0;
};

/// Semi-discrete right-hand side of the NSP system in flux form.
///
/// Input arrays carry two ghost values on each side of the M updated points.
/// The momentum flux at a node is m^2/n + A n - phi_x^2/2 + e^{-phi} and the
/// viscous flux across a face is (u_{i+1} - u_i)/h, so that
///   dn/dt = -(G_{i+1/2} - G_{i-1/2})/h,  dm/dt = -(F_{i+1/2} - F_{i-1/2})/h
/// with G the averaged momentum and F the averaged momentum flux minus the
/// viscous flux. The electric force enters through n phi_x = (phi_x^2/2 - e^{-phi})_x.
void flux_divergence(std::span<const double> n, std::span<const double> m, std::span<const double> phi, double h,
                     double A, std::span<double> dn, std::span<double> dm, EdgeFluxes* edges = nullptr);

/// Largest stable step for the explicit scheme.
double stable_dt(std::span<const double> n, std::span<const double> m, double h, double A, double cfl_hyperbolic,
                 double cfl_parabolic);

/// Newton solve of (phi_{i+1} - 2 phi_i + phi_{i-1})/h^2 = n_i - e^{-phi_i} on a
/// periodic cell of n.size() distinct points. phi holds the initial iterate on
/// entry. Returns the final max-norm residual.
double solve_pb_periodic(std::span<const double> n, std::span<double> phi, double h, double tol);

/// Same equation on the interior of a line grid; phi.front() and phi.back()
/// are fixed Dirichlet values.
double solve_pb_dirichlet(std::span<const double> n, std::span<double> phi, double h, double tol);

}  // namespace nsp::scheme
