#pragma once

#include "nsp/grid.hpp"
#include "nsp/riemann.hpp"

#include <array>
#include <vector>

namespace nsp::profile {

struct ProfileOptions {
    double spacing = 0.05;
    /// Half-width of the computational interval. 0 sizes each side from its
    /// tail decay rate and the tolerance.
    double xi_halfwidth = 0.0;
    /// Required |n - n_bar| at both ends of the interval.
    double tol = 1e-9;
    /// Point where the phase condition sigma = 1/2 is imposed.
    double phase_xi = 0.0;
    int max_newton = 60;
};

/// Profile quantities and their first two derivatives at one point.
struct ProfileSample {
    double n = 0, m = 0, u = 0, phi = 0;
    double dn = 0, dm = 0, du = 0, dphi = 0;
    double d2n = 0, d2m = 0, d2u = 0, d2phi = 0;
};

/// Eigen-structure of the linearised profile ODE at an end state.
struct EndLinearization {
    std::array<double, 3> eigenvalues{};  ///< ascending
    double slow_rate = 0.0;               ///< |eigenvalue| governing the tail
};

/// Viscous 2-shock profile tabulated on a uniform grid in xi = x - s t.
class ShockProfile {
public:
    riemann::ShockConnection connection;
    Grid1D grid;
    std::vector<double> n, phi, psi;  ///< psi = dphi/dxi
    std::vector<double> dn, d2n;      ///< derivatives of n
    std::vector<double> dpsi, d2psi;  ///< second and third derivatives of phi
    EndLinearization left_lin, right_lin;
    int newton_iterations = 0;

    /// Cubic Hermite evaluation; outside the table the end states are returned.
    ProfileSample sample(double xi) const;
    double n_at(double xi) const;
    double sigma(double xi) const;
    double dsigma(double xi) const;

    /// Momentum and velocity from the tabulated density.
    double m_of_n(double density) const { return connection.left.m + connection.s * (density - connection.left.n); }
    double u_of_n(double density) const { return connection.s + connection.j / density; }
};

/// Solves the profile boundary value problem by trapezoidal collocation and
/// Newton's method. Boundary rows remove the growing (left) and decaying
/// (right) directions of the linearisation; a phase row pins sigma = 1/2.
ShockProfile compute_profile(const riemann::ShockConnection& c, const ProfileOptions& opt = {});

/// The tail decay rates of the linearisation without solving for the profile.
EndLinearization linearize_left(const riemann::ShockConnection& c);
EndLinearization linearize_right(const riemann::ShockConnection& c);

/// Max-norm of the un-integrated travelling-wave equations evaluated with
/// second-order differences on the profile grid.
struct TravelingResidual {
    double mass = 0.0;
    double momentum = 0.0;
    double poisson = 0.0;
    double max() const;
};
TravelingResidual traveling_wave_residual(const ShockProfile& p);

struct TailFit {
    double rate = 0.0;  ///< exponential decay rate in xi
    double r_squared = 0.0;
    std::size_t samples = 0;
    double decades = 0.0;
};

struct ProfileDecay {
    TailFit n_left, n_right, u_left, u_right, phi_left, phi_right;
    double theta_left = 0.0;   ///< rate / delta
    double theta_right = 0.0;
    std::array<double, 3> c_bounds{};  ///< constants of the derivative bounds, k = 0, 1, 2
};

/// Log-linear fits of |q - q_bar| on both tails, for q = n, u, phi.
ProfileDecay fit_profile_decay(const ShockProfile& p);

/// Pointwise shape checks. Since phi_bar = -ln n_bar and n decreases across a
/// 2-shock, phi increases; the comparison is between -n' and phi'.
struct ProfileStructure {
    bool n_decreasing = false;
    bool phi_increasing = false;
    double flux_identity_error = 0.0;  ///< max relative error of n' = n^2 u' / |j|
    double comparability = 0.0;        ///< smallest C with -n'/phi' in [1/C, C]
    std::size_t first_violation = 0;   ///< grid index of the first failed sign check
    double sigma_at_zero = 0.0;
    bool sigma_monotone = false;
};

ProfileStructure verify_profile_structure(const ShockProfile& p);

}  // namespace nsp::profile
