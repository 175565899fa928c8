#pragma once

#include "nsp/periodic.hpp"
#include "nsp/shock_profile.hpp"

#include <utility>
#include <vector>

namespace nsp::shifts {

/// Gaussian bump amplitude * exp(-((x - center) / width)^2).
struct Bump {
    double amplitude = 0.0;
    double center = 0.0;
    double width = 1.0;

    double operator()(double x) const;
    double mass() const;
};

/// cos^2 window of width 4 centred at 0, with unit peak.
double zero_mass_window(double x);

/// Shock initial data: profile plus weight-blended periodic oscillations
/// and localized bumps. The zero-mass window is added to m0 only.
struct ShockInitialData {
    const profile::ShockProfile* profile = nullptr;
    periodic::PerturbationSpec minus, plus;
    Bump n_bump, m_bump;
    double zero_mass_amplitude = 0.0;
    /// Offset of the profile, bumps and window. The periodic specs are not
    /// moved by this field; translated() moves them too.
    double translation = 0.0;

    double n0(double x) const;
    double m0(double x) const;
    /// The same data moved right by a, including the periodic phases.
    ShockInitialData translated(double a) const;
    void validate() const;
};

/// Line nodes x_i = i h for lo <= i <= hi. Sharing the cell spacing lets
/// periodic values be read by index wrapping.
struct LineGrid {
    double h = 0.0;
    long long lo = 0, hi = 0;

    double x(long long i) const { return static_cast<double>(i) * h; }
    std::size_t size() const { return static_cast<std::size_t>(hi - lo + 1); }
};

/// Grid covering the profile table, the bumps and `margin` on each side.
LineGrid line_grid(const ShockInitialData& d, double h, double margin = 30.0);

/// Half-line integrals of the initial excess over profile and oscillation.
struct MassLedger {
    double int_n_left = 0.0, int_n_right = 0.0;
    double int_m_left = 0.0, int_m_right = 0.0;

    double n_total() const { return int_n_left + int_n_right; }
    double m_total() const { return int_m_left + int_m_right; }
};

MassLedger compute_ledger(const ShockInitialData& d, const LineGrid& g);

/// sigma-weighted functionals of the initial shifts.
double functional_a1(const ShockInitialData& d, const LineGrid& g, double X);
double functional_a2(const ShockInitialData& d, const LineGrid& g, double Y);

struct InitialShifts {
    double X0 = 0.0, Y0 = 0.0;
    double slope_a1 = 1.0, slope_a2 = 1.0;  ///< derivatives at the roots
    int iterations = 0;
};

/// Newton roots of A1(X0) + I_n / [n] = 0 and A2(Y0) + I_m / [m] = 0.
InitialShifts initial_shifts(const ShockInitialData& d, const LineGrid& g, const MassLedger& ledger);

/// Right-hand side of the shift ODEs over a pair of cell histories.
class ShiftSystem {
public:
    ShiftSystem(const profile::ShockProfile& p, const periodic::PeriodicHistory& minus,
                const periodic::PeriodicHistory& plus);

    /// (X', Y') at snapshot index idx.
    std::pair<double, double> rhs_at(std::size_t idx, double X, double Y) const;
    std::pair<double, double> rhs(double t, double X, double Y) const;

    double output_interval() const { return minus_.output_interval; }
    double end_time() const { return std::min(minus_.end_time(), plus_.end_time()); }
    std::size_t snapshots() const { return std::min(minus_.times.size(), plus_.times.size()); }
    double spacing() const { return minus_.spacing; }
    const profile::ShockProfile& profile() const { return profile_; }
    const periodic::PeriodicHistory& minus() const { return minus_; }
    const periodic::PeriodicHistory& plus() const { return plus_; }
    /// Slowest fitted decay rate of the two cells, 0 if neither is perturbed.
    double decay_rate() const { return rate_; }

    /// Jump of the cell averages of m^2/n + (A+1)n - phi_x^2/2 over the means.
    double flux_average_jump(std::size_t idx) const;

private:
    const profile::ShockProfile& profile_;
    const periodic::PeriodicHistory& minus_;
    const periodic::PeriodicHistory& plus_;
    double xi_lo_ = 0.0, xi_hi_ = 0.0, rate_ = 0.0;
    // Per snapshot: m^2/n + (A+1)n - (m/n)_x - phi_x^2/2 - phi_xx on the cell.
    std::vector<std::vector<double>> q_minus_, q_plus_;
};

struct ShiftSample {
    double t = 0.0, X = 0.0, Y = 0.0, Xprime = 0.0, Yprime = 0.0;
};

struct ShiftOptions {
    int step_multiple = 1;      ///< RK4 step in units of two output intervals
    double tail_tol = 1e-6;     ///< allowed bound on |X(inf) - X(T)|
    double max_shift = 50.0;    ///< |X|, |Y| bound of the run
};

struct ShiftTrajectory {
    std::vector<ShiftSample> samples;
    double tail_bound = 0.0;
    const ShiftSample& terminal() const { return samples.back(); }
};

/// Classical RK4 on the snapshot lattice up to T_end (or the end of the
/// histories when T_end <= 0).
ShiftTrajectory integrate_shifts(const ShiftSystem& sys, double X0, double Y0, double T_end = 0.0,
                                 const ShiftOptions& opt = {});

struct AsymptoticShifts {
    double X_inf = 0.0, Y_inf = 0.0;
    double zero_mass_residual = 0.0;
    double a1 = 0.0, a2 = 0.0;              ///< A1(X0), A2(Y0)
    double d_rho_jump = 0.0, d_w_jump = 0.0;  ///< jumps of the mean double integrals
    double time_integral = 0.0;
    double tail_bound = 0.0;
};

AsymptoticShifts asymptotic_shifts(const ShockInitialData& d, const LineGrid& g, const MassLedger& ledger,
                                   const InitialShifts& x0, const ShiftSystem& sys, double tail_tol = 1e-8);

struct ZeroMassResult {
    ShockInitialData data;
    MassLedger ledger;
    InitialShifts shifts;
    AsymptoticShifts asymptotic;
    double added_amplitude = 0.0;
};

/// Adjusts the m0 window amplitude so the zero-mass residual vanishes.
ZeroMassResult enforce_zero_mass(const ShockInitialData& draft, const LineGrid& g, const ShiftSystem& sys,
                                 double residual_tol = 1e-10, double max_amplitude = 0.1);

}  // namespace nsp::shifts
