#pragma once

#include "nsp/ansatz.hpp"
#include "nsp/periodic.hpp"
#include "nsp/shifts.hpp"
#include "nsp/shock_profile.hpp"

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace nsp::cauchy {

/// Truncated line x_i = i h, i0 <= i <= i1.
struct Domain {
    double h = 0.0;
    long long i0 = 0, i1 = 0;

    std::size_t size() const { return static_cast<std::size_t>(i1 - i0 + 1); }
    double x_min() const { return static_cast<double>(i0) * h; }
    double x_max() const { return static_cast<double>(i1) * h; }
    double x(std::size_t k) const { return static_cast<double>(i0 + static_cast<long long>(k)) * h; }
    Grid1D grid() const { return Grid1D(x_min(), x_max(), size()); }
};

/// Distance covered by boundary disturbances by time T: fastest
/// characteristic times T plus a diffusive spread.
double boundary_horizon(double c_max, double T, double n_min);

/// [-W - 1.2 H, s T + W + 1.2 H], with the margin W + 1.2 H multiplied by factor.
Domain shock_domain(const riemann::ShockConnection& c, double h, double T, double W, double factor = 1.0);
/// Fan support from t = 0 to T widened by 1.2 H on both sides (times factor).
Domain rarefaction_domain(const ansatz::SmoothRarefaction& r, double h, double T, double factor = 1.0);

struct CauchyState {
    double t = 0.0;
    Domain domain;
    std::vector<double> n, m, phi;

    SpatialField field(char which) const;
};

/// Far-field data at line node i for the given cell states and time.
using BoundaryFn = std::function<ansatz::AnsatzPoint(const ansatz::CellPair&, double, long long)>;

/// SSP-RK2 in flux form on the truncated line. The two end nodes and one
/// ghost node beyond each end follow the ansatz, evaluated on periodic cells
/// that advance in lockstep with the line.
class CauchySolver {
public:
    CauchySolver(const Domain& d, double A, const riemann::EndState& base_minus,
                 const periodic::PerturbationSpec& spec_minus, const riemann::EndState& base_plus,
                 const periodic::PerturbationSpec& spec_plus, BoundaryFn boundary, std::vector<double> n0,
                 std::vector<double> m0, double pb_tol = 1e-11);

    void step(double dt);
    double stable_dt(double cfl_hyperbolic, double cfl_parabolic) const;

    const CauchyState& state() const { return s_; }
    ansatz::CellPair cells() const;
    double A() const { return A_; }
    /// Discrete PB residual of the stored potential on interior nodes.
    double pb_residual() const;
    /// h times the sum over the updated interior block.
    double mass() const;
    double momentum() const;
    /// Net mass and momentum that entered the interior block through its
    /// outer faces since t = 0.
    double mass_inflow() const { return mass_in_; }
    double momentum_inflow() const { return mom_in_; }

private:
    void fill_ghosts(const ansatz::CellPair& c, double t, const std::vector<double>& n, const std::vector<double>& m,
                     const std::vector<double>& phi);
    void pin_ends(const ansatz::CellPair& c, double t, std::vector<double>& n, std::vector<double>& m,
                  std::vector<double>& phi) const;
    void check_positive(const std::vector<double>& n, double t) const;

    double A_, pb_tol_;
    riemann::EndState base_minus_, base_plus_;
    periodic::PeriodicSolver cell_minus_, cell_plus_;
    BoundaryFn boundary_;
    CauchyState s_;
    double mass_in_ = 0.0, mom_in_ = 0.0;
    std::vector<double> en_, em_, ep_, dn0_, dm0_, dn1_, dm1_, n1_, m1_, p1_;
};

/// Cell resolution that makes the period a whole number of line spacings.
std::size_t cell_points(double period, double h);

/// Shock initial state from data.n0, data.m0 with the boundary ansatz frozen
/// at (X_bc, Y_bc).
CauchySolver make_shock_solver(const shifts::ShockInitialData& data, const Domain& d, double X_bc, double Y_bc,
                               double pb_tol = 1e-11);

/// Rarefaction initial state: the ansatz at t = 0 plus optional bumps.
CauchySolver make_rarefaction_solver(const ansatz::SmoothRarefaction& r, const periodic::PerturbationSpec& minus,
                                     const periodic::PerturbationSpec& plus, const Domain& d,
                                     const shifts::Bump& n_bump = {}, const shifts::Bump& m_bump = {},
                                     double pb_tol = 1e-11);

struct DiagnosticRecord {
    double t = 0.0;
    double dist_linf = 0.0;
    double shift_obs = 0.0;  ///< NaN for rarefaction runs
    double h1_pert_norm = 0.0;
    double phi_l2 = 0.0;
    double anti_phi = 0.0, anti_psi = 0.0;
    double mass_total = 0.0, momentum_total = 0.0;
    double conservation_defect = 0.0;  ///< |change of totals - boundary inflow|
    double pb_residual = 0.0;
    double anti_phi_end = 0.0, anti_psi_end = 0.0;  ///< antiderivatives at the right end
};

struct DiagnosticsSeries {
    std::vector<DiagnosticRecord> records;
    CauchyState final_state;
    std::size_t steps = 0;
};

struct RunOptions {
    double T_end = 10.0;
    double output_interval = 0.5;
    double cfl_hyperbolic = 0.4;
    double cfl_parabolic = 0.25;
    /// Window of the distance and shift diagnostics. Shock runs read it
    /// relative to s t, so it travels with the wave.
    double window_lo = 0.0, window_hi = 0.0;
    /// Shifts of the ansatz used for the perturbation norms; X_inf when unset.
    std::function<std::pair<double, double>(double)> shifts;
    double X_inf = 0.0;
    /// Called with every record as it is produced; may throw to abort the run.
    std::function<void(const DiagnosticRecord&)> on_record;
};

/// L-infinity distance of (n, m, phi) to the profile shifted by X_inf and a
/// golden-section estimate of the realised shift.
DiagnosticsSeries run_shock(CauchySolver& solver, const profile::ShockProfile& p, const RunOptions& opt);
/// Sup distance to the exact fan.
DiagnosticsSeries run_rarefaction(CauchySolver& solver, const ansatz::SmoothRarefaction& r, const RunOptions& opt);

/// Translate X of the profile that best fits n on [lo, hi] in least squares,
/// by golden-section search on [X_lo, X_hi] to resolution tol.
double observed_shift(const CauchyState& s, const profile::ShockProfile& p, double lo, double hi, double X_lo,
                      double X_hi, double tol);

/// Largest difference of dist_linf between two series at common times.
double series_difference(const DiagnosticsSeries& a, const DiagnosticsSeries& b);

}  // namespace nsp::cauchy
