#pragma once

#include "nsp/grid.hpp"
#include "nsp/riemann.hpp"

#include <optional>
#include <vector>

namespace nsp::periodic {

/// One Fourier mode: amp * cos(2 pi k x / period + phase).
struct Mode {
    int k = 1;
    double amp_n = 0.0;
    double amp_m = 0.0;
    double phase_n = 0.0;
    double phase_m = 0.0;
};

/// Zero-average periodic perturbation (rho0, w0) of a constant state.
struct PerturbationSpec {
    double period = 6.283185307179586;
    std::vector<Mode> modes;

    double rho(double x) const;
    double w(double x) const;
    /// (1/period) int_0^period int_0^x f(y) dy dx, in closed form.
    double double_integral_mean_rho() const;
    double double_integral_mean_w() const;
    bool is_zero() const;
    void validate() const;
};

/// Cell grid [0, period] with `points` distinct nodes plus the duplicated end.
Grid1D cell_grid(double period, std::size_t points);

/// Discrete H3 norm of (rho0, w0) over one period.
double perturbation_size(const PerturbationSpec& spec, std::size_t points);

/// Solves phi'' = n - e^{-phi}. Periodic fields use a cyclic solve; otherwise
/// the end values of the returned field are the given Dirichlet data.
SpatialField poisson_boltzmann_solve(const SpatialField& n, double tol = 1e-11, double left_value = 0.0,
                                     double right_value = 0.0, const SpatialField* initial_guess = nullptr);

struct SolverOptions {
    std::size_t points = 256;  ///< distinct nodes per period
    double dt = 0.0;           ///< 0 selects the stable step
    double cfl_hyperbolic = 0.4;
    double cfl_parabolic = 0.25;
    double output_interval = 0.05;
    double pb_tol = 1e-11;
    double blowup_factor = 10.0;
};

/// Explicit SSP-RK2 evolution of the NSP system on one periodic cell.
class PeriodicSolver {
public:
    PeriodicSolver(const riemann::EndState& base, const PerturbationSpec& spec, double A, std::size_t points,
                   double pb_tol = 1e-11);

    /// Advances by dt. After the call, stage() holds the intermediate Euler
    /// state, which the line solver needs for its boundary data.
    void step(double dt);

    struct State {
        std::vector<double> n, m, phi;
    };
    const State& state() const { return cur_; }
    const State& stage() const { return stage_; }
    double time() const { return t_; }
    double spacing() const { return h_; }
    std::size_t points() const { return P_; }
    double A() const { return A_; }
    double stable_dt(double cfl_h, double cfl_p) const;

private:
    void rhs(const State& s, std::vector<double>& dn, std::vector<double>& dm);
    void solve_phi(State& s, const std::vector<double>& guess);

    double A_, h_, pb_tol_;
    std::size_t P_;
    double t_ = 0.0;
    State cur_, stage_;
    std::vector<double> ext_n_, ext_m_, ext_phi_, dn0_, dm0_, dn1_, dm1_;
};

/// Perturbation norms of one snapshot.
struct SnapshotNorms {
    double l2_n = 0.0;
    double l2_m = 0.0;
    double h1_total = 0.0;  ///< H1 norm of (rho, w, v, varphi)
};

class PeriodicHistory {
public:
    riemann::EndState base;
    double A = 1.0;
    PerturbationSpec spec;
    double period = 0.0;
    std::size_t points = 0;
    double spacing = 0.0;
    double dt = 0.0;
    double output_interval = 0.0;
    double nu = 0.0;
    std::vector<double> times;
    std::vector<PeriodicSolver::State> snapshots;
    std::optional<double> fitted_alpha;

    Grid1D grid() const { return cell_grid(period, points); }
    /// Index of the snapshot at time t; t must lie on the output lattice.
    std::size_t index_at(double t) const;
    double end_time() const { return times.back(); }

    SnapshotNorms norms(std::size_t idx) const;
    /// Value of a snapshot field at the line point x = i * spacing.
    double n_at(std::size_t idx, long long i) const { return snapshots[idx].n[wrap(i)]; }
    double m_at(std::size_t idx, long long i) const { return snapshots[idx].m[wrap(i)]; }
    double phi_at(std::size_t idx, long long i) const { return snapshots[idx].phi[wrap(i)]; }
    std::size_t wrap(long long i) const;

    /// Field of a snapshot as a periodic SpatialField on the cell.
    SpatialField field(std::size_t idx, char which) const;
    /// Cell averages of n - n_bar and m - m_bar.
    std::pair<double, double> average_drift(std::size_t idx) const;
    /// Max Poisson-Boltzmann residual of a stored potential.
    double pb_residual(std::size_t idx) const;
};

/// Cell evolution with snapshots every output_interval up to T_end.
PeriodicHistory evolve_periodic(const riemann::EndState& base, const PerturbationSpec& spec, double A, double T_end,
                                const SolverOptions& opt = {});

struct AlphaFit {
    double alpha = 0.0;      ///< decay rate of the H1 perturbation norm
    double intercept = 0.0;  ///< log of the fitted amplitude
    double r_squared = 0.0;
    double envelope_c = 0.0;  ///< max over the window of norm / (nu e^{-alpha t})
    double window_start = 0.0, window_end = 0.0;
    double decades = 0.0;
};

/// Least-squares slope of log(H1 norm) over the post-transient window
/// [t_start, last time with norm above floor]. Rejects histories with less
/// than min_decades of decay. The default floor sits well above the
/// grid-scale neutral mode of the collocated central scheme, which rounding
/// keeps at about 1e-12 in H1.
AlphaFit fit_alpha(const PeriodicHistory& h, double t_start = 1.0, double floor = 1e-10, double min_decades = 2.0);

}  // namespace nsp::periodic
