#pragma once

#include "nsp/periodic.hpp"
#include "nsp/riemann.hpp"
#include "nsp/shifts.hpp"
#include "nsp/shock_profile.hpp"

#include <string>
#include <vector>

namespace nsp::ansatz {

/// Burgers solution and its x-derivatives.
struct BurgersSample {
    double w = 0.0, wx = 0.0, wxx = 0.0, wxxx = 0.0;
};

/// Solution of w_t + w w_x = 0 with w(x,0) = a + b tanh(eps x),
/// a = (w+ + w-)/2, b = (w+ - w-)/2, from the implicit characteristic
/// relation x = xi + t w0(xi). Requires t >= 0 and w_plus >= w_minus.
BurgersSample burgers_smooth(double x, double t, double w_minus, double w_plus, double eps);

struct RarefactionSample {
    double n = 0, u = 0, phi = 0;
    double n_x = 0, u_x = 0, phi_x = 0;
    double n_xx = 0, u_xx = 0, phi_xx = 0;
    double n_xxx = 0, u_xxx = 0, phi_xxx = 0;
};

/// Smoothed 2-rarefaction: the fan with w(x/t) replaced by w^r(x, t+1).
class SmoothRarefaction {
public:
    SmoothRarefaction(const riemann::RarefactionEndpoints& r, double epsilon);

    RarefactionSample at(double x, double t) const;
    double sigma(double x, double t) const;
    double eta(double x, double t) const;

    const riemann::RarefactionEndpoints& endpoints() const { return r_; }
    double epsilon() const { return eps_; }
    /// |n+ - n-| + |u+ - u-|
    double delta() const;
    /// Interval outside which the profile is within tol of its end states.
    std::pair<double, double> support(double t, double tol = 1e-12) const;

private:
    riemann::RarefactionEndpoints r_;
    double eps_, c_;
};

/// Bound check of ||d^k/dx^k [n^r, u^r, phi^r]||_{L^p} against the
/// smoothing/fan envelope.
struct DerivativeEnvelope {
    int order = 1;
    double p = 1.0;  ///< infinity for the sup norm
    double c_max = 0.0;
    double t_at_max = 0.0;
};

std::vector<DerivativeEnvelope> rarefaction_envelopes(const SmoothRarefaction& r, const std::vector<double>& times,
                                                      double h = 0.02);

/// sup_x |[n^r, u^r, phi^r](x,t) - [n^R, u^R, phi^R](x/t)|
double distance_to_fan(const SmoothRarefaction& r, double t, double h = 0.01);

/// Ansatz on the line nodes x_i = i h, i0 <= i <= i0 + size - 1.
struct AnsatzFields {
    double t = 0.0;
    long long i0 = 0;
    SpatialField n, m, u, phi;
};

/// Periodic cell states read by index wrapping on the shared spacing.
struct CellPair {
    const periodic::PeriodicSolver::State* minus = nullptr;
    const periodic::PeriodicSolver::State* plus = nullptr;
    riemann::EndState minus_base, plus_base;

    static CellPair from_histories(const periodic::PeriodicHistory& minus, const periodic::PeriodicHistory& plus,
                                   std::size_t idx);
};

struct AnsatzPoint {
    double n = 0.0, m = 0.0, phi = 0.0;
};

/// n = n^s_X + rho-(1 - sigma_X) + rho+ sigma_X, m likewise at Y,
/// phi = phi^s_X + varphi-(1 - sigma_X) + varphi+ sigma_X.
AnsatzPoint shock_point(const profile::ShockProfile& p, const CellPair& cells, double h, double t, long long i,
                        double X, double Y);
/// n = n^r + rho-(1 - sigma) + rho+ sigma, u = u^r + v-(1 - eta) + v+ eta.
AnsatzPoint rarefaction_point(const SmoothRarefaction& r, const CellPair& cells, double h, double t, long long i);

AnsatzFields build_shock_ansatz(const profile::ShockProfile& p, const periodic::PeriodicHistory& minus,
                                const periodic::PeriodicHistory& plus, std::size_t idx, double X, double Y,
                                long long i0, long long i1);
/// Travelling profile frozen at shift X, without oscillations.
AnsatzFields build_profile_fields(const profile::ShockProfile& p, double h, double t, double X, long long i0,
                                  long long i1);
AnsatzFields build_rarefaction_ansatz(const SmoothRarefaction& r, const periodic::PeriodicHistory& minus,
                                      const periodic::PeriodicHistory& plus, std::size_t idx, long long i0,
                                      long long i1);
AnsatzFields build_rarefaction_background(const SmoothRarefaction& r, double h, double t, long long i0, long long i1);

/// Residual error terms on the interior of the ansatz window.
struct ErrorTerms {
    double t = 0.0;
    SpatialField r1, r2, r3;
    double h2[3] = {0, 0, 0};  ///< H2 norms of r1, r2, r3
    double anti_l2[2] = {0, 0};  ///< L2 norms of the antiderivatives of r1, r2

    double h2_total() const;
    double anti_total() const;
};

/// h1 = n_t + m_x, h2 = m_t + (m^2/n + (A+1) n - phi_x^2/2 - phi_xx)_x - u_xx,
/// h3 = phi_xx - n + e^{-phi}. Time derivatives by centred differences over
/// the snapshots at t - dt, t, t + dt. With a background triple the same
/// residual of the background is subtracted.
ErrorTerms shock_error_terms(const AnsatzFields& prev, const AnsatzFields& cur, const AnsatzFields& next, double dt,
                             double A, const AnsatzFields* bg_prev = nullptr, const AnsatzFields* bg_cur = nullptr,
                             const AnsatzFields* bg_next = nullptr);

/// k1 = -(n_t + (n u)_x), k2 = -(u_t + u u_x + A n_x/n - phi_x - u_xx/n) - u^r_xx/n^r,
/// k3 = n - e^{-phi} - phi_xx + phi^r_xx, with the background residual subtracted.
ErrorTerms rarefaction_error_terms(const AnsatzFields& prev, const AnsatzFields& cur, const AnsatzFields& next,
                                   double dt, double A, const AnsatzFields& bg_prev, const AnsatzFields& bg_cur,
                                   const AnsatzFields& bg_next);

struct ResidualRecord {
    double t = 0.0;
    double h1_h2 = 0.0, h2_h2 = 0.0, h3_h2 = 0.0;
    double H1_l2 = 0.0, H2_l2 = 0.0;
    double h_total() const;
    double H_total() const;
};

/// Shock residual norms at the trajectory sample times in [t_start, t_end]
/// on the window of the profile table around s t + X(t).
std::vector<ResidualRecord> shock_residual_series(const shifts::ShiftSystem& sys,
                                                  const shifts::ShiftTrajectory& traj, double t_start, double t_end);

/// Rarefaction residual norms at snapshot times in [t_start, t_end], centred
/// differences over one output interval, on the fan support.
std::vector<ResidualRecord> rarefaction_residual_series(const SmoothRarefaction& r,
                                                        const periodic::PeriodicHistory& minus,
                                                        const periodic::PeriodicHistory& plus, double t_start,
                                                        double t_end, double stride_time = 1.0);

/// Max over the records of norm / (nu delta^{power} e^{-rate t}).
double envelope_constant(const std::vector<double>& t, const std::vector<double>& norms, double nu, double delta,
                         double power, double rate);

/// One remainder of the composition/product/derivative calculus.
struct RemainderSeries {
    std::string name;
    bool growth_only = false;  ///< integrable in space but not decaying
    std::vector<double> t, linf, l1, l2;
};

struct RemainderCheck {
    std::string name;
    bool exact = false;  ///< identically zero up to rounding
    bool growth_only = false;
    double rate = 0.0;  ///< fitted decay rate of the sup norm
    double r_squared = 0.0;
    double growth_ratio = 0.0;  ///< max ||R||_p / (C0 (1+t)^{1/p}) over p in {1, 2}
    bool pass = false;
};

/// Remainders of the weight-blend calculus evaluated on the shock ansatz with
/// g1 = sigma_X: f(n) = 1/n, f(u) = u^2, f(phi) = e^{-phi}, n u, alpha n + beta u,
/// u_x, the corollary combination (u^2/n)_x, the identity on n, and u^2 against
/// the plain blend (spatially integrable only).
std::vector<RemainderSeries> lemma_remainders(const shifts::ShiftSystem& sys, const shifts::ShiftTrajectory& traj,
                                              double t_start, double t_end);

std::vector<RemainderCheck> lemma_error_checks(const std::vector<RemainderSeries>& series, double alpha_hat,
                                               double t_fit_start = 1.0);

/// nu = max over the two sides of the H3 size of (rho0, w0).
double perturbation_nu(const periodic::PeriodicHistory& minus, const periodic::PeriodicHistory& plus);

}  // namespace nsp::ansatz
