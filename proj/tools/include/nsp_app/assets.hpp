#pragma once

#include "nsp/ansatz.hpp"
#include "nsp/cauchy.hpp"
#include "nsp/shifts.hpp"
#include "nsp_app/config.hpp"

#include <memory>
#include <optional>

namespace nsp::app {

/// Cell histories of the two far fields on the line spacing.
struct CellHistories {
    periodic::PeriodicHistory minus, plus;
};

CellHistories evolve_cells(const ExperimentConfig& c, const riemann::EndState& left, const riemann::EndState& right,
                           double T_end);

/// Everything the shock pipelines share. The shift system keeps references
/// into this object, so it lives behind a unique_ptr and never moves.
struct ShockAssets {
    riemann::ShockConnection connection;
    profile::ShockProfile profile;
    CellHistories cells;
    std::unique_ptr<shifts::ShiftSystem> system;
    shifts::ShockInitialData data;
    shifts::LineGrid grid;
    shifts::MassLedger ledger;
    shifts::InitialShifts initial;
    shifts::AsymptoticShifts asymptotic;
    shifts::ShiftTrajectory trajectory;
    double added_amplitude = 0.0;
    double nu = 0.0;

    ShockAssets() = default;
    ShockAssets(const ShockAssets&) = delete;
    ShockAssets& operator=(const ShockAssets&) = delete;
};

std::unique_ptr<ShockAssets> build_shock_assets(const ExperimentConfig& c);

/// Shift of the trajectory at time t (nearest sample).
std::pair<double, double> shifts_at(const shifts::ShiftTrajectory& tr, double t);

/// sqrt(|Phi|^2 + |Psi|^2 + |(n~, m~, phi~)|_{H1}^2) of a diagnostics record,
/// an upper bound for the H2 size of the antiderivatives.
double antiderivative_h2(const cauchy::DiagnosticRecord& r);

struct ShockRun {
    cauchy::Domain domain;
    cauchy::DiagnosticsSeries series;
    double initial_h2 = 0.0;
};

/// Full Cauchy run of the shock scenario with L = domain_factor times the
/// horizon rule.
ShockRun run_shock_scenario(const ExperimentConfig& c, const ShockAssets& a, double domain_factor);

struct RarefactionRun {
    cauchy::Domain domain;
    cauchy::DiagnosticsSeries series;
    double initial_h2 = 0.0;
};

RarefactionRun run_rarefaction_scenario(const ExperimentConfig& c, const ansatz::SmoothRarefaction& r);

/// Largest dist_linf at t >= t_transient over its value at the last record.
double decay_factor(const cauchy::DiagnosticsSeries& s, double t_transient);

/// dist_linf of the record at time t.
double dist_at(const cauchy::DiagnosticsSeries& s, double t);

}  // namespace nsp::app
