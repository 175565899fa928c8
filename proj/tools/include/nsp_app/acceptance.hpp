#pragma once

#include "nsp_app/pipelines.hpp"

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace nsp::app {

struct CriterionResult {
    int id = 0;
    std::string title;
    std::vector<Check> checks;
    std::vector<std::pair<std::string, std::string>> info;
    double seconds = 0.0;
    double budget_seconds = 0.0;
    std::string error;  ///< set when the run threw

    bool pass() const;
    /// "criterion N PASS|FAIL title (t s): name=value ..." on one line.
    std::string line() const;
};

struct Criterion {
    int id = 0;
    std::string title;
    double budget_seconds = 0.0;
    std::function<void(CriterionResult&, const std::filesystem::path&)> run;
};

/// The nine acceptance criteria, in order.
std::vector<Criterion> acceptance_criteria();

/// Runs the selected criteria (all when ids is empty), printing one line per
/// criterion to os as it finishes. Artifacts go under out/criterion_N.
std::vector<CriterionResult> run_acceptance(const std::filesystem::path& out, std::ostream& os,
                                            const std::vector<int>& ids = {});

/// Shock config used by the full Cauchy criterion and the default shock.cfg.
ExperimentConfig acceptance_shock_config();
/// Rarefaction config used by the full Cauchy criterion.
ExperimentConfig acceptance_rarefaction_config();

}  // namespace nsp::app
