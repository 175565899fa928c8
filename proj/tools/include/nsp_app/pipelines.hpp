#pragma once

#include "nsp_app/config.hpp"

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace nsp::app {

/// One asserted check: pass iff lo <= value <= hi.
struct Check {
    std::string name;
    double value = 0.0;
    double lo = 0.0, hi = 0.0;
    bool pass = false;
};

Check check_le(const std::string& name, double value, double hi);
Check check_ge(const std::string& name, double value, double lo);
Check check_in(const std::string& name, double value, double lo, double hi);
Check check_true(const std::string& name, bool ok);

struct Report {
    std::string command;
    std::vector<Check> checks;
    std::vector<std::pair<std::string, std::string>> info;
    double seconds = 0.0;

    bool all_pass() const;
    void add_info(const std::string& key, double value);
    void add_info(const std::string& key, const std::string& value);
    /// key = value lines; ends with all_pass.
    std::string summary_text() const;
};

Report run_profile(const ExperimentConfig& c, const std::filesystem::path& out);
Report run_periodic(const ExperimentConfig& c, const std::filesystem::path& out);
Report run_shifts(const ExperimentConfig& c, const std::filesystem::path& out);
Report run_simulate_shock(const ExperimentConfig& c, const std::filesystem::path& out);
Report run_simulate_rarefaction(const ExperimentConfig& c, const std::filesystem::path& out);

/// Writes summary.txt into out and returns the path.
std::filesystem::path write_summary(const Report& r, const std::filesystem::path& out);

}  // namespace nsp::app
