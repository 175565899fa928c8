#include "nsp/error.hpp"
#include "nsp_app/acceptance.hpp"
#include "nsp_app/config.hpp"
#include "nsp_app/output.hpp"
#include "nsp_app/pipelines.hpp"

#include "CLI11.hpp"

#include <iostream>

namespace {

using namespace nsp::app;

struct Common {
    std::string config;
    std::string out;
    int refine = 1;
};

void add_common(CLI::App* cmd, Common& c)
{
    cmd->add_option("-c,--config", c.config, "Config file (defaults apply when omitted)")->check(CLI::ExistingFile);
    cmd->add_option("-o,--out", c.out, "Output directory (overrides output.dir)");
    cmd->add_option("--refine", c.refine, "Multiply the resolution by this factor")->check(CLI::PositiveNumber);
}

ExperimentConfig resolve(const Common& o, Scenario fallback)
{
    ExperimentConfig c = o.config.empty() ? default_config(fallback) : load_config(o.config);
    if (o.refine > 1) refine(c, o.refine);
    if (!o.out.empty()) c.out_dir = o.out;
    validate(c);
    return c;
}

int finish(const ExperimentConfig& c, const Report& r)
{
    write_text(c.out_dir / "config.resolved", describe(c));
    const auto path = write_summary(r, c.out_dir);
    std::cout << r.summary_text() << "summary written to " << path.string() << "\n";
    return r.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Travelling waves and periodic perturbations of the 1D Navier-Stokes-Poisson system"};
    app.require_subcommand(1);

    Common common;
    std::vector<int> only;
    std::string verify_out = "out/verify";

    auto* profile = app.add_subcommand("profile", "Viscous shock profile and its structure checks");
    auto* periodic = app.add_subcommand("periodic", "Decay of the periodic far-field perturbations");
    auto* shifts = app.add_subcommand("shifts", "Shift curves and their asymptotic values");
    auto* shock = app.add_subcommand("simulate-shock", "Full Cauchy run around the shifted shock");
    auto* rare = app.add_subcommand("simulate-rarefaction", "Full Cauchy run around the smoothed rarefaction");
    for (auto* cmd : {profile, periodic, shifts, shock, rare}) add_common(cmd, common);
    auto* verify = app.add_subcommand("verify-all", "Run the acceptance suite on the built-in defaults");
    verify->add_option("-o,--out", verify_out, "Directory for the artifacts of each criterion");
    verify->add_option("--only", only, "Run only these criterion numbers");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*verify) {
            const auto results = run_acceptance(verify_out, std::cout, only);
            bool ok = true;
            for (const auto& r : results) ok = ok && r.pass();
            std::cout << (ok ? "all criteria pass" : "some criteria fail") << "\n";
            return ok ? 0 : 1;
        }
        if (*profile) {
            const auto c = resolve(common, Scenario::Shock);
            return finish(c, run_profile(c, c.out_dir));
        }
        if (*periodic) {
            const auto c = resolve(common, Scenario::Shock);
            return finish(c, run_periodic(c, c.out_dir));
        }
        if (*shifts) {
            const auto c = resolve(common, Scenario::Shock);
            return finish(c, run_shifts(c, c.out_dir));
        }
        if (*shock) {
            const auto c = resolve(common, Scenario::Shock);
            return finish(c, run_simulate_shock(c, c.out_dir));
        }
        if (*rare) {
            const auto c = resolve(common, Scenario::Rarefaction);
            return finish(c, run_simulate_rarefaction(c, c.out_dir));
        }
    } catch (const nsp::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const nsp::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
