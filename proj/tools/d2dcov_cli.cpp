// Command-line front end: one subcommand per experiment, CSV on stdout or --out.

#include "d2dcov/config.hpp"
#include "d2dcov/experiments.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>
#include <vector>

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

struct Common {
    std::string config_path;
    std::uint64_t seed = 1;
    std::size_t n = 0;
    std::string out;
    int workers = 1;
    std::string method = "both";
    std::vector<std::string> sets;
    std::string sweep_var;
    std::string sweep_range;
};

void add_common(CLI::App* sub, Common& c, bool sweepable)
{
    sub->add_option("--config", c.config_path, "flat key = value configuration file");
    sub->add_option("--seed", c.seed, "master seed");
    sub->add_option("--n", c.n, "realizations (typical-UE draws for mode-prob and txpower-sweep)");
    sub->add_option("--out", c.out, "CSV output path (stdout when omitted)");
    sub->add_option("--workers", c.workers, "worker threads; results do not depend on it");
    sub->add_option("--method", c.method, "analytic|montecarlo|both")
        ->check(CLI::IsMember({"analytic", "montecarlo", "both"}));
    sub->add_option("--set", c.sets, "config override key=value (repeatable)");
    if (sweepable) {
        sub->add_option("--var", c.sweep_var, "sweep variable (numeric config key)");
        sub->add_option("--range", c.sweep_range, "sweep range lo:hi:step");
    }
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Coverage and ASE of D2D-underlaid uplink cellular networks"};
    app.require_subcommand(1);
    Common common;
    std::string mode = "cellular";
    double threshold_db = 0.0;
    double gamma0_db = 0.0;
    std::vector<std::string> criteria;

    const std::map<std::string, std::string> about = {
        {"mode-prob", "cellular-mode probability q versus beta_dbm"},
        {"txpower-sweep", "mean cellular-UE transmit power versus p0_dbm"},
        {"coverage", "coverage probability versus SINR threshold T_dB"},
        {"ase-sweep", "area spectral efficiency of both tiers versus lambda_u"},
        {"beta-sweep", "cellular coverage at a fixed threshold versus beta_dbm"},
        {"validate", "cross-engine acceptance criteria AC-1..AC-9"},
    };
    for (const std::string& id : d2d::experiment_ids()) {
        CLI::App* sub = app.add_subcommand(id, about.count(id) ? about.at(id) : "");
        add_common(sub, common, id != "validate");
        if (id == "coverage")
            sub->add_option("--mode", mode, "cellular|d2d")->check(CLI::IsMember({"cellular", "d2d"}));
        if (id == "beta-sweep")
            sub->add_option("--threshold-db", threshold_db, "SINR threshold in dB");
        if (id == "ase-sweep")
            sub->add_option("--gamma0-db", gamma0_db, "working SINR threshold in dB");
        if (id == "validate")
            sub->add_option("--criterion", criteria, "criterion id, e.g. AC-3 (repeatable; all when omitted)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        d2d::ExperimentSpec spec;
        spec.id = app.get_subcommands().front()->get_name();
        if (!common.config_path.empty())
            spec.config = d2d::load_config(common.config_path);
        for (const std::string& kv : common.sets) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos)
                throw d2d::UsageError("--set expects key=value, got '" + kv + "'");
            d2d::apply_override(spec.config, kv.substr(0, eq), kv.substr(eq + 1));
            spec.overrides.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
        }
        spec.config.validate();
        if (!common.sweep_range.empty() || !common.sweep_var.empty()) {
            const std::string var =
                common.sweep_var.empty() ? d2d::default_sweep(spec.id).variable : common.sweep_var;
            if (common.sweep_range.empty())
                throw d2d::UsageError("--var needs --range lo:hi:step");
            spec.sweep = d2d::parse_sweep_range(var, common.sweep_range);
        }
        spec.method = d2d::parse_method_selection(common.method);
        spec.mode = mode == "d2d" ? d2d::Mode::d2d : d2d::Mode::cellular;
        spec.threshold_db = threshold_db;
        spec.gamma0_db = gamma0_db;
        spec.seed = common.seed;
        spec.n = common.n;
        spec.workers = common.workers;
        spec.output_path = common.out;
        spec.criteria = criteria;
        spec.validate();
        return d2d::run_experiment(spec, std::cout, std::cerr);
    } catch (const d2d::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}
