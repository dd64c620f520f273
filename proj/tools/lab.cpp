// Command line front end: one subcommand per experiment plus `regress`.
// Exit codes: 0 all rows pass, 1 row failures, 2 configuration errors,
// 3 runtime failures.
#include "eulab/experiments.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

namespace {

int config_error(const std::string& msg) {
    std::cerr << msg << "\n";
    return 2;
}

// Applies the JSON document at path onto cfg. Returns 0 on success, else
// the process exit code. Every rejected document names the offending field.
int apply_config(const std::string& path, const std::string& sub,
                 eulab::ExperimentConfig& cfg) {
    std::ifstream in(path);
    if (!in) return config_error("cannot open config: " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const std::exception& e) {
        return config_error(std::string("config parse error: ") + e.what());
    }
    if (!j.is_object()) return config_error("config must be a JSON object");
    for (const auto& [k, v] : j.items()) {
        if (k == "experiment") {
            if (!v.is_string())
                return config_error(
                    "config field 'experiment': expected a string");
            if (v.get<std::string>() != sub)
                return config_error("config field 'experiment': '" +
                                    v.get<std::string>() +
                                    "' does not match subcommand '" + sub +
                                    "'");
        } else if (k == "seed") {
            if (!v.is_number_unsigned())
                return config_error(
                    "config field 'seed': expected a nonnegative integer");
            cfg.seed = v.get<std::uint64_t>();
        } else if (k == "gamma") {
            if (!v.is_number() || !(v.get<double>() > 0.0))
                return config_error(
                    "config field 'gamma': expected a positive number");
            cfg.gamma = v.get<double>();
        } else if (k == "grid") {
            if (!v.is_number_integer() || v.get<int>() <= 0)
                return config_error(
                    "config field 'grid': expected a positive integer");
            cfg.grid = v.get<int>();
        } else if (k == "out") {
            if (!v.is_string())
                return config_error("config field 'out': expected a string");
            cfg.out_dir = v.get<std::string>();
        } else if (k == "stretch_example") {
            if (!v.is_boolean())
                return config_error(
                    "config field 'stretch_example': expected a boolean");
            cfg.stretch_example = v.get<bool>();
        } else {
            return config_error("unknown config field: " + k);
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for a damped isothermal Euler system"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    std::uint64_t seed = 1;
    double gamma = 0.0;
    int grid = 0;
    bool stretch = false;

    std::map<std::string, CLI::App*> subs;
    for (const std::string& name : eulab::experiment_names()) {
        CLI::App* s =
            app.add_subcommand(name, "run the " + name + " experiment");
        s->add_option("--config", config_path, "JSON config document");
        s->add_option("--out", out_dir, "directory for reports and series");
        s->add_option("--seed", seed, "seed for randomized sweeps");
        s->add_option("--gamma", gamma, "damping coefficient")
            ->check(CLI::PositiveNumber);
        s->add_option("--grid", grid, "grid resolution per axis")
            ->check(CLI::PositiveNumber);
        if (name == "blowup")
            s->add_flag("--stretch-example", stretch,
                        "use the built-in stretching velocity profile");
        subs[name] = s;
    }

    std::string rep_dir, gold_dir;
    CLI::App* rg = app.add_subcommand(
        "regress", "compare a report directory against a golden directory");
    rg->add_option("report_dir", rep_dir, "directory with a fresh rows.csv")
        ->required();
    rg->add_option("golden_dir", gold_dir, "directory with the stored rows.csv")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (rg->parsed()) {
        try {
            eulab::RegressResult r = eulab::regress(rep_dir, gold_dir);
            for (const std::string& s : r.drifted)
                std::cout << "drifted: " << s << "\n";
            for (const std::string& s : r.ungoldened)
                std::cout << "ungoldened: " << s << "\n";
            for (const std::string& s : r.missing)
                std::cout << "missing: " << s << "\n";
            if (r.clean()) {
                std::cout << "clean\n";
                return 0;
            }
            return 1;
        } catch (const std::exception& e) {
            std::cerr << "regress failed: " << e.what() << "\n";
            return 3;
        }
    }

    CLI::App* s = app.get_subcommands().front();
    eulab::ExperimentConfig cfg;
    cfg.experiment = s->get_name();
    if (s->count("--config")) {
        int rc = apply_config(config_path, cfg.experiment, cfg);
        if (rc != 0) return rc;
    }
    // command line overrides the document
    if (s->count("--out")) cfg.out_dir = out_dir;
    if (s->count("--seed")) cfg.seed = seed;
    if (s->count("--gamma")) cfg.gamma = gamma;
    if (s->count("--grid")) cfg.grid = grid;
    if (cfg.experiment == "blowup" && s->count("--stretch-example"))
        cfg.stretch_example = true;

    try {
        std::vector<eulab::ReportRow> rows = eulab::run_experiment(cfg);
        eulab::write_rows_csv(std::cout, rows);
        int failed = 0;
        for (const eulab::ReportRow& r : rows)
            if (!r.pass) ++failed;
        if (failed == 0) {
            std::cout << "verdict: all " << rows.size() << " rows pass\n";
            return 0;
        }
        std::cout << "verdict: " << failed << " of " << rows.size()
                  << " rows failed\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "bad configuration: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "experiment failed: " << e.what() << "\n";
        return 3;
    }
}
