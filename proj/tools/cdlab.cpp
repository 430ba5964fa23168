// cdlab: batch experiment runner for the convolution-dominated operator lab.
//
// Exit codes: 0 success, 2 parse error, 3 validation error, 4 numerical
// failure, 5 invariant violation.

#include <CLI11.hpp>
#include <iostream>

#include "cdops/experiments.hpp"

namespace {

struct CliArgs {
    std::string config_path;
    std::string group;
    std::string preset;
    std::vector<int> radii;
    std::string window_kind;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    double tol = 0.0;
    int trials = -1;
    int n_max = 0;
    std::vector<double> eps;
};

void add_common(CLI::App* cmd, CliArgs& args) {
    cmd->add_option("--config", args.config_path, "experiment config file");
    cmd->add_option("--group", args.group, "group spec, e.g. 'Zd d=1' or 'Rd_grid d=1 q=8'");
    cmd->add_option("--preset", args.preset, "named operator preset");
    cmd->add_option("--window-radius", args.radii, "window radii (increasing)")->delimiter(',');
    cmd->add_option("--window-kind", args.window_kind, "box or ball");
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--seed", args.seed, "random seed recorded in all reports")
        ->each([&](const std::string&) { args.seed_set = true; });
    cmd->add_option("--tol", args.tol, "tolerance");
    cmd->add_option("--trials", args.trials, "number of random trials");
    cmd->add_option("--nmax", args.n_max, "power sequence length / search caps");
    cmd->add_option("--eps", args.eps, "Folner epsilon list")->delimiter(',');
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for convolution-dominated operator algebras"};
    app.require_subcommand(1);

    CliArgs args;
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"norms", "CD norm, operator norm and block norms of the configured operator"},
        {"multiply-check", "random dense-oracle checks of mul/adjoint/apply"},
        {"invert", "finite-section inversion across windows with decay profiles"},
        {"spectral", "CD-norm power sequence r_n against the dense spectral radius"},
        {"folner", "Folner set search with certificates"},
        {"overlap", "random overlap-count bound checks"},
        {"intertwine", "intertwiner residual of the doubled-space representations"},
    };
    for (const auto& [name, desc] : commands) add_common(app.add_subcommand(name, desc), args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return cdops::kExitParseError;
    }

    cdops::ExperimentConfig cfg;
    try {
        if (!args.config_path.empty()) cfg = cdops::parse_config_file(args.config_path);
    } catch (const cdops::ConfigParseError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return cdops::kExitParseError;
    }

    cfg.kind = cdops::experiment_from_name(app.get_subcommands().front()->get_name());
    if (!args.group.empty()) cfg.group = args.group;
    if (!args.preset.empty()) {
        cfg.preset = args.preset;
        cfg.diagonals.clear();
    }
    if (!args.radii.empty()) cfg.radii = args.radii;
    if (!args.window_kind.empty()) {
        if (args.window_kind != "box" && args.window_kind != "ball") {
            std::cerr << "validation error: window kind must be box or ball\n";
            return cdops::kExitValidationError;
        }
        cfg.window_kind = args.window_kind == "box" ? cdops::WindowKind::Box
                                                    : cdops::WindowKind::WordBall;
        cfg.window_kind_set = true;
    }
    if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
    if (args.seed_set) cfg.seed = args.seed;
    if (args.tol > 0.0) cfg.tol = args.tol;
    if (args.trials >= 0) cfg.trials = args.trials;
    if (args.n_max > 0) cfg.n_max = args.n_max;
    if (!args.eps.empty()) cfg.eps = args.eps;

    try {
        cdops::validate_config(cfg);
    } catch (const cdops::ConfigValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return cdops::kExitValidationError;
    }

    cdops::RunResult res = cdops::run_experiment(cfg);
    std::cout << cdops::experiment_name(cfg.kind) << ": " << res.summary << "\n";
    if (res.exit_code != cdops::kExitOk) {
        std::cerr << "failed with exit code " << res.exit_code << "\n";
    }
    return res.exit_code;
}
