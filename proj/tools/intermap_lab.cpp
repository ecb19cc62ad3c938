// Experiment runner: intermap-lab <experiment> --config <file>
//                    [--seed S] [--workers W] [--out DIR]
// Exit codes: 0 all checks pass, 2 config error, 3 numerical failure,
//             4 some pre-registered check failed.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "intermap/config.hpp"
#include "intermap/experiments.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Statistical laboratory for intermittent circle and Lorenz-type "
                 "interval maps"};
    std::string experiment, config_path, out_dir;
    long seed = -1;
    int workers = -1;
    app.add_option("experiment", experiment,
                   "scaling | distortion | correlation | limit_law | large_dev | "
                   "recurrence | visits | evl | density | all")
        ->required();
    app.add_option("--config", config_path, "path to key = value config file")->required();
    app.add_option("--seed", seed, "override config seed");
    app.add_option("--workers", workers, "override config worker count");
    app.add_option("--out", out_dir, "output directory (default: config, then "
                                     "INTERMAP_LAB_OUT, then cwd)");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    std::ifstream in(config_path);
    if (!in) {
        std::cerr << "config error: cannot read " << config_path << "\n";
        return 2;
    }
    std::stringstream buf;
    buf << in.rdbuf();

    intermap::ExperimentConfig cfg;
    try {
        cfg = intermap::parse_config(buf.str());
    } catch (const intermap::ConfigError& e) {
        std::cerr << "config error:\n";
        for (const auto& v : e.violations) std::cerr << "  - " << v << "\n";
        return 2;
    }
    // the positional experiment wins over the config file entry
    bool matched = false;
    for (auto k : {intermap::ExperimentKind::Scaling, intermap::ExperimentKind::Distortion,
                   intermap::ExperimentKind::Correlation, intermap::ExperimentKind::LimitLaw,
                   intermap::ExperimentKind::LargeDev, intermap::ExperimentKind::Recurrence,
                   intermap::ExperimentKind::Visits, intermap::ExperimentKind::Evl,
                   intermap::ExperimentKind::Density, intermap::ExperimentKind::All}) {
        if (intermap::experiment_name(k) == experiment) {
            if (k != cfg.experiment && !cfg.samples_explicit)
                cfg.samples = intermap::default_samples(k);
            cfg.experiment = k;
            matched = true;
        }
    }
    if (!matched) {
        std::cerr << "config error: unknown experiment '" << experiment << "'\n";
        return 2;
    }
    if (cfg.experiment == intermap::ExperimentKind::Density &&
        cfg.map.kind != intermap::MapKind::Interval) {
        std::cerr << "config error: density requires interval map\n";
        return 2;
    }
    if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
    if (workers > 0) cfg.workers = static_cast<unsigned>(workers);
    if (!out_dir.empty()) cfg.out = out_dir;

    return intermap::run_experiment(cfg);
}
