#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "intermap/maps.hpp"

namespace intermap {

enum class ExperimentKind {
    Scaling,
    Distortion,
    Correlation,
    LimitLaw,
    LargeDev,
    Recurrence,
    Visits,
    Evl,
    Density,
    All,
};

std::string experiment_name(ExperimentKind kind);

/// Sample-count default applied when the config does not set one.
long default_samples(ExperimentKind kind);

struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::Scaling;
    MapSpec map = MapSpec::circle(2.0);
    std::uint64_t seed = 1;
    unsigned workers = 1;
    long N = 100000;       // partition depth
    long samples = 0;      // 0 -> experiment-specific default
    bool samples_explicit = false;
    long n_max = 200;      // correlation lag range
    long n = 10000;        // Birkhoff-sum / block length
    double r = 1e-3;       // recurrence ball radius
    double eps = 0.05;     // large-deviation threshold
    int bins = 1000;       // histogram bins
    int cells = 1000;      // Ulam cells
    std::string out;       // output directory; empty -> env var / cwd
    std::string raw_text;  // verbatim config, hashed into every report
};

/// All violations are collected before failing; what() joins them.
struct ConfigError : std::runtime_error {
    std::vector<std::string> violations;
    explicit ConfigError(std::vector<std::string> v);
};

/// Flat key = value lines; '#' starts a comment; map parameters use
/// dotted keys (map.kind, map.gamma, map.kappa).
ExperimentConfig parse_config(const std::string& text);

} // namespace intermap
