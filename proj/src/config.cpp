#include "intermap/config.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>

namespace intermap {

std::string experiment_name(ExperimentKind kind) {
    switch (kind) {
    case ExperimentKind::Scaling: return "scaling";
    case ExperimentKind::Distortion: return "distortion";
    case ExperimentKind::Correlation: return "correlation";
    case ExperimentKind::LimitLaw: return "limit_law";
    case ExperimentKind::LargeDev: return "large_dev";
    case ExperimentKind::Recurrence: return "recurrence";
    case ExperimentKind::Visits: return "visits";
    case ExperimentKind::Evl: return "evl";
    case ExperimentKind::Density: return "density";
    default: return "all";
    }
}

namespace {

std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) {
        if (!s.empty()) s += "; ";
        s += x;
    }
    return s;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::optional<ExperimentKind> parse_experiment(const std::string& s) {
    static const std::map<std::string, ExperimentKind> names = {
        {"scaling", ExperimentKind::Scaling},
        {"distortion", ExperimentKind::Distortion},
        {"correlation", ExperimentKind::Correlation},
        {"limit_law", ExperimentKind::LimitLaw},
        {"large_dev", ExperimentKind::LargeDev},
        {"recurrence", ExperimentKind::Recurrence},
        {"visits", ExperimentKind::Visits},
        {"evl", ExperimentKind::Evl},
        {"density", ExperimentKind::Density},
        {"all", ExperimentKind::All},
    };
    auto it = names.find(s);
    if (it == names.end()) return std::nullopt;
    return it->second;
}

} // namespace

long default_samples(ExperimentKind kind) {
    switch (kind) {
    case ExperimentKind::Correlation: return 1000000;
    case ExperimentKind::LimitLaw: return 20000;
    case ExperimentKind::LargeDev: return 1000000;
    case ExperimentKind::Recurrence: return 20000;
    case ExperimentKind::Visits: return 20000;
    case ExperimentKind::Evl: return 2000;
    case ExperimentKind::Density: return 10000000;
    default: return 100000;
    }
}

ConfigError::ConfigError(std::vector<std::string> v)
    : std::runtime_error("invalid config: " + join(v)), violations(std::move(v)) {}

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    cfg.raw_text = text;
    std::vector<std::string> bad;
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            bad.push_back("line " + std::to_string(lineno) + ": expected key = value");
            continue;
        }
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty()) {
            bad.push_back("line " + std::to_string(lineno) + ": empty key or value");
            continue;
        }
        if (kv.count(key)) bad.push_back("duplicate key '" + key + "'");
        kv[key] = val;
    }

    static const std::vector<std::string> known = {
        "experiment", "map.kind", "map.gamma", "map.kappa", "seed", "workers",
        "N",          "samples",  "n_max",     "n",         "r",    "eps",
        "bins",       "cells",    "out",
    };
    for (const auto& [k, v] : kv)
        if (std::find(known.begin(), known.end(), k) == known.end())
            bad.push_back("unknown key '" + k + "'");

    auto get = [&](const std::string& k) -> std::optional<std::string> {
        auto it = kv.find(k);
        if (it == kv.end()) return std::nullopt;
        return it->second;
    };
    auto get_num = [&](const std::string& k, double lo, auto setter) {
        auto v = get(k);
        if (!v) return;
        try {
            std::size_t pos = 0;
            double x = std::stod(*v, &pos);
            if (pos != v->size()) throw std::invalid_argument("trailing characters");
            if (!(x > lo)) {
                bad.push_back("'" + k + "' must be > " + std::to_string(lo));
                return;
            }
            setter(x);
        } catch (const std::exception&) {
            bad.push_back("'" + k + "' is not a number: " + *v);
        }
    };

    if (auto v = get("experiment")) {
        if (auto e = parse_experiment(*v))
            cfg.experiment = *e;
        else
            bad.push_back("unknown experiment '" + *v + "'");
    } else {
        bad.push_back("missing required key 'experiment'");
    }

    auto kind = get("map.kind");
    if (!kind) bad.push_back("missing required key 'map.kind'");
    double gamma = 0, kappa = 0;
    bool have_gamma = false, have_kappa = false;
    get_num("map.gamma", -1e300, [&](double x) { gamma = x; have_gamma = true; });
    get_num("map.kappa", -1e300, [&](double x) { kappa = x; have_kappa = true; });
    if (!get("map.gamma")) bad.push_back("missing required key 'map.gamma'");
    if (kind && *kind != "circle" && *kind != "interval")
        bad.push_back("map.kind must be 'circle' or 'interval'");
    if (have_gamma && !(gamma > 1.0)) bad.push_back("gamma must be > 1");
    if (kind && *kind == "interval") {
        if (!get("map.kappa"))
            bad.push_back("interval map requires 'map.kappa'");
        else if (have_kappa && !(kappa > 0.0 && kappa < 1.0))
            bad.push_back("kappa must be in (0,1)");
    }
    if (kind && *kind == "circle" && get("map.kappa"))
        bad.push_back("'map.kappa' is only valid for the interval map");

    get_num("seed", -1.0, [&](double x) { cfg.seed = static_cast<std::uint64_t>(x); });
    get_num("workers", 0.0, [&](double x) { cfg.workers = static_cast<unsigned>(x); });
    get_num("N", 0.0, [&](double x) { cfg.N = static_cast<long>(x); });
    get_num("samples", 0.0, [&](double x) {
        cfg.samples = static_cast<long>(x);
        cfg.samples_explicit = true;
    });
    get_num("n_max", 0.0, [&](double x) { cfg.n_max = static_cast<long>(x); });
    get_num("n", 0.0, [&](double x) { cfg.n = static_cast<long>(x); });
    get_num("r", 0.0, [&](double x) { cfg.r = x; });
    get_num("eps", 0.0, [&](double x) { cfg.eps = x; });
    get_num("bins", 0.0, [&](double x) { cfg.bins = static_cast<int>(x); });
    get_num("cells", 0.0, [&](double x) { cfg.cells = static_cast<int>(x); });
    if (auto v = get("out")) cfg.out = *v;

    bool density_like =
        cfg.experiment == ExperimentKind::Density || cfg.experiment == ExperimentKind::All;
    if (density_like && kind && *kind == "circle" && get("experiment") &&
        cfg.experiment == ExperimentKind::Density)
        bad.push_back("density requires interval map");

    if (bad.empty() && kind) {
        try {
            cfg.map = (*kind == "circle") ? MapSpec::circle(gamma)
                                          : MapSpec::interval(kappa, gamma);
        } catch (const std::invalid_argument& e) {
            bad.push_back(e.what());
        }
    }
    if (!bad.empty()) throw ConfigError(std::move(bad));
    if (cfg.samples == 0) cfg.samples = default_samples(cfg.experiment);
    return cfg;
}

} // namespace intermap
