#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

#include "intermap/config.hpp"
#include "intermap/report.hpp"

using namespace intermap;

namespace {
std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}
bool has_violation(const ConfigError& e, const std::string& needle) {
    return std::any_of(e.violations.begin(), e.violations.end(), [&](const std::string& v) {
        return v.find(needle) != std::string::npos;
    });
}
} // namespace

TEST_CASE("valid config parses with defaults") {
    auto cfg = parse_config("experiment = scaling\n"
                            "map.kind = circle\n"
                            "map.gamma = 2.0\n"
                            "N = 100000\n"
                            "seed = 1\n");
    CHECK(cfg.experiment == ExperimentKind::Scaling);
    CHECK(cfg.map.kind == MapKind::Circle);
    CHECK(cfg.map.circle_params().gamma == 2.0);
    CHECK(cfg.N == 100000);
    CHECK(cfg.seed == 1);
    CHECK(cfg.workers == 1);
    CHECK(cfg.samples == default_samples(ExperimentKind::Scaling));
    CHECK(!cfg.samples_explicit);
}

TEST_CASE("comments, blank lines and explicit knobs") {
    auto cfg = parse_config("# correlation run\n"
                            "experiment = correlation\n"
                            "\n"
                            "map.kind = interval   # Hemmer\n"
                            "map.kappa = 0.5\n"
                            "map.gamma = 2.0\n"
                            "samples = 12345\n"
                            "n_max = 50\n"
                            "r = 0.002\n"
                            "eps = 0.1\n"
                            "bins = 600\n"
                            "cells = 700\n"
                            "workers = 3\n"
                            "out = /tmp/somewhere\n");
    CHECK(cfg.experiment == ExperimentKind::Correlation);
    CHECK(cfg.map.kind == MapKind::Interval);
    CHECK(cfg.samples == 12345);
    CHECK(cfg.samples_explicit);
    CHECK(cfg.n_max == 50);
    CHECK(cfg.r == 0.002);
    CHECK(cfg.eps == 0.1);
    CHECK(cfg.bins == 600);
    CHECK(cfg.cells == 700);
    CHECK(cfg.workers == 3);
    CHECK(cfg.out == "/tmp/somewhere");
}

TEST_CASE("violations are collected and named") {
    try {
        parse_config("experiment = scaling\nmap.kind = circle\nmap.gamma = 1.0\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(has_violation(e, "gamma must be > 1"));
    }
    try {
        parse_config("experiment = density\nmap.kind = circle\nmap.gamma = 2.0\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(has_violation(e, "density requires interval map"));
    }
    try {
        parse_config("experiment = scaling\nmap.kind = circle\nmap.gamma = 2\nbogus = 1\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(has_violation(e, "unknown key 'bogus'"));
    }
    try {
        parse_config("map.kind = interval\nmap.gamma = 0.5\nmap.kappa = 2.0\nx=\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        // everything wrong at once: all violations reported together
        CHECK(has_violation(e, "missing required key 'experiment'"));
        CHECK(has_violation(e, "gamma must be > 1"));
        CHECK(has_violation(e, "kappa must be in (0,1)"));
        CHECK(e.violations.size() >= 4);
    }
    CHECK_THROWS_AS(parse_config("experiment = scaling\nexperiment = scaling\n"
                                 "map.kind = circle\nmap.gamma = 2\n"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config("experiment = warp\nmap.kind = circle\nmap.gamma = 2\n"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config("experiment = scaling\nmap.kind = circle\n"
                                 "map.gamma = two\n"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config("experiment = scaling\nmap.kind = circle\n"
                                 "map.gamma = 2\nmap.kappa = 0.5\n"),
                    ConfigError);
}

TEST_CASE("experiment names round-trip") {
    for (auto k : {ExperimentKind::Scaling, ExperimentKind::Distortion,
                   ExperimentKind::Correlation, ExperimentKind::LimitLaw,
                   ExperimentKind::LargeDev, ExperimentKind::Recurrence,
                   ExperimentKind::Visits, ExperimentKind::Evl, ExperimentKind::Density,
                   ExperimentKind::All}) {
        auto cfg = parse_config("experiment = " + experiment_name(k) +
                                "\nmap.kind = interval\nmap.kappa = 0.5\nmap.gamma = 2\n");
        CHECK(cfg.experiment == k);
        CHECK(cfg.samples == default_samples(k));
    }
}

TEST_CASE("report files") {
    std::vector<ReportRow> rows;
    rows.push_back({"scaling", "u_scaled", "n=100000", 4.015625, 0.08, 4.0, true});
    rows.push_back({"scaling", "l_scaled", "n=100000", 4.9, 0.2, 4.0, false});
    CHECK(!all_pass(rows));
    emit_report(rows, ".", "report_test", "experiment = scaling\n", 42);

    auto csv = slurp("report_test.csv");
    CHECK(csv.find("experiment,metric,params,value,tolerance,reference,pass,seed,"
                   "config_hash") == 0);
    CHECK(csv.find("u_scaled") != std::string::npos);
    CHECK(csv.find("l_scaled") != std::string::npos);
    // decimal point, not comma (4.015625 is exactly representable)
    CHECK(csv.find("4.015625") != std::string::npos);
    CHECK(csv.find("4,015625") == std::string::npos);

    auto json = slurp("report_test.json");
    CHECK(json.find("\"all_pass\": false") != std::string::npos);
    CHECK(json.find("\"seed\": 42") != std::string::npos);
    CHECK(json.find("\"config_hash\"") != std::string::npos);

    // byte-identical on re-emission: reports are deterministic
    emit_report(rows, ".", "report_test2", "experiment = scaling\n", 42);
    CHECK(slurp("report_test2.csv") == csv);
    CHECK(slurp("report_test2.json") == json);

    CHECK_THROWS(emit_report({}, ".", "report_empty", "x", 1));
    for (const char* f : {"report_test.csv", "report_test.json", "report_test2.csv",
                          "report_test2.json"})
        std::remove(f);
}

TEST_CASE("config hash is stable and content sensitive") {
    auto h1 = fnv1a_hash("experiment = scaling\n");
    auto h2 = fnv1a_hash("experiment = scaling\n");
    auto h3 = fnv1a_hash("experiment = distortion\n");
    CHECK(h1 == h2);
    CHECK(h1 != h3);
}
