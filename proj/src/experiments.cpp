#include "intermap/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "intermap/density.hpp"
#include "intermap/observables.hpp"
#include "intermap/partition.hpp"
#include "intermap/rng.hpp"
#include "intermap/stable.hpp"
#include "intermap/statistics.hpp"

namespace intermap {

namespace {

std::string map_params(const MapSpec& spec) {
    std::ostringstream s;
    s << std::setprecision(10);
    if (spec.kind == MapKind::Circle)
        s << "kind=circle gamma=" << spec.circle_params().gamma;
    else
        s << "kind=interval kappa=" << spec.interval_params().kappa
          << " gamma=" << spec.interval_params().gamma;
    return s.str();
}

ReportRow make_row(const ExperimentConfig& cfg, const std::string& metric, double value,
                   double tolerance, double reference, bool pass) {
    ReportRow r;
    r.experiment = experiment_name(cfg.experiment);
    r.metric = metric;
    r.params = map_params(cfg.map);
    r.value = value;
    r.tolerance = tolerance;
    r.reference = reference;
    r.pass = pass;
    return r;
}

// pass iff |value/reference - 1| <= rel
ReportRow rel_row(const ExperimentConfig& cfg, const std::string& metric, double value,
                  double reference, double rel) {
    bool ok = std::isfinite(value) && reference != 0 &&
              std::abs(value / reference - 1.0) <= rel;
    return make_row(cfg, metric, value, rel, reference, ok);
}

// pass iff |value - reference| <= tol
ReportRow abs_row(const ExperimentConfig& cfg, const std::string& metric, double value,
                  double reference, double tol) {
    bool ok = std::isfinite(value) && std::abs(value - reference) <= tol;
    return make_row(cfg, metric, value, tol, reference, ok);
}

// pass iff value <= bound
ReportRow bound_row(const ExperimentConfig& cfg, const std::string& metric, double value,
                    double bound) {
    bool ok = std::isfinite(value) && value <= bound;
    return make_row(cfg, metric, value, bound, std::nan(""), ok);
}

std::ofstream open_csv(const std::string& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    auto path = (std::filesystem::path(dir) / name).string();
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << std::setprecision(17);
    return out;
}

// Centers are drawn with |c| in [0.1, 0.8].  The exponential limit holds
// for a.e. center as r -> 0, but at fixed r the deviation blows up toward
// the neutral point (measured KS at r = 1e-3: 0.05 at |c| = 0.9, 0.67 at
// 0.95), so the window keeps the reported statistics interpretable.  A
// smaller center-specific floor 1 - exp(-mu(B) tau_min) from the ball's
// minimal return time remains even inside the window.
double pick_generic_center(std::mt19937_64& rng, double r) {
    for (int i = 0; i < 10000; ++i) {
        double c = uniform_open(rng, 0.1, 0.8);
        if ((rng() & 1u) != 0) c = -c;
        try {
            require_generic_center(c, r);
            return c;
        } catch (const std::invalid_argument&) {
        }
    }
    throw std::runtime_error("no generic center found for radius " + std::to_string(r));
}

std::vector<long> log_spaced(long lo, long hi, int points) {
    std::vector<long> out;
    for (int i = 0; i < points; ++i) {
        double t = static_cast<double>(i) / (points - 1);
        auto n = static_cast<long>(std::lround(
            std::exp(std::log(static_cast<double>(lo)) * (1 - t) +
                     std::log(static_cast<double>(hi)) * t)));
        if (out.empty() || n > out.back()) out.push_back(n);
    }
    return out;
}

std::vector<ReportRow> scaling_rows(const ExperimentConfig& cfg, const std::string& dir) {
    auto table = build_partition(cfg.map, cfg.N);
    std::filesystem::create_directories(dir);
    export_partition_csv(table,
                         (std::filesystem::path(dir) / "scaling_partition.csv").string());
    auto sc = scaling_constants(table);
    std::vector<ReportRow> rows;
    rows.push_back(rel_row(cfg, "endpoint_gap_scaled", sc.u_scaled, sc.u_pred, 0.02));
    rows.push_back(rel_row(cfg, "cell_length_scaled", sc.l_scaled, sc.l_pred, 0.05));
    rows.push_back(rel_row(cfg, "preimage_scaled", sc.b_scaled, sc.b_pred, 0.05));
    const long nt = std::min<long>(cfg.N, 10000);
    const double e = tail_exponent(cfg.map);
    double tail_scaled = std::pow(static_cast<double>(nt), e) * tail_measure(table, 0, nt);
    double tail_tol = (cfg.map.kind == MapKind::Circle) ? 0.02 : 0.05;
    rows.push_back(rel_row(cfg, "tail_scaled", tail_scaled, 2.0 * sc.b_pred, tail_tol));
    if (cfg.map.kind == MapKind::Circle) {
        auto k = kac_sum(table);
        rows.push_back(rel_row(cfg, "kac_total_length", k.total(), 2.0, 0.01));
    }
    return rows;
}

std::vector<ReportRow> distortion_rows(const ExperimentConfig& cfg, const std::string& dir) {
    auto table = build_partition(cfg.map, std::max<long>(cfg.N, 60));
    auto scan = distortion_scan(table, 0, 50, 200, cfg.seed);
    auto csv = open_csv(dir, "distortion_khat.csv");
    csv << "p,khat_cumulative\n";
    for (std::size_t i = 0; i < scan.K_by_p.size(); ++i)
        csv << (i + 1) << "," << scan.K_by_p[i] << "\n";
    std::vector<ReportRow> rows;
    rows.push_back(
        bound_row(cfg, "khat_p50_over_p10", scan.K_by_p[49] / scan.K_by_p[9], 1.05));
    rows.push_back(make_row(cfg, "khat", scan.K_hat, 0, std::nan(""),
                            std::isfinite(scan.K_hat) && scan.K_hat > 0));
    auto vc = variation_check(table, 0, 30);
    rows.push_back(
        bound_row(cfg, "variation_increment_p30_over_p10", vc.increments[29] / vc.increments[9],
                  1.0));
    return rows;
}

std::vector<ReportRow> correlation_rows(const ExperimentConfig& cfg, const std::string& dir) {
    auto table = build_partition(cfg.map, std::max<long>(cfg.N, 10000));
    const double a1 = table.a[1];
    auto phi = ObservableSpec::smoothed_indicator(-a1, a1, false);
    auto cr = estimate_correlation(cfg.map, phi, phi, cfg.n_max, cfg.samples, cfg.seed,
                                   cfg.workers);
    auto csv = open_csv(dir, "correlation.csv");
    csv << "lag,C,stderr\n";
    for (std::size_t i = 0; i < cr.C.size(); ++i)
        csv << i << "," << cr.C[i] << "," << cr.stderr_[i] << "\n";
    std::vector<ReportRow> rows;
    rows.push_back(make_row(cfg, "corr_variance_nonneg", cr.C[0], 0, 0, cr.C[0] >= 0));
    const long lo = 20, hi = std::min<long>(200, cfg.n_max);
    if (hi > lo) {
        std::vector<double> xs, ys;
        for (long n = lo; n <= hi; ++n)
            if (cr.C[static_cast<std::size_t>(n)] > 0) {
                xs.push_back(static_cast<double>(n));
                ys.push_back(cr.C[static_cast<std::size_t>(n)]);
            }
        double zeta = large_deviation_exponent(cfg.map); // decay rate 1/(g-1) analogue
        double slope = (xs.size() >= 2) ? fit_loglog_slope(xs, ys) : std::nan("");
        rows.push_back(abs_row(cfg, "corr_decay_slope", slope, -zeta, 0.15));
    }
    if (cfg.n_max >= 100) {
        double pred = renewal_leading_term(table, 1, 100) * cr.mean_phi * cr.mean_psi;
        rows.push_back(rel_row(cfg, "corr_renewal_match_n100", cr.C[100], pred, 0.20));
    }
    return rows;
}

std::vector<ReportRow> limit_law_rows(const ExperimentConfig& cfg, const std::string& dir) {
    std::vector<ReportRow> rows;
    const long n = cfg.n, samples = cfg.samples;
    auto quantile_csv = [&](const EmpiricalDist& d, const std::string& name) {
        auto csv = open_csv(dir, name);
        csv << "q,quantile\n";
        for (int q = 1; q <= 99; ++q) csv << 0.01 * q << "," << d.quantile(0.01 * q) << "\n";
    };
    double g = (cfg.map.kind == MapKind::Circle) ? cfg.map.circle_params().gamma : 0.0;
    if (cfg.map.kind == MapKind::Circle && g > 2.0) {
        // Flat profile at the neutral point: the finite-n error of the
        // stable limit is a scale deficit proportional to phi'(1)/phi(1)
        // (burst-shape correction), so -d(x,0)^{1/4} reaches the limit
        // shape at n = 1e4 where x^2 - 1/3 still shows ~25% deficit.
        auto phi = ObservableSpec::capped_pow_dist(0.0, 4.0, 0.0, true);
        phi.mean_subtracted = true;
        auto obs = resolve_mean_offset(cfg.map, phi, splitmix64(cfg.seed));
        auto par = stable_sum_params(g, obs(1.0));
        Normalization norm{NormKind::NPow, (g - 1.0) / g};
        auto d = birkhoff_normalized_sums(cfg.map, phi, n, samples, norm, cfg.seed,
                                          cfg.workers);
        quantile_csv(d, "limit_law_stable.csv");
        StableLaw law(par.p, par.c, par.beta);
        double lo = std::min(d.sorted_samples().front(), -30.0);
        double hi = std::max(d.sorted_samples().back(), 30.0);
        double ks = ks_distance(d, tabulated_cdf(law, lo, hi, 4001));
        rows.push_back(bound_row(cfg, "stable_ks", ks, 0.10));
    } else {
        // CLT regime (or no closed-form reference): Gaussian shape test.
        // The centered distance to 0.5 vanishes at the neutral point (with
        // the wrapped metric on the circle), so laminar episodes do not
        // inflate the finite-n skewness.
        auto phi = ObservableSpec::capped_pow_dist(0.5, 1.0, 0.0,
                                                   cfg.map.kind == MapKind::Circle);
        phi.mean_subtracted = true;
        Normalization norm{NormKind::SqrtN, 0.5};
        double tol = 0.02;
        if (cfg.map.kind == MapKind::Circle && g == 2.0) {
            norm = Normalization{NormKind::SqrtNLogN, 0.5};
            tol = 0.10; // boundary case, slow convergence
        }
        if (cfg.map.kind == MapKind::Interval) tol = 0.10;
        auto d = birkhoff_normalized_sums(cfg.map, phi, n, samples, norm, cfg.seed,
                                          cfg.workers);
        quantile_csv(d, "limit_law_gaussian.csv");
        double mu = d.mean(), sigma = std::sqrt(d.variance());
        double ks = ks_distance(d, [&](double t) { return normal_cdf(t, mu, sigma); });
        rows.push_back(bound_row(cfg, "clt_ks_fitted_gaussian", ks, tol));
    }
    return rows;
}

std::vector<ReportRow> large_dev_rows(const ExperimentConfig& cfg, const std::string& dir) {
    auto phi = ObservableSpec::holder_power(2.0, 0.0, true);
    auto n_list = log_spaced(100, 10000, 17);
    auto curve = large_deviation_curve(cfg.map, phi, cfg.eps, n_list, cfg.samples, cfg.seed,
                                       cfg.workers);
    auto csv = open_csv(dir, "large_dev.csv");
    csv << "n,prob,dropped\n";
    for (std::size_t i = 0; i < curve.n.size(); ++i)
        csv << curve.n[i] << "," << curve.prob[i] << ","
            << (curve.dropped[i] ? "true" : "false") << "\n";
    std::vector<ReportRow> rows;
    double zeta = large_deviation_exponent(cfg.map);
    rows.push_back(abs_row(cfg, "large_dev_slope", curve.fitted_slope, -zeta, 0.25));
    rows.push_back(make_row(cfg, "large_dev_points_kept", static_cast<double>(curve.kept), 0,
                            std::nan(""), curve.kept >= 4));
    return rows;
}

std::vector<ReportRow> recurrence_rows(const ExperimentConfig& cfg, const std::string&) {
    std::vector<ReportRow> rows;
    auto rng = task_rng(cfg.seed, 0x63656e74ULL);
    const double ks_tol = (cfg.map.kind == MapKind::Circle) ? 0.02 : 0.03;
    const int centers = 5;
    double worst_duality = 0;
    for (int i = 0; i < centers; ++i) {
        double c = pick_generic_center(rng, cfg.r);
        std::uint64_t s = splitmix64(cfg.seed) + static_cast<std::uint64_t>(i);
        auto ret = return_time_distribution(cfg.map, c, cfg.r, cfg.samples, s, cfg.workers);
        auto hit = hitting_time_distribution(cfg.map, c, cfg.r, cfg.samples, s + 1000,
                                             cfg.workers);
        double ks_ret = ks_distance(ret, exponential_cdf);
        double ks_hit = ks_distance(hit, exponential_cdf);
        rows.push_back(bound_row(cfg, "return_ks_center" + std::to_string(i), ks_ret, ks_tol));
        rows.push_back(bound_row(cfg, "hitting_ks_center" + std::to_string(i), ks_hit, ks_tol));
        // duality: F_h(t) = int_0^t (1 - F_e(s)) ds
        double integral = 0;
        const double dt = 0.05;
        for (double t = dt; t <= 5.0 + 1e-12; t += dt) {
            integral += dt * (1.0 - 0.5 * (ret.cdf(t - dt) + ret.cdf(t)));
            worst_duality = std::max(worst_duality, std::abs(hit.cdf(t) - integral));
        }
    }
    rows.push_back(bound_row(cfg, "return_hitting_duality_sup", worst_duality, 0.04));
    return rows;
}

std::vector<ReportRow> visits_rows(const ExperimentConfig& cfg, const std::string& dir) {
    auto rng = task_rng(cfg.seed, 0x63656e74ULL);
    double c = pick_generic_center(rng, cfg.r);
    auto pmf = visit_count_distribution(cfg.map, c, cfg.r, 1.0, cfg.samples, cfg.seed,
                                        cfg.workers);
    auto csv = open_csv(dir, "visit_counts.csv");
    csv << "k,pmf,poisson\n";
    for (std::size_t k = 0; k < pmf.size(); ++k)
        csv << k << "," << pmf[k] << "," << poisson_pmf(1.0, static_cast<int>(k)) << "\n";
    double tv = 0;
    for (int k = 0; k <= 5; ++k) {
        double p = (static_cast<std::size_t>(k) < pmf.size()) ? pmf[static_cast<std::size_t>(k)]
                                                              : 0.0;
        tv += 0.5 * std::abs(p - poisson_pmf(1.0, k));
    }
    std::vector<ReportRow> rows;
    rows.push_back(bound_row(cfg, "visit_tv_poisson1", tv, 0.03));
    rows.push_back(abs_row(cfg, "visit_k0", pmf.empty() ? 0.0 : pmf[0], std::exp(-1.0), 0.02));
    return rows;
}

std::vector<ReportRow> evl_rows(const ExperimentConfig& cfg, const std::string&) {
    auto rng = task_rng(cfg.seed, 0x657674ULL);
    double xi = 0;
    do {
        xi = uniform_open(rng, -1.0, 1.0);
    } while (std::abs(xi) < 0.1 || 1.0 - std::abs(xi) < 0.1);
    std::vector<ReportRow> rows;
    const double alpha = 1.0, cap = 2.0;
    {
        auto d = extreme_maxima_distribution(cfg.map, xi, {ExtremeClass::G1, alpha, 0.0},
                                             cfg.n, cfg.samples, cfg.seed, cfg.workers);
        rows.push_back(bound_row(cfg, "evl_gumbel_ks", ks_distance(d, gumbel_cdf), 0.05));
    }
    {
        auto d = extreme_maxima_distribution(cfg.map, xi, {ExtremeClass::G2, alpha, 0.0},
                                             cfg.n, cfg.samples, cfg.seed, cfg.workers);
        rows.push_back(bound_row(
            cfg, "evl_frechet_ks",
            ks_distance(d, [&](double y) { return frechet_cdf(y, alpha); }), 0.05));
    }
    {
        auto d = extreme_maxima_distribution(cfg.map, xi, {ExtremeClass::G3, alpha, cap},
                                             cfg.n, cfg.samples, cfg.seed, cfg.workers);
        rows.push_back(bound_row(
            cfg, "evl_weibull_ks",
            ks_distance(d, [&](double y) { return weibull_cdf(y, alpha); }), 0.05));
    }
    return rows;
}

std::vector<ReportRow> density_rows(const ExperimentConfig& cfg, const std::string& dir) {
    auto hist = histogram_density(cfg.map, cfg.bins, cfg.samples, 1000000, cfg.seed,
                                  cfg.workers);
    auto ul = ulam_density(cfg.map, cfg.cells);
    std::filesystem::create_directories(dir);
    export_density_csv(hist, (std::filesystem::path(dir) / "density_histogram.csv").string());
    export_density_csv(ul, (std::filesystem::path(dir) / "density_ulam.csv").string());
    std::vector<ReportRow> rows;
    rows.push_back(bound_row(cfg, "ulam_residual", ul.residual, 1e-10));
    rows.push_back(bound_row(cfg, "hist_ulam_cross_l1", l1_distance(hist, ul), 0.02));
    const auto& p = cfg.map.interval_params();
    if (p.kappa == 0.5 && p.gamma == 2.0) {
        auto rho = [](double x) { return 0.5 * (1.0 - x); };
        rows.push_back(bound_row(cfg, "ulam_l1_closed_form", l1_distance(ul, rho), 5e-3));
        rows.push_back(bound_row(cfg, "hist_l1_closed_form", l1_distance(hist, rho), 0.02));
    }
    auto push = apply_transfer(cfg.map, hist);
    rows.push_back(bound_row(cfg, "transfer_fixed_point_l1", l1_distance(hist, push), 0.02));
    // the fitted slope approaches its limit like c/log(n); fit deep in the
    // table so the finite-n bias stays inside the tolerance
    auto table = build_partition(cfg.map, 200);
    auto ce = cylinder_measure_exponents(cfg.map, ul, table, 40, 190);
    rows.push_back(abs_row(cfg, "cylinder_exponent_plus1", ce.exp_plus, ce.pred_plus, 0.3));
    rows.push_back(make_row(cfg, "density_near_zero_order1", ce.density_near_zero, 0,
                            std::nan(""),
                            ce.density_near_zero > 0.1 && ce.density_near_zero < 10.0));
    return rows;
}

} // namespace

std::string resolve_out_dir(const std::string& requested) {
    if (!requested.empty()) return requested;
    if (const char* env = std::getenv("INTERMAP_LAB_OUT"); env && *env) return env;
    return ".";
}

std::vector<ReportRow> compute_rows(const ExperimentConfig& cfg, const std::string& dir) {
    switch (cfg.experiment) {
    case ExperimentKind::Scaling: return scaling_rows(cfg, dir);
    case ExperimentKind::Distortion: return distortion_rows(cfg, dir);
    case ExperimentKind::Correlation: return correlation_rows(cfg, dir);
    case ExperimentKind::LimitLaw: return limit_law_rows(cfg, dir);
    case ExperimentKind::LargeDev: return large_dev_rows(cfg, dir);
    case ExperimentKind::Recurrence: return recurrence_rows(cfg, dir);
    case ExperimentKind::Visits: return visits_rows(cfg, dir);
    case ExperimentKind::Evl: return evl_rows(cfg, dir);
    case ExperimentKind::Density: return density_rows(cfg, dir);
    case ExperimentKind::All: {
        std::vector<ReportRow> rows;
        std::vector<ExperimentKind> kinds = {
            ExperimentKind::Scaling,    ExperimentKind::Distortion,
            ExperimentKind::Correlation, ExperimentKind::LimitLaw,
            ExperimentKind::LargeDev,   ExperimentKind::Recurrence,
            ExperimentKind::Visits,     ExperimentKind::Evl,
        };
        if (cfg.map.kind == MapKind::Interval) kinds.push_back(ExperimentKind::Density);
        for (auto k : kinds) {
            ExperimentConfig sub = cfg;
            sub.experiment = k;
            if (!cfg.samples_explicit) sub.samples = default_samples(k);
            auto part = compute_rows(sub, dir);
            rows.insert(rows.end(), part.begin(), part.end());
        }
        return rows;
    }
    }
    throw std::logic_error("compute_rows: unhandled experiment");
}

int run_experiment(const ExperimentConfig& cfg) {
    const std::string dir = resolve_out_dir(cfg.out);
    std::vector<ReportRow> rows;
    try {
        rows = compute_rows(cfg, dir);
        emit_report(rows, dir, experiment_name(cfg.experiment), cfg.raw_text, cfg.seed);
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
    for (const auto& r : rows)
        std::cout << (r.pass ? "PASS " : "FAIL ") << r.experiment << "/" << r.metric << " = "
                  << r.value << "\n";
    return all_pass(rows) ? 0 : 4;
}

} // namespace intermap
