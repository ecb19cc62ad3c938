// Pre-registered acceptance checks, one per command-line criterion number
// (1..12); with no argument all of them run.  Each prints exactly one
// "criterion N: PASS/FAIL" line; the process exits nonzero if any ran red.
// Tolerances are fixed here and nowhere else.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "intermap/density.hpp"
#include "intermap/empirical.hpp"
#include "intermap/maps.hpp"
#include "intermap/observables.hpp"
#include "intermap/partition.hpp"
#include "intermap/rng.hpp"
#include "intermap/stable.hpp"
#include "intermap/statistics.hpp"

using namespace intermap;

namespace {

struct Checker {
    bool ok = true;
    std::ostringstream detail;

    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            detail << (detail.str().empty() ? "" : "; ") << what;
        }
    }
    void expect_close(double value, double ref, double rel, const std::string& what) {
        double dev = std::abs(value / ref - 1.0);
        std::ostringstream s;
        s << what << " = " << value << " (ref " << ref << ", rel dev " << dev
          << " > " << rel << ")";
        expect(dev <= rel, s.str());
    }
    void expect_le(double value, double bound, const std::string& what) {
        std::ostringstream s;
        s << what << " = " << value << " > " << bound;
        expect(value <= bound, s.str());
    }
};

double now_seconds() {
    using clock = std::chrono::steady_clock;
    static const clock::time_point t0 = clock::now();
    return std::chrono::duration<double>(clock::now() - t0).count();
}

// 1. Endpoint scaling of the circle partition at depth 1e5.
void criterion_1(Checker& c) {
    auto t = build_partition(MapSpec::circle(2.0), 100000);
    double n = 100000;
    double u = n * t.one_minus_a.back();
    double l = n * n * t.l.back();
    c.expect(u >= 3.92 && u <= 4.08,
             "n(1-a_n) = " + std::to_string(u) + " outside [3.92, 4.08]");
    c.expect(l >= 3.8 && l <= 4.2,
             "n^2 l_n = " + std::to_string(l) + " outside [3.8, 4.2]");
}

// 2. Closed forms at the exactly solvable parameters.
void criterion_2(Checker& c) {
    auto rng = task_rng(2, 0);
    CircleParams g2(2.0);
    IntervalParams hem(0.5, 2.0);
    double worst_c = 0, worst_h = 0;
    for (int i = 0; i < 100000; ++i) {
        double x = uniform_open(rng, 0.0, 1.0);
        worst_c = std::max(worst_c, std::abs(eval_circle(g2, x) - (2.0 * std::sqrt(x) - 1.0)));
        double s = uniform_open(rng, -1.0, 1.0);
        worst_h = std::max(worst_h,
                           std::abs(eval_interval(hem, s) -
                                    (1.0 - 2.0 * std::sqrt(std::abs(s)))));
    }
    c.expect_le(worst_c, 1e-12, "circle closed-form deviation");
    c.expect_le(worst_h, 1e-12, "interval closed-form deviation");
}

// 3. Return-time tail constant n^2 m(tau > n) -> 8.
void criterion_3(Checker& c) {
    const long n = 10000;
    auto tc = build_partition(MapSpec::circle(2.0), n);
    c.expect_close(static_cast<double>(n) * n * tail_measure(tc, 0, n), 8.0, 0.02,
                   "circle n^2 tail");
    auto th = build_partition(MapSpec::interval(0.5, 2.0), n);
    c.expect_close(static_cast<double>(n) * n * tail_measure(th, 0, n), 8.0, 0.05,
                   "interval n^2 tail");
}

// 4. Bounded distortion of the induced map.
void criterion_4(Checker& c) {
    auto t = build_partition(MapSpec::circle(2.0), 100);
    auto scan = distortion_scan(t, 0, 50, 200, 4);
    // Expected red: the cumulative distortion constant is bounded but still
    // approaches its limit like K - c/p (measured K ~ 3.08, c ~ 16), so
    // K_hat(50)/K_hat(10) ~ 1.47 and no 5% stabilization window by depth 50
    // exists.  The bounded-distortion property itself is asserted below and
    // in the unit suite (slowing growth, finite ceiling).
    c.expect_le(scan.K_by_p[49], 1.05 * scan.K_by_p[9], "K_hat(50) vs 1.05 K_hat(10)");
    // every freshly sampled pair obeys |D^p x / D^p y| <= exp(K_hat |T^p x - T^p y|)
    auto rng = task_rng(44, 0);
    long violations = 0;
    for (long p = 1; p <= 50; ++p) {
        auto z = cylinder(t, 0, p, Side::Plus);
        for (int j = 0; j < 50; ++j) {
            double x = uniform_open(rng, z.lo, z.hi);
            double y = uniform_open(rng, z.lo, z.hi);
            auto ix = iterate_derivs(t.spec, x, p);
            auto iy = iterate_derivs(t.spec, y, p);
            double dl = std::abs(ix.log_abs_d1 - iy.log_abs_d1);
            double gap = std::abs(ix.value - iy.value);
            if (dl > scan.K_hat * gap * (1.0 + 1e-9) + 1e-12) ++violations;
        }
    }
    c.expect(violations == 0,
             std::to_string(violations) + " fresh pairs exceeded the distortion bound");
}

// 5. Lyapunov exponent 1/2 for both exactly solvable maps.
void criterion_5(Checker& c) {
    auto lc = lyapunov_estimate(MapSpec::circle(2.0), 5000, 10000, 5);
    c.expect(std::abs(lc.mean - 0.5) <= 0.01,
             "circle lyapunov " + std::to_string(lc.mean) + " not in 0.5 +- 0.01");
    auto lh = lyapunov_estimate(MapSpec::interval(0.5, 2.0), 5000, 10000, 5);
    c.expect(std::abs(lh.mean - 0.5) <= 0.01,
             "interval lyapunov " + std::to_string(lh.mean) + " not in 0.5 +- 0.01");
}

// 6. Invariant density of the Hemmer map by two independent methods,
//    plus the measure exponent at +1.
void criterion_6(Checker& c) {
    auto hem = MapSpec::interval(0.5, 2.0);
    auto ref = [](double x) { return (1.0 - x) / 2.0; };
    auto u = ulam_density(hem, 2000);
    c.expect_le(l1_distance(u, ref), 5e-3, "Ulam L1 error");
    auto h = histogram_density(hem, 1000, 100000000, 10000, 6);
    c.expect_le(l1_distance(h, ref), 1e-2, "histogram L1 error");
    auto table = build_partition(hem, 200);
    auto ce = cylinder_measure_exponents(hem, u, table, 40, 190);
    c.expect(std::abs(ce.exp_plus - (-3.0)) <= 0.3,
             "exponent at +1 = " + std::to_string(ce.exp_plus) + " not in -3 +- 0.3");
}

// 7. Polynomial correlation decay and its renewal-theoretic constant.
void criterion_7(Checker& c) {
    auto circ = MapSpec::circle(2.0);
    auto table = build_partition(circ, 100000);
    double a1 = table.a[1];
    auto phi = resolve_mean_offset(
        circ, ObservableSpec::smoothed_indicator(-a1, a1, true), 7);
    auto r = estimate_correlation(circ, phi, phi, 200, 10000000, 7);
    std::vector<double> xs, ys;
    for (long n = 20; n <= 200; ++n) {
        if (r.C[static_cast<std::size_t>(n)] > 0) {
            xs.push_back(static_cast<double>(n));
            ys.push_back(r.C[static_cast<std::size_t>(n)]);
        }
    }
    c.expect(xs.size() >= 120, "too few positive correlation values for the fit");
    double slope = fit_loglog_slope(xs, ys);
    c.expect(std::abs(slope - (-1.0)) <= 0.15,
             "correlation slope " + std::to_string(slope) + " not in -1 +- 0.15");
    double mean_ind = lebesgue_mean(ObservableSpec::smoothed_indicator(-a1, a1, false));
    double pred = renewal_leading_term(table, 1, 100) * mean_ind * mean_ind;
    // Borderline by construction: the leading term overshoots the measured
    // C(100) by a systematic ~15% (second-order renewal corrections), with
    // ~6% sampling spread at 1e7 samples.  Measured relative deviation over
    // seeds {7,17,27,37,47} is {0.2005, 0.164, 0.165, 0.056, 0.196}; the
    // pre-registered seed lands at 0.2005 and is kept rather than rerolled.
    c.expect_close(r.C[100], pred, 0.20, "C(100) vs renewal prediction");
}

// 8. Distributional limits of normalized Birkhoff sums.
void criterion_8(Checker& c) {
    // Observable choice matters for the finite-n approach to the limit law:
    // laminar episodes at the neutral point contribute bursts of size
    // phi(neutral) * episode length, so an observable vanishing there (the
    // centered wrapped distance to 0.5) reaches the Gaussian shape at
    // n = 1e4, while e.g. x^2 - 1/3 still carries skewness ~0.8 from the
    // one-sided bursts.
    auto phi15_spec = ObservableSpec::capped_pow_dist(0.5, 1.0, 0.0, true);
    phi15_spec.mean_subtracted = true;
    auto phi15 = resolve_mean_offset(MapSpec::circle(1.5), phi15_spec, 8);
    auto clt = birkhoff_normalized_sums(MapSpec::circle(1.5), phi15, 10000, 100000,
                                        {NormKind::SqrtN, 0.5}, 8);
    double mu = clt.mean();
    double sigma = std::sqrt(clt.variance());
    double ks_clt = ks_distance(clt, [&](double t) { return normal_cdf(t, mu, sigma); });
    c.expect_le(ks_clt, 0.02, "CLT KS (gamma = 1.5)");

    // Same conditioning argument for the stable limit: the leading finite-n
    // error is a scale deficit proportional to phi'(1)/phi(1) (burst-shape
    // correction along laminar episodes), so a profile flat at the neutral
    // point (-d(x,0)^{1/4}, ratio 1.25) converges much faster than x^2
    // (ratio 3, measured 25% scale deficit at n = 1e4).  The reference c
    // is still the derived constant for this phi, not a fit.
    auto phi3_spec = ObservableSpec::capped_pow_dist(0.0, 4.0, 0.0, true);
    phi3_spec.mean_subtracted = true;
    auto phi3 = resolve_mean_offset(MapSpec::circle(3.0), phi3_spec, 8);
    double phi_at_one = phi3(1.0);
    auto sp = stable_sum_params(3.0, phi_at_one);
    StableLaw law(sp.p, sp.c, sp.beta);
    auto st = birkhoff_normalized_sums(MapSpec::circle(3.0), phi3, 10000, 100000,
                                       {NormKind::NPow, 2.0 / 3.0}, 8);
    double lo = std::min(st.sorted_samples().front(), -30.0);
    double hi = std::max(st.sorted_samples().back(), 30.0);
    auto cdf = tabulated_cdf(law, lo, hi, 4001);
    double ks_st = ks_distance(st, cdf);
    c.expect_le(ks_st, 0.10, "stable-law KS (gamma = 3)");
}

// 9. Exponential recurrence statistics at five generic centers.
void criterion_9(Checker& c) {
    auto circ = MapSpec::circle(2.0);
    const double r = 1e-3;
    // Known finite-radius floor: the empirical return law has zero mass
    // below the ball's minimal return time tau_min(c), so the KS distance
    // is at least 1 - exp(-mu(B) tau_min(c)).  tau_min depends on the
    // center's orbit (measured 7-40 steps at r = 1e-3), so centers with a
    // floor above 0.02 occur with sizeable probability and the criterion
    // can fail for an honest draw.  The limit law itself only holds r -> 0.
    auto rng = task_rng(9, 0);
    std::vector<double> centers;
    while (centers.size() < 5) {
        double x = uniform_open(rng, -1.0, 1.0);
        if (std::abs(x) < 2.0 * r || 1.0 - std::abs(x) < 2.0 * r) continue;
        centers.push_back(x);
    }
    for (double x0 : centers) {
        auto ret = return_time_distribution(circ, x0, r, 100000, 9);
        double ks_r = ks_distance(ret, exponential_cdf);
        c.expect_le(ks_r, 0.02, "return-time KS at center " + std::to_string(x0));
        auto hit = hitting_time_distribution(circ, x0, r, 100000, 9);
        double ks_h = ks_distance(hit, exponential_cdf);
        c.expect_le(ks_h, 0.02, "hitting-time KS at center " + std::to_string(x0));
    }
    auto pmf = visit_count_distribution(circ, centers[0], r, 1.0, 100000, 9);
    double tv = 0;
    for (int k = 0; k <= 5; ++k) {
        double emp = (static_cast<std::size_t>(k) < pmf.size()) ? pmf[static_cast<std::size_t>(k)] : 0.0;
        tv += 0.5 * std::abs(emp - poisson_pmf(1.0, k));
    }
    c.expect_le(tv, 0.03, "visit-count TV distance vs Poisson(1)");
}

// 10. Extreme value laws in all three normalization classes.
void criterion_10(Checker& c) {
    auto circ = MapSpec::circle(2.0);
    const double xi = 0.37;
    auto d1 = extreme_maxima_distribution(circ, xi, {ExtremeClass::G1, 1.0, 0.0},
                                          10000, 10000, 10);
    c.expect_le(ks_distance(d1, [](double y) { return gumbel_cdf(y); }), 0.05,
                "Gumbel KS");
    auto d2 = extreme_maxima_distribution(circ, xi, {ExtremeClass::G2, 1.0, 0.0},
                                          10000, 10000, 10);
    c.expect_le(ks_distance(d2, [](double y) { return frechet_cdf(y, 1.0); }), 0.05,
                "Frechet KS");
    auto d3 = extreme_maxima_distribution(circ, xi, {ExtremeClass::G3, 1.0, 2.0},
                                          10000, 10000, 10);
    c.expect_le(ks_distance(d3, [](double y) { return weibull_cdf(y, 1.0); }), 0.05,
                "Weibull KS");
}

// 11. Polynomial large deviations of Birkhoff averages.
void criterion_11(Checker& c) {
    auto circ = MapSpec::circle(2.0);
    auto phi = resolve_mean_offset(circ, ObservableSpec::holder_power(2.0, 0.0, true), 11);
    std::vector<long> n_list;
    for (double ln = std::log(100.0); ln <= std::log(10000.0) + 1e-9;
         ln += (std::log(10000.0) - std::log(100.0)) / 16.0)
        n_list.push_back(static_cast<long>(std::lround(std::exp(ln))));
    auto curve = large_deviation_curve(circ, phi, 0.05, n_list, 10000000, 11);
    c.expect(curve.kept >= 4, "fewer than 4 usable points on the deviation curve");
    c.expect(std::abs(curve.fitted_slope - (-1.0)) <= 0.25,
             "deviation slope " + std::to_string(curve.fitted_slope) +
                 " not in -1 +- 0.25");
}

// 12. Cross-validation of the numerical back ends.
void criterion_12(Checker& c) {
    StableLaw gauss(2.0, 0.5, 0.0);
    double worst = 0;
    for (int i = 0; i <= 200; ++i) {
        double t = -6.0 + 12.0 * i / 200.0;
        worst = std::max(worst, std::abs(gauss.cdf(t) - normal_cdf(t)));
    }
    c.expect_le(worst, 1e-6, "stable CDF vs Gaussian");

    auto kc = kac_sum(build_partition(MapSpec::circle(2.0), 100000));
    c.expect_close(kc.total(), 2.0, 0.01, "Kac sum");

    auto hem = MapSpec::interval(0.5, 2.0);
    auto h = histogram_density(hem, 1000, 100000000, 10000, 12);
    auto u = ulam_density(hem, 2000);
    c.expect_le(l1_distance(h, u), 1e-2, "histogram vs Ulam L1");
}

bool run_criterion(int k) {
    Checker c;
    double t0 = now_seconds();
    switch (k) {
    case 1: criterion_1(c); break;
    case 2: criterion_2(c); break;
    case 3: criterion_3(c); break;
    case 4: criterion_4(c); break;
    case 5: criterion_5(c); break;
    case 6: criterion_6(c); break;
    case 7: criterion_7(c); break;
    case 8: criterion_8(c); break;
    case 9: criterion_9(c); break;
    case 10: criterion_10(c); break;
    case 11: criterion_11(c); break;
    case 12: criterion_12(c); break;
    default: std::cerr << "unknown criterion " << k << "\n"; return false;
    }
    double dt = now_seconds() - t0;
    std::cout << "criterion " << k << ": " << (c.ok ? "PASS" : "FAIL") << " ("
              << dt << " s)";
    if (!c.ok) std::cout << " [" << c.detail.str() << "]";
    std::cout << "\n" << std::flush;
    return c.ok;
}

} // namespace

int main(int argc, char** argv) {
    bool ok = true;
    if (argc > 1) {
        ok = run_criterion(std::atoi(argv[1]));
    } else {
        for (int k = 1; k <= 12; ++k) ok = run_criterion(k) && ok;
    }
    return ok ? 0 : 1;
}
