#include "intermap/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "intermap/parallel.hpp"
#include "intermap/rng.hpp"

namespace intermap {

std::vector<double> invariant_samples(const MapSpec& spec, std::size_t count,
                                      std::uint64_t seed) {
    std::vector<double> out;
    out.reserve(count);
    auto rng = task_rng(seed, 0x73616d70ULL);
    if (spec.kind == MapKind::Circle) {
        for (std::size_t i = 0; i < count; ++i) out.push_back(uniform_open(rng, -1.0, 1.0));
        return out;
    }
    // Thinned long orbit; the invariant measure of the interval map is
    // not Lebesgue, so iid draws are not available.
    double x = uniform_open(rng, -1.0, 1.0);
    for (long k = 0; k < 1000000; ++k) x = orbit_step(spec, x);
    const int thin = 10;
    while (out.size() < count) {
        for (int k = 0; k < thin; ++k) x = orbit_step(spec, x);
        out.push_back(x);
    }
    return out;
}

namespace {

struct CorrBatch {
    std::vector<double> c;
    double mphi = 0, mpsi = 0;
};

} // namespace

CorrelationResult estimate_correlation(const MapSpec& spec, const ObservableSpec& phi_in,
                                       const ObservableSpec& psi_in, long n_max, long samples,
                                       std::uint64_t seed, unsigned workers, int batches) {
    if (n_max < 0 || samples < batches)
        throw std::invalid_argument("estimate_correlation: bad sizes");
    const ObservableSpec phi = resolve_mean_offset(spec, phi_in, splitmix64(seed));
    const ObservableSpec psi = resolve_mean_offset(spec, psi_in, splitmix64(seed) + 1);
    const long per_batch = samples / batches;
    const long L = per_batch + n_max;

    auto results = run_tasks<CorrBatch>(
        static_cast<std::size_t>(batches), workers, [&](std::size_t task) {
            auto rng = task_rng(seed, task);
            double x = uniform_open(rng, -1.0, 1.0);
            if (spec.kind == MapKind::Interval)
                for (long k = 0; k < 100000; ++k) x = orbit_step(spec, x);
            std::vector<double> pv(static_cast<std::size_t>(L)),
                qv(static_cast<std::size_t>(L));
            for (long j = 0; j < L; ++j) {
                pv[static_cast<std::size_t>(j)] = phi(x);
                qv[static_cast<std::size_t>(j)] = psi(x);
                x = orbit_step(spec, x);
            }
            CorrBatch b;
            b.c.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
            double mphi = 0, mpsi = 0;
            for (long j = 0; j < per_batch; ++j) {
                mphi += pv[static_cast<std::size_t>(j)];
                mpsi += qv[static_cast<std::size_t>(j)];
            }
            mphi /= static_cast<double>(per_batch);
            mpsi /= static_cast<double>(per_batch);
            for (long n = 0; n <= n_max; ++n) {
                double acc = 0;
                for (long j = 0; j < per_batch; ++j)
                    acc += qv[static_cast<std::size_t>(j)] *
                           pv[static_cast<std::size_t>(j + n)];
                b.c[static_cast<std::size_t>(n)] =
                    acc / static_cast<double>(per_batch) - mphi * mpsi;
            }
            b.mphi = mphi;
            b.mpsi = mpsi;
            return b;
        });

    CorrelationResult r;
    r.C.resize(static_cast<std::size_t>(n_max) + 1);
    r.stderr_.resize(static_cast<std::size_t>(n_max) + 1);
    std::vector<double> vals(results.size());
    for (long n = 0; n <= n_max; ++n) {
        for (std::size_t b = 0; b < results.size(); ++b)
            vals[b] = results[b].c[static_cast<std::size_t>(n)];
        auto ms = batch_stats(vals);
        r.C[static_cast<std::size_t>(n)] = ms.mean;
        r.stderr_[static_cast<std::size_t>(n)] = ms.stderr_;
    }
    for (const auto& b : results) {
        r.mean_phi += b.mphi;
        r.mean_psi += b.mpsi;
    }
    r.mean_phi /= static_cast<double>(results.size());
    r.mean_psi /= static_cast<double>(results.size());
    return r;
}

double renewal_leading_term(const PartitionTable& table, int m, long n) {
    if (m < 0 || n < 0) throw std::invalid_argument("renewal_leading_term: bad arguments");
    if (m + n > table.N)
        throw std::out_of_range("renewal_leading_term: m + n exceeds table depth");
    double sum = 0;
    for (long k = n + 1; m + k <= table.N; ++k)
        sum += table.b[static_cast<std::size_t>(m + k)];
    // Power-law continuation of b_q for q beyond the table.
    const double e = tail_exponent(table.spec);
    const double bN = table.b[static_cast<std::size_t>(table.N)];
    sum += bN * static_cast<double>(table.N) / (e - 1.0);
    return sum;
}

double Normalization::scale(long n) const {
    auto x = static_cast<double>(n);
    switch (kind) {
    case NormKind::SqrtN: return std::sqrt(x);
    case NormKind::NPow: return std::pow(x, exponent);
    default: return std::sqrt(x * std::log(std::max(x, 2.0)));
    }
}

EmpiricalDist birkhoff_normalized_sums(const MapSpec& spec, const ObservableSpec& phi_in,
                                       long n, long samples, Normalization norm,
                                       std::uint64_t seed, unsigned workers) {
    if (n < 1 || samples < 1)
        throw std::invalid_argument("birkhoff_normalized_sums: bad sizes");
    const ObservableSpec phi = resolve_mean_offset(spec, phi_in, splitmix64(seed));
    auto starts = invariant_samples(spec, static_cast<std::size_t>(samples), seed);
    const double B = norm.scale(n);
    auto vals = run_tasks<double>(
        static_cast<std::size_t>(samples), workers, [&](std::size_t task) {
            double x = starts[task];
            double acc = 0;
            for (long k = 0; k < n; ++k) {
                acc += phi(x);
                x = orbit_step(spec, x);
            }
            return acc / B;
        });
    return EmpiricalDist(std::move(vals));
}

void require_generic_center(double center, double r) {
    if (!(r > 0)) throw std::invalid_argument("recurrence: r must be > 0");
    if (std::abs(center) < 1.5 * r)
        throw std::invalid_argument("recurrence: center too close to the cusp at 0 for this r");
    if (1.0 - std::abs(center) < 1.5 * r)
        throw std::invalid_argument(
            "recurrence: center too close to the neutral point at +-1 for this r");
}

double ball_measure(const MapSpec& spec, double center, double r, std::uint64_t seed,
                    long calib_steps) {
    require_generic_center(center, r);
    if (spec.kind == MapKind::Circle) return r; // Lebesgue/2 of (c-r, c+r)
    auto rng = task_rng(seed, 0x62616c6cULL);
    double x = uniform_open(rng, -1.0, 1.0);
    for (long k = 0; k < 1000000; ++k) x = orbit_step(spec, x);
    long hits = 0;
    for (long k = 0; k < calib_steps; ++k) {
        if (std::abs(x - center) < r) ++hits;
        x = orbit_step(spec, x);
    }
    if (hits == 0) throw std::runtime_error("ball_measure: no orbit mass in the ball");
    return static_cast<double>(hits) / static_cast<double>(calib_steps);
}

namespace {

constexpr int kRecurrenceTasks = 100;

long per_task_quota(long samples, int tasks) { return (samples + tasks - 1) / tasks; }

} // namespace

EmpiricalDist return_time_distribution(const MapSpec& spec, double center, double r,
                                       long samples, std::uint64_t seed, unsigned workers,
                                       RecurrenceOptions opt) {
    require_generic_center(center, r);
    const double mu = ball_measure(spec, center, r, seed);
    const long gap_cap = static_cast<long>(opt.t_cap / mu) + 1;
    const long quota = per_task_quota(samples, kRecurrenceTasks);
    auto parts = run_tasks<std::vector<double>>(
        kRecurrenceTasks, workers, [&](std::size_t task) {
            auto rng = task_rng(seed, task);
            double x = uniform_open(rng, -1.0, 1.0);
            if (spec.kind == MapKind::Interval)
                for (long k = 0; k < 100000; ++k) x = orbit_step(spec, x);
            std::vector<double> out;
            out.reserve(static_cast<std::size_t>(quota));
            bool inside_seen = false;
            long gap = 0;
            // Successive hit gaps of a stationary orbit sample the
            // conditional measure on the ball.
            while (out.size() < static_cast<std::size_t>(quota)) {
                x = orbit_step(spec, x);
                ++gap;
                bool hit = std::abs(x - center) < r;
                if (hit || gap >= gap_cap) {
                    if (inside_seen)
                        out.push_back(std::min(static_cast<double>(gap) * mu, opt.t_cap));
                    inside_seen = inside_seen || hit;
                    gap = 0;
                }
            }
            return out;
        });
    std::vector<double> all;
    all.reserve(static_cast<std::size_t>(quota) * kRecurrenceTasks);
    for (auto& p : parts) all.insert(all.end(), p.begin(), p.end());
    return EmpiricalDist(std::move(all));
}

EmpiricalDist hitting_time_distribution(const MapSpec& spec, double center, double r,
                                        long samples, std::uint64_t seed, unsigned workers,
                                        RecurrenceOptions opt) {
    require_generic_center(center, r);
    const double mu = ball_measure(spec, center, r, seed);
    const long gap_cap = static_cast<long>(opt.t_cap / mu) + 1;
    auto starts = invariant_samples(spec, static_cast<std::size_t>(samples),
                                    splitmix64(seed) + 7);
    auto vals = run_tasks<double>(
        static_cast<std::size_t>(samples), workers, [&](std::size_t task) {
            double x = starts[task];
            for (long k = 1; k <= gap_cap; ++k) {
                x = orbit_step(spec, x);
                if (std::abs(x - center) < r) return static_cast<double>(k) * mu;
            }
            return opt.t_cap;
        });
    return EmpiricalDist(std::move(vals));
}

std::vector<double> visit_count_distribution(const MapSpec& spec, double center, double r,
                                             double t, long samples, std::uint64_t seed,
                                             unsigned workers) {
    require_generic_center(center, r);
    if (!(t >= 0)) throw std::invalid_argument("visit_count_distribution: t >= 0 required");
    const double mu = ball_measure(spec, center, r, seed);
    const long W = static_cast<long>(std::floor(t / mu));
    auto starts = invariant_samples(spec, static_cast<std::size_t>(samples),
                                    splitmix64(seed) + 11);
    auto counts = run_tasks<long>(
        static_cast<std::size_t>(samples), workers, [&](std::size_t task) {
            double x = starts[task];
            long k = 0;
            for (long j = 0; j < W; ++j) {
                x = orbit_step(spec, x);
                if (std::abs(x - center) < r) ++k;
            }
            return k;
        });
    long kmax = 0;
    for (long k : counts) kmax = std::max(kmax, k);
    std::vector<double> pmf(static_cast<std::size_t>(kmax) + 1, 0.0);
    for (long k : counts) pmf[static_cast<std::size_t>(k)] += 1.0;
    for (double& p : pmf) p /= static_cast<double>(counts.size());
    return pmf;
}

double poisson_pmf(double t, int k) {
    if (t == 0.0) return k == 0 ? 1.0 : 0.0;
    return std::exp(-t + k * std::log(t) - std::lgamma(k + 1.0));
}

namespace {

// mu(B_eps(xi))/eps from samples of the invariant measure; the EVL
// normalizing sequences need the local measure slope at xi.
double local_measure_slope(const MapSpec& spec, double xi, std::uint64_t seed) {
    const double eps = 1e-3;
    if (spec.kind == MapKind::Circle) {
        auto rng = task_rng(seed, 0x736c6f70ULL);
        const long n = 10000000;
        long hits = 0;
        for (long k = 0; k < n; ++k)
            if (dist_to(uniform_open(rng, -1.0, 1.0), xi, true) < eps) ++hits;
        return static_cast<double>(hits) / static_cast<double>(n) / eps;
    }
    return ball_measure(spec, xi, eps, seed, 30000000) / eps;
}

} // namespace

EmpiricalDist extreme_maxima_distribution(const MapSpec& spec, double xi, ExtremeSpec g,
                                          long n, long samples, std::uint64_t seed,
                                          unsigned workers) {
    if (std::abs(xi) < 1e-2 || 1.0 - std::abs(xi) < 1e-2)
        throw std::invalid_argument("extreme_maxima_distribution: xi too close to 0 or +-1");
    if (n < 1 || samples < 1)
        throw std::invalid_argument("extreme_maxima_distribution: bad sizes");
    const bool circ = (spec.kind == MapKind::Circle);
    const double s = local_measure_slope(spec, xi, splitmix64(seed));
    const double sn = s * static_cast<double>(n);
    auto starts = invariant_samples(spec, static_cast<std::size_t>(samples),
                                    splitmix64(seed) + 3);
    auto vals = run_tasks<double>(
        static_cast<std::size_t>(samples), workers, [&](std::size_t task) {
            double x = starts[task];
            // track the minimal distance; every class is monotone in d
            double dmin = dist_to(x, xi, circ);
            for (long k = 1; k < n; ++k) {
                x = orbit_step(spec, x);
                dmin = std::min(dmin, dist_to(x, xi, circ));
            }
            switch (g.cls) {
            case ExtremeClass::G1: return -std::log(dmin) - std::log(sn);
            case ExtremeClass::G2: return std::pow(dmin, -1.0 / g.alpha) /
                                          std::pow(sn, 1.0 / g.alpha);
            default:
                return std::pow(sn, 1.0 / g.alpha) *
                       ((g.cap - std::pow(dmin, 1.0 / g.alpha)) - g.cap);
            }
        });
    return EmpiricalDist(std::move(vals));
}

double gumbel_cdf(double y) { return std::exp(-std::exp(-y)); }

double frechet_cdf(double y, double alpha) {
    return y <= 0 ? 0.0 : std::exp(-std::pow(y, -alpha));
}

double weibull_cdf(double y, double alpha) {
    return y >= 0 ? 1.0 : std::exp(-std::pow(-y, alpha));
}

namespace {

struct LdBatch {
    std::vector<long> windows;
    std::vector<long> exceed;
};

// Exceedance probabilities above 1/e are treated as saturated.
constexpr double kLdSaturationCap = 0.3678794411714423;

} // namespace

LargeDeviationCurve large_deviation_curve(const MapSpec& spec, const ObservableSpec& phi_in,
                                          double eps, const std::vector<long>& n_list,
                                          long samples, std::uint64_t seed,
                                          unsigned workers) {
    if (n_list.empty() || !(eps > 0))
        throw std::invalid_argument("large_deviation_curve: bad arguments");
    const ObservableSpec phi = resolve_mean_offset(spec, phi_in, splitmix64(seed));
    const int batches = 100;
    const long L = std::max(samples / batches, 2 * (*std::max_element(n_list.begin(),
                                                                      n_list.end())));
    auto results = run_tasks<LdBatch>(
        static_cast<std::size_t>(batches), workers, [&](std::size_t task) {
            auto rng = task_rng(seed, task);
            double x = uniform_open(rng, -1.0, 1.0);
            if (spec.kind == MapKind::Interval)
                for (long k = 0; k < 100000; ++k) x = orbit_step(spec, x);
            std::vector<double> prefix(static_cast<std::size_t>(L) + 1, 0.0);
            for (long j = 0; j < L; ++j) {
                prefix[static_cast<std::size_t>(j) + 1] =
                    prefix[static_cast<std::size_t>(j)] + phi(x);
                x = orbit_step(spec, x);
            }
            LdBatch b;
            b.windows.assign(n_list.size(), 0);
            b.exceed.assign(n_list.size(), 0);
            for (std::size_t i = 0; i < n_list.size(); ++i) {
                const long n = n_list[i];
                const long stride = std::max<long>(1, n / 50);
                const double thresh = eps * static_cast<double>(n);
                for (long j = 0; j + n <= L; j += stride) {
                    ++b.windows[i];
                    if (std::abs(prefix[static_cast<std::size_t>(j + n)] -
                                 prefix[static_cast<std::size_t>(j)]) > thresh)
                        ++b.exceed[i];
                }
            }
            return b;
        });

    LargeDeviationCurve curve;
    curve.n = n_list;
    curve.prob.assign(n_list.size(), std::nan(""));
    curve.dropped.assign(n_list.size(), false);
    std::vector<double> fx, fy;
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        long w = 0, e = 0;
        for (const auto& b : results) {
            w += b.windows[i];
            e += b.exceed[i];
        }
        if (e < 10) {
            curve.dropped[i] = true;
            continue;
        }
        curve.prob[i] = static_cast<double>(e) / static_cast<double>(w);
        // The polynomial law describes rare exceedances; windows where the
        // threshold is crossed with probability of order one sit in the
        // central-limit bulk and carry no tail information, so they are
        // reported but excluded from the slope fit.
        if (curve.prob[i] > kLdSaturationCap) continue;
        fx.push_back(static_cast<double>(n_list[i]));
        fy.push_back(curve.prob[i]);
        ++curve.kept;
    }
    if (curve.kept >= 2) curve.fitted_slope = fit_loglog_slope(fx, fy);
    return curve;
}

double large_deviation_exponent(const MapSpec& spec) {
    if (spec.kind == MapKind::Circle) return 1.0 / (spec.circle_params().gamma - 1.0);
    const auto& p = spec.interval_params();
    const double kg = p.kappa * (p.gamma - 1.0);
    return (1.0 - kg) / kg;
}

StableFitParams stable_sum_params(double gamma, double phi_at_one) {
    if (!(gamma > 2.0))
        throw std::invalid_argument("stable_sum_params: needs gamma > 2 (p < 2 regime)");
    if (phi_at_one == 0.0)
        throw std::invalid_argument("stable_sum_params: phi(1) must be nonzero");
    StableFitParams r;
    r.p = gamma / (gamma - 1.0);
    r.beta = (phi_at_one > 0) ? 1.0 : -1.0;
    r.c = (1.0 / (2.0 * gamma)) *
          std::pow(2.0 * gamma * std::abs(phi_at_one) / (gamma - 1.0), r.p) *
          std::tgamma(1.0 - r.p) * std::cos(0.5 * M_PI * r.p);
    return r;
}

} // namespace intermap
