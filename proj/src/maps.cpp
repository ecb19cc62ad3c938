#include "intermap/maps.hpp"

#include <cmath>
#include <stdexcept>

#include "intermap/parallel.hpp"
#include "intermap/rng.hpp"

namespace intermap {

CircleParams::CircleParams(double gamma_) : gamma(gamma_) {
    if (!(gamma > 1.0))
        throw std::invalid_argument("CircleParams: gamma must be > 1");
}

IntervalParams::IntervalParams(double kappa_, double gamma_) : kappa(kappa_), gamma(gamma_) {
    if (!(kappa > 0.0 && kappa < 1.0))
        throw std::invalid_argument("IntervalParams: kappa must be in (0,1)");
    if (!(gamma > 1.0))
        throw std::invalid_argument("IntervalParams: gamma must be > 1");
    a = kappa / (kappa * gamma + 1.0);
    b = std::pow(a, -kappa);
}

MapSpec MapSpec::circle(double gamma) {
    return MapSpec{MapKind::Circle, CircleParams(gamma)};
}

MapSpec MapSpec::interval(double kappa, double gamma) {
    return MapSpec{MapKind::Interval, IntervalParams(kappa, gamma)};
}

namespace {

// Newton on a monotone increasing f over [lo,hi], bisection fallback when
// an iterate leaves the bracket.  f and df share subexpressions, so the
// callback returns both.
template <typename F>
double solve_increasing(F f_df, double lo, double hi, double tol, int max_iters,
                        double t0) {
    double t = (t0 > lo && t0 < hi) ? t0 : 0.5 * (lo + hi);
    for (int it = 0; it < max_iters; ++it) {
        auto [f, df] = f_df(t);
        if (std::abs(f) <= tol) return t;
        if (f > 0)
            hi = t;
        else
            lo = t;
        double step = (df > 0) ? t - f / df : lo - 1; // force bisection on bad slope
        t = (step > lo && step < hi) ? step : 0.5 * (lo + hi);
    }
    // Bisect to the bitter end; the implicit functions are monotone, so
    // this terminates with an interval of width ~ulp.
    while (hi - lo > 1e-16 * (1.0 + std::abs(lo))) {
        double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        auto [f, df] = f_df(mid);
        (void)df;
        if (f > 0)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

double eval_circle(const CircleParams& p, double x, double tol, int max_iters) {
    if (std::abs(x) > 1.0)
        throw std::domain_error("eval_circle: |x| > 1");
    const double g = p.gamma;
    const double c = 1.0 / (2.0 * g);
    // Side via signed zero: 0+ -> -1, 0- -> +1.
    const bool neg = std::signbit(x);
    const double xa = std::abs(x);
    double t;
    if (g == 2.0) {
        t = 2.0 * std::sqrt(xa) - 1.0; // closed form covers both pieces
    } else if (xa <= c) {
        t = std::pow(2.0 * g * xa, 1.0 / g) - 1.0;
    } else if (xa == 1.0) {
        t = 1.0;
    } else {
        // x = T + c (1-T)^g, monotone in T on [0,1]
        t = solve_increasing(
            [&](double T) {
                double u = std::pow(1.0 - T, g - 1.0);
                return std::pair<double, double>{T + c * (1.0 - T) * u - xa,
                                                1.0 - 0.5 * u};
            },
            0.0, 1.0, tol, max_iters, xa - c * std::pow(1.0 - xa, g));
    }
    if (t > 1.0) t = 1.0;
    if (t < -1.0) t = -1.0;
    return neg ? -t : t;
}

double deriv_circle(const CircleParams& p, double x, int order) {
    if (x == 0.0)
        throw std::domain_error("deriv_circle: derivative diverges at the cusp x = 0");
    if (std::abs(x) > 1.0)
        throw std::domain_error("deriv_circle: |x| > 1");
    const double g = p.gamma;
    const double c = 1.0 / (2.0 * g);
    const bool neg = std::signbit(x);
    const double xa = std::abs(x);
    const double t = eval_circle(p, xa);
    double d1, d2;
    if (xa <= c) {
        // x = c (1+T)^g  =>  DT = 2 (1+T)^{1-g}
        d1 = 2.0 * std::pow(1.0 + t, 1.0 - g);
        d2 = 4.0 * (1.0 - g) * std::pow(1.0 + t, 1.0 - 2.0 * g);
    } else {
        // x = T + c (1-T)^g  =>  DT = 1 / (1 - (1/2)(1-T)^{g-1})
        double u = 1.0 - 0.5 * std::pow(1.0 - t, g - 1.0);
        d1 = 1.0 / u;
        double du = 0.5 * (g - 1.0) * std::pow(1.0 - t, g - 2.0);
        d2 = -du / (u * u * u);
    }
    if (order == 1) return d1;        // even in x
    if (order == 2) return neg ? -d2 : d2; // odd in x
    throw std::invalid_argument("deriv_circle: order must be 1 or 2");
}

namespace {

// h and its derivatives; y in [-1,1], h(y) in [-1,0]
double h_of(const IntervalParams& p, double y) {
    if (y <= 0.0) return y - p.a * std::pow(1.0 + y, p.gamma);
    return -std::pow((1.0 - y) / p.b, 1.0 / p.kappa);
}

double h_prime(const IntervalParams& p, double y) {
    if (y <= 0.0) return 1.0 - p.a * p.gamma * std::pow(1.0 + y, p.gamma - 1.0);
    return (1.0 / (p.kappa * p.b)) * std::pow((1.0 - y) / p.b, 1.0 / p.kappa - 1.0);
}

double h_second(const IntervalParams& p, double y) {
    if (y <= 0.0) return -p.a * p.gamma * (p.gamma - 1.0) * std::pow(1.0 + y, p.gamma - 2.0);
    double k = p.kappa;
    return -((1.0 - k) / (k * k * p.b * p.b)) * std::pow((1.0 - y) / p.b, 1.0 / k - 2.0);
}

// S1 = h^{-1} : [-1,0] -> [-1,1]
double s1_of(const IntervalParams& p, double w, double tol, int max_iters) {
    if (w >= -p.a) {
        // cusp piece, closed form
        return 1.0 - p.b * std::pow(-w, p.kappa);
    }
    if (p.gamma == 2.0) {
        // a y^2 + (2a-1) y + (a + w) = 0, root in [-1,0]
        double disc = (1.0 - 2.0 * p.a) * (1.0 - 2.0 * p.a) - 4.0 * p.a * (p.a + w);
        return ((1.0 - 2.0 * p.a) - std::sqrt(disc)) / (2.0 * p.a);
    }
    return solve_increasing(
        [&](double y) {
            double u = std::pow(1.0 + y, p.gamma - 1.0);
            return std::pair<double, double>{y - p.a * (1.0 + y) * u - w,
                                             1.0 - p.a * p.gamma * u};
        },
        -1.0, 0.0, tol, max_iters, w + p.a * std::pow(1.0 + w, p.gamma));
}

} // namespace

double eval_interval(const IntervalParams& p, double x, double tol, int max_iters) {
    if (std::abs(x) > 1.0)
        throw std::domain_error("eval_interval: |x| > 1");
    if (x == 0.0) return 1.0; // cusp apex
    double y = s1_of(p, -std::abs(x), tol, max_iters);
    if (y > 1.0) y = 1.0;
    if (y < -1.0) y = -1.0;
    return y;
}

double deriv_interval(const IntervalParams& p, double x, int order) {
    if (x == 0.0)
        throw std::domain_error("deriv_interval: derivative diverges at the cusp x = 0");
    if (std::abs(x) > 1.0)
        throw std::domain_error("deriv_interval: |x| > 1");
    const double y = eval_interval(p, x);
    const double hp = h_prime(p, y);
    const double d1 = 1.0 / hp; // S1'
    if (order == 1) return (x > 0) ? -d1 : d1;
    if (order == 2) return -h_second(p, y) / (hp * hp * hp); // even in x
    throw std::invalid_argument("deriv_interval: order must be 1 or 2");
}

double map_eval(const MapSpec& spec, double x) {
    if (spec.kind == MapKind::Circle)
        return eval_circle(spec.circle_params(), x, spec.solver_tol, spec.max_newton_iters);
    return eval_interval(spec.interval_params(), x, spec.solver_tol, spec.max_newton_iters);
}

double map_deriv(const MapSpec& spec, double x, int order) {
    if (spec.kind == MapKind::Circle) return deriv_circle(spec.circle_params(), x, order);
    return deriv_interval(spec.interval_params(), x, order);
}

double map_log_abs_deriv(const MapSpec& spec, double x) {
    return std::log(std::abs(map_deriv(spec, x, 1)));
}

double invert_branch(const MapSpec& spec, Branch branch, double y) {
    if (std::abs(y) > 1.0)
        throw std::domain_error("invert_branch: y outside branch image");
    if (spec.kind == MapKind::Circle) {
        const double g = spec.circle_params().gamma;
        const double c = 1.0 / (2.0 * g);
        auto right_inv = [&](double v) {
            return (v <= 0.0) ? c * std::pow(1.0 + v, g) : v + c * std::pow(1.0 - v, g);
        };
        return (branch == Branch::Right) ? right_inv(y) : -right_inv(-y);
    }
    const auto& p = spec.interval_params();
    double x = h_of(p, y);
    return (branch == Branch::Left) ? x : -x;
}

Orbit iterate_orbit(const MapSpec& spec, double x0, long n, bool store) {
    if (!(x0 > -1.0 && x0 < 1.0))
        throw std::domain_error("iterate_orbit: x0 must be in (-1,1)");
    if (n < 0) throw std::invalid_argument("iterate_orbit: n must be >= 0");
    Orbit o;
    o.start = x0;
    o.length = n;
    if (store) {
        o.points.reserve(static_cast<std::size_t>(n) + 1);
        o.points.push_back(x0);
    }
    double x = x0;
    for (long k = 0; k < n; ++k) {
        x = orbit_step(spec, x, &o.zero_nudges);
        if (store) o.points.push_back(x);
    }
    o.final = x;
    return o;
}

LyapunovResult lyapunov_estimate(const MapSpec& spec, long samples, long n,
                                 std::uint64_t seed, unsigned workers) {
    if (samples < 1) throw std::invalid_argument("lyapunov_estimate: samples >= 1 required");
    if (n < 1) throw std::invalid_argument("lyapunov_estimate: n >= 1 required");
    const long burn_in = (spec.kind == MapKind::Interval) ? 1000 : 0;
    auto means = run_tasks<double>(
        static_cast<std::size_t>(samples), workers, [&](std::size_t task) {
            auto rng = task_rng(seed, task);
            double x = uniform_open(rng, -1.0, 1.0);
            long nudges = 0;
            for (long k = 0; k < burn_in; ++k) x = orbit_step(spec, x, &nudges);
            double acc = 0;
            for (long k = 0; k < n; ++k) {
                acc += map_log_abs_deriv(spec, x);
                x = orbit_step(spec, x, &nudges);
            }
            return acc / static_cast<double>(n);
        });
    double mean = 0;
    for (double m : means) mean += m;
    mean /= static_cast<double>(samples);
    double var = 0;
    for (double m : means) var += (m - mean) * (m - mean);
    LyapunovResult r;
    r.mean = mean;
    r.stderr_ = (samples > 1) ? std::sqrt(var / (static_cast<double>(samples) *
                                                 (static_cast<double>(samples) - 1)))
                              : 0.0;
    r.samples = samples;
    r.steps_per_sample = n;
    return r;
}

} // namespace intermap
