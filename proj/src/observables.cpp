#include "intermap/observables.hpp"

#include <cmath>
#include <stdexcept>

#include "intermap/rng.hpp"

namespace intermap {

double dist_to(double x, double xi, bool circle_dist) {
    double d = std::abs(x - xi);
    if (circle_dist && d > 1.0) d = 2.0 - d; // wrap across the identified endpoints
    return d;
}

namespace {

// C^1 ramp, 0 -> 1 on [0,1]
inline double smoothstep(double t) { return t * t * (3.0 - 2.0 * t); }

} // namespace

double ObservableSpec::operator()(double x) const {
    double v;
    switch (kind) {
    case ObservableKind::HolderPower: {
        double d = std::abs(x - center);
        v = (nu == 2.0) ? d * d : ((nu == 1.0) ? d : std::pow(d, nu));
        break;
    }
    case ObservableKind::IndicatorSmoothed:
        if (x <= lo || x >= hi)
            v = 0.0;
        else if (x < lo + width)
            v = smoothstep((x - lo) / width);
        else if (x > hi - width)
            v = smoothstep((hi - x) / width);
        else
            v = 1.0;
        break;
    case ObservableKind::LogDist:
        v = -std::log(dist_to(x, xi, circle_dist));
        break;
    case ObservableKind::PowDist: {
        double d = dist_to(x, xi, circle_dist);
        v = (sign > 0) ? std::pow(d, -1.0 / alpha) : cap - std::pow(d, 1.0 / alpha);
        break;
    }
    default:
        v = 0.0;
    }
    return v - mean_offset;
}

ObservableSpec ObservableSpec::holder_power(double nu, double center, bool mean_subtracted) {
    if (!(nu > 0)) throw std::invalid_argument("holder_power: nu must be > 0");
    ObservableSpec o;
    o.kind = ObservableKind::HolderPower;
    o.nu = nu;
    o.center = center;
    o.mean_subtracted = mean_subtracted;
    return o;
}

ObservableSpec ObservableSpec::smoothed_indicator(double lo, double hi, bool mean_subtracted,
                                                  double width) {
    if (!(hi > lo)) throw std::invalid_argument("smoothed_indicator: need hi > lo");
    ObservableSpec o;
    o.kind = ObservableKind::IndicatorSmoothed;
    o.lo = lo;
    o.hi = hi;
    o.width = (width > 0) ? width : 1e-3 * (hi - lo);
    if (2.0 * o.width > hi - lo)
        throw std::invalid_argument("smoothed_indicator: ramps wider than the interval");
    o.mean_subtracted = mean_subtracted;
    return o;
}

ObservableSpec ObservableSpec::log_dist(double xi, bool circle_dist) {
    ObservableSpec o;
    o.kind = ObservableKind::LogDist;
    o.xi = xi;
    o.circle_dist = circle_dist;
    return o;
}

ObservableSpec ObservableSpec::pow_dist(double xi, double alpha, bool circle_dist) {
    if (!(alpha > 0)) throw std::invalid_argument("pow_dist: alpha must be > 0");
    ObservableSpec o;
    o.kind = ObservableKind::PowDist;
    o.xi = xi;
    o.alpha = alpha;
    o.sign = +1;
    o.circle_dist = circle_dist;
    return o;
}

ObservableSpec ObservableSpec::capped_pow_dist(double xi, double alpha, double cap,
                                               bool circle_dist) {
    if (!(alpha > 0)) throw std::invalid_argument("capped_pow_dist: alpha must be > 0");
    ObservableSpec o;
    o.kind = ObservableKind::PowDist;
    o.xi = xi;
    o.alpha = alpha;
    o.sign = -1;
    o.cap = cap;
    o.circle_dist = circle_dist;
    return o;
}

double lebesgue_mean(const ObservableSpec& obs) {
    switch (obs.kind) {
    case ObservableKind::HolderPower: {
        // (1/2) int |x-c|^nu dx = ((1-c)^{nu+1} + (1+c)^{nu+1}) / (2(nu+1))
        double n1 = obs.nu + 1.0;
        return (std::pow(1.0 - obs.center, n1) + std::pow(1.0 + obs.center, n1)) / (2.0 * n1);
    }
    case ObservableKind::IndicatorSmoothed:
        // each ramp integrates to width/2
        return 0.5 * (obs.hi - obs.lo - obs.width);
    case ObservableKind::LogDist: {
        if (obs.circle_dist) return 1.0; // 2 * int_0^1 -log t dt, density 1/2
        double l1 = 1.0 + obs.xi, l2 = 1.0 - obs.xi;
        auto seg = [](double l) { return (l > 0) ? l * (1.0 - std::log(l)) : 0.0; };
        return 0.5 * (seg(l1) + seg(l2));
    }
    case ObservableKind::PowDist: {
        if (obs.sign > 0) break; // d^{-1/alpha}: mean not needed anywhere
        // cap - d^{1/alpha}; wrapped distance is uniform on [0,1]
        double e1 = 1.0 + 1.0 / obs.alpha;
        if (obs.circle_dist) return obs.cap - 1.0 / e1;
        double l1 = 1.0 + obs.xi, l2 = 1.0 - obs.xi;
        auto seg = [&](double l) { return (l > 0) ? std::pow(l, e1) / e1 : 0.0; };
        return obs.cap - 0.5 * (seg(l1) + seg(l2));
    }
    default:
        break;
    }
    throw std::invalid_argument("lebesgue_mean: no closed form for this observable");
}

ObservableSpec resolve_mean_offset(const MapSpec& spec, ObservableSpec obs,
                                   std::uint64_t seed, long calib_steps) {
    if (!obs.mean_subtracted) return obs;
    obs.mean_offset = 0.0;
    if (spec.kind == MapKind::Circle) {
        obs.mean_offset = lebesgue_mean(obs);
        return obs;
    }
    auto rng = task_rng(seed, 0x6d65616eULL);
    double x = uniform_open(rng, -1.0, 1.0);
    for (long k = 0; k < 100000; ++k) x = orbit_step(spec, x);
    double acc = 0;
    for (long k = 0; k < calib_steps; ++k) {
        acc += obs(x);
        x = orbit_step(spec, x);
    }
    obs.mean_offset = acc / static_cast<double>(calib_steps);
    return obs;
}

} // namespace intermap
