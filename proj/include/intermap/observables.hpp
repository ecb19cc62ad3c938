#pragma once

#include <cstdint>

#include "intermap/maps.hpp"

namespace intermap {

enum class ObservableKind { HolderPower, IndicatorSmoothed, LogDist, PowDist };

/// Observable families used by the statistical estimators:
///   HolderPower       |x - center|^nu               (nu-Holder)
///   IndicatorSmoothed C^1 mollified indicator of (lo, hi), ramp width w
///   LogDist           -log d(x, xi)
///   PowDist           d(x, xi)^{-1/alpha}            (sign = +1)
///                     cap - d(x, xi)^{1/alpha}       (sign = -1)
/// For the circle map distances wrap around the identified endpoints.
struct ObservableSpec {
    ObservableKind kind = ObservableKind::HolderPower;
    double nu = 1.0;
    double center = 0.0;
    double lo = 0.0, hi = 0.0;
    double width = 0.0;
    double xi = 0.0;
    double alpha = 1.0;
    int sign = +1;
    double cap = 0.0;
    bool circle_dist = false;
    bool mean_subtracted = false;
    double mean_offset = 0.0; // subtracted from every evaluation

    double operator()(double x) const;

    static ObservableSpec holder_power(double nu, double center, bool mean_subtracted);
    /// width defaults to 1e-3 * (hi - lo); the ramps sit inside (lo, hi),
    /// so the support stays inside the indicated interval.
    static ObservableSpec smoothed_indicator(double lo, double hi, bool mean_subtracted,
                                             double width = -1.0);
    static ObservableSpec log_dist(double xi, bool circle_dist);
    static ObservableSpec pow_dist(double xi, double alpha, bool circle_dist);
    static ObservableSpec capped_pow_dist(double xi, double alpha, double cap,
                                          bool circle_dist);
};

/// Distance to xi, wrapping across +-1 when requested.
double dist_to(double x, double xi, bool circle_dist);

/// Exact Lebesgue mean (density 1/2 on [-1,1]) where a closed form
/// exists; throws for PowDist, whose mean is not needed anywhere.
double lebesgue_mean(const ObservableSpec& obs);

/// Fills mean_offset when mean_subtracted is set: closed-form Lebesgue
/// mean for the circle map, empirical orbit average for the interval map
/// (whose invariant measure has no usable closed form here).
ObservableSpec resolve_mean_offset(const MapSpec& spec, ObservableSpec obs,
                                   std::uint64_t seed, long calib_steps = 2000000);

} // namespace intermap
