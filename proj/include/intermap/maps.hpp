#pragma once

#include <cstdint>
#include <variant>
#include <vector>

namespace intermap {

/// Circle map with a neutral fixed point at 1 (~ -1 on the torus) and a
/// cusp with unbounded derivative at 0.  On [0, 1/(2g)] the map solves
/// x = (1/(2g)) (1+T)^g; on [1/(2g), 1] it solves x = T + (1/(2g)) (1-T)^g;
/// odd continuation T(-x) = -T(x).  Lebesgue measure is invariant.
struct CircleParams {
    double gamma; // intermittency exponent, > 1
    explicit CircleParams(double gamma_);
};

/// Lorenz-type interval map on [-1,1]: two surjective symmetric branches,
/// parabolic fixed point at -1 with exponent gamma, cusp at 0 with
/// exponent kappa.  The left branch S1 is the inverse of
///   h(y) = y - a (1+y)^gamma        on [-1, 0]
///   h(y) = -((1-y)/b)^{1/kappa}     on [0, 1]
/// and S(x) = S1(-|x|).  The matching constants a = kappa/(kappa*gamma+1)
/// and b = a^{-kappa} make the two pieces C^1.  At (kappa, gamma) =
/// (1/2, 2) the map is exactly the Hemmer map 1 - 2 sqrt(|x|).
struct IntervalParams {
    double kappa; // cusp exponent, in (0,1)
    double gamma; // parabolic exponent, > 1
    double a;     // parabolic coefficient (derived)
    double b;     // cusp coefficient (derived)
    IntervalParams(double kappa_, double gamma_);
};

enum class MapKind { Circle, Interval };
enum class Branch { Left, Right };

struct MapSpec {
    MapKind kind;
    std::variant<CircleParams, IntervalParams> params;
    double solver_tol = 1e-14;
    int max_newton_iters = 60;

    static MapSpec circle(double gamma);
    static MapSpec interval(double kappa, double gamma);

    const CircleParams& circle_params() const { return std::get<CircleParams>(params); }
    const IntervalParams& interval_params() const { return std::get<IntervalParams>(params); }
};

double eval_circle(const CircleParams& p, double x, double tol = 1e-14, int max_iters = 60);
double deriv_circle(const CircleParams& p, double x, int order);

double eval_interval(const IntervalParams& p, double x, double tol = 1e-14, int max_iters = 60);
double deriv_interval(const IntervalParams& p, double x, int order);

double map_eval(const MapSpec& spec, double x);
double map_deriv(const MapSpec& spec, double x, int order);
double map_log_abs_deriv(const MapSpec& spec, double x);

/// Preimage of y on the stated branch (Left: x < 0 for the circle map,
/// increasing branch on [-1,0] for the interval map).  Closed form for
/// both maps.
double invert_branch(const MapSpec& spec, Branch branch, double y);

struct Orbit {
    double start = 0;
    long length = 0;
    double final = 0;
    long zero_nudges = 0; // iterates that landed exactly on 0 and were nudged
    std::vector<double> points; // empty unless requested
};

Orbit iterate_orbit(const MapSpec& spec, double x0, long n, bool store = false);

/// One iteration step with the exact-zero nudge applied; the workhorse
/// behind every long-orbit estimator.  An iterate that lands exactly on 0
/// (a measure-zero floating-point event) is moved one ulp toward the side
/// the previous point was on, and the counter is incremented.
inline double orbit_step(const MapSpec& spec, double x, long* nudges = nullptr) {
    double y = map_eval(spec, x);
    if (y == 0.0) {
        y = (x > 0) ? 5e-324 : -5e-324;
        if (nudges) ++*nudges;
    }
    return y;
}

struct LyapunovResult {
    double mean = 0;
    double stderr_ = 0;
    long samples = 0;
    long steps_per_sample = 0;
};

/// Birkhoff average of log|D(map)| over `samples` orbits of length `n`
/// started from uniform points (burn-in applied for the interval map,
/// whose invariant measure is not Lebesgue).
LyapunovResult lyapunov_estimate(const MapSpec& spec, long samples, long n,
                                 std::uint64_t seed, unsigned workers = 1);

} // namespace intermap
