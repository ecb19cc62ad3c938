#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "intermap/maps.hpp"

namespace intermap {

/// Endpoints of the countable Markov partition generated by the preimages
/// of 0.  Only the positive side is stored; a_{-n} = -a_n and
/// b_{-n} = -b_n by symmetry.  one_minus_a keeps full precision near the
/// neutral fixed point.
struct PartitionTable {
    MapSpec spec = MapSpec::circle(2.0);
    long N = 0;
    std::vector<double> a;           // a[n], n = 0..N
    std::vector<double> one_minus_a; // 1 - a[n]
    std::vector<double> b;           // b[n], n = 1..N (b[0] unused)
    std::vector<double> l;           // l[n] = a[n] - a[n-1], n = 1..N (l[0] unused)

    double a_of(long n) const;       // a_n, signed index
    double b_of(long n) const;       // b_n, signed index
};

PartitionTable build_partition(const MapSpec& spec, long N);

void export_partition_csv(const PartitionTable& table, const std::string& path);

/// Scaled endpoint quantities at n = N against the closed-form limit
/// constants.
struct ScalingReport {
    double u_scaled = 0, u_pred = 0, u_rel_dev = 0; // n^{1/(g-1)} (1 - a_n)
    double l_scaled = 0, l_pred = 0, l_rel_dev = 0; // n^{g/(g-1)} l_n
    double b_scaled = 0, b_pred = 0, b_rel_dev = 0; // n^{e} b_n, e the tail exponent
};
ScalingReport scaling_constants(const PartitionTable& table);

/// Tail exponent of b_n (and of the return-time tail): g/(g-1) for the
/// circle map, 1/(k(g-1)) for the interval map.
double tail_exponent(const MapSpec& spec);

enum class Side { Plus, Minus };

struct Cylinder {
    int m = 0;
    long p = 0;
    Side side = Side::Plus;
    double lo = 0, hi = 0;
    double length() const { return hi - lo; }
};

/// Z^+_{m,1} = (b_{m+1}, a_m); Z^+_{m,p>1} = (b_{m+p}, b_{m+p-1});
/// the Minus side is the reflection.
Cylinder cylinder(const PartitionTable& table, int m, long p, Side side);

struct InducedMap {
    int m = 0;
    long p_max = 0;
    std::vector<Cylinder> cylinders; // Plus then Minus for each p
    double tail_length = 0;          // length of (b_{-(m+p_max)}, b_{m+p_max})
};
InducedMap build_induced(const PartitionTable& table, int m, long p_max);

struct FirstReturn {
    long p = 0;
    double y = 0;
};

struct FirstReturnCapExceeded : std::runtime_error {
    std::vector<double> partial_orbit;
    explicit FirstReturnCapExceeded(std::vector<double> orbit)
        : std::runtime_error("first_return: cap exceeded (point too close to a b-endpoint)"),
          partial_orbit(std::move(orbit)) {}
};

FirstReturn first_return(const PartitionTable& table, int m, double x, long p_cap = 1000000);

/// Plain Lebesgue length of (b_{-(m+n)}, b_{m+n}), the set of points of
/// I_m with first-return time > n.
double tail_measure(const PartitionTable& table, int m, long n);

/// Value, first and second derivative of the p-fold iterate at x.
struct IterateDerivs {
    double value = 0;
    double d1 = 0;
    double d2 = 0;
    double log_abs_d1 = 0;
};
IterateDerivs iterate_derivs(const MapSpec& spec, double x, long p);

struct DistortionScan {
    double K_hat = 0;               // sup of |log D^p(x) - log D^p(y)| / |T^p x - T^p y|
    double worst_ratio = 1;         // largest raw |D^p(x)/D^p(y)|
    std::vector<double> K_by_p;     // cumulative sup over return times <= p (index p-1)
    long pairs_used = 0;
    long pairs_skipped = 0;         // degenerate pairs with |T^p x - T^p y| < 1e-12
};
DistortionScan distortion_scan(const PartitionTable& table, int m, long p_max,
                               long pairs_per_cylinder, std::uint64_t seed);

struct VariationCheck {
    double partial_sum = 0;
    std::vector<double> increments; // contribution of return time p (index p-1)
};
/// Truncated Rychlik variation bound
///   sum_p [ int_{Z_{m,p}} |D^2 T^| / |D T^|^2 + 2 sup_{Z_{m,p}} 1/|D T^| ]
/// by adaptive Simpson per cylinder.
VariationCheck variation_check(const PartitionTable& table, int m, long p_max);

struct KacSum {
    double partial = 0;       // sum_{p<=N} p * length(Z_{0,p})
    double tail_estimate = 0; // closed-form remainder beyond the table
    double total() const { return partial + tail_estimate; }
};
/// Kac's formula check: sum_p p * length(Z_{0,p}) should equal the total
/// length 2 (circle; for the interval map the sum equals 1/mu-normalised
/// analogue and is reported as-is).
KacSum kac_sum(const PartitionTable& table);

} // namespace intermap
