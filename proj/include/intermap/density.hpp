#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "intermap/maps.hpp"
#include "intermap/partition.hpp"

namespace intermap {

enum class DensityMethod { Histogram, Ulam };

/// Binned estimate of the invariant density on [-1,1]; masses sum to 1.
struct DensityEstimate {
    DensityMethod method = DensityMethod::Histogram;
    std::vector<double> edges; // size bins + 1, increasing, spans [-1,1]
    std::vector<double> mass;  // size bins, nonnegative, sums to 1
    double residual = 0;       // Ulam fixed-point residual |vP - v|_1
    long sample_count = 0;     // histogram only; 0 for Ulam

    std::size_t bins() const { return mass.size(); }
    /// Integral of the estimated density over (lo, hi); partial bins
    /// contribute proportionally.
    double mass_on(double lo, double hi) const;
    double density_at(double x) const;
};

/// L1 distance between the estimate and a reference density (midpoint
/// value per bin).
double l1_distance(const DensityEstimate& d, const std::function<double(double)>& density);
/// L1 cross-distance of two estimates, evaluated on the merged edge set.
double l1_distance(const DensityEstimate& a, const DensityEstimate& b);

/// Occupation histogram of one long orbit per task after burn-in.
/// Interval maps only (the circle map has constant density by
/// construction).  Bin edges are uniform with geometric refinement near
/// -1, 0 and +1, where the exponent fits need decades of resolution.
DensityEstimate histogram_density(const MapSpec& spec, int bins, long samples, long burn_in,
                                  std::uint64_t seed, unsigned workers = 1);

/// Ulam transfer-matrix stationary density on uniform cells.  The matrix
/// entries are exact interval overlaps of inverse-branch preimages; the
/// stationary vector solves the fixed-point system directly.
DensityEstimate ulam_density(const MapSpec& spec, int cells);

/// One application of the transfer operator to a binned estimate, using
/// exact preimage overlaps on the estimate's own edges; the invariant
/// density is a fixed point up to method error.
DensityEstimate apply_transfer(const MapSpec& spec, const DensityEstimate& d);

struct CylinderExponents {
    // fitted log-log slopes of cylinder masses against the index n
    double exp_plus = 0;  // mu((a_{n-1}, a_n)), cylinders accumulating at +1
    double exp_minus = 0; // mu((a_{-n}, a_{-n+1})), accumulating at -1
    double exp_zero = 0;  // mu((b_{n+1}, b_n)), accumulating at 0+
    double pred_plus = 0, pred_minus = 0, pred_zero = 0;
    double density_near_zero = 0;     // average density on (-b_{n_lo}, b_{n_lo})
    double density_slope_minus1 = 0;  // d log rho / d log(1+x) near -1
    double pred_density_slope_minus1 = 0; // (1 - kappa gamma)/kappa
    int trichotomy = 0;               // +1 rho->inf, 0 O(1), -1 rho->0 (predicted)
    long n_lo = 0, n_hi = 0;
    bool starved = false;             // some cylinder mass below 10 histogram counts
};

/// Integrates the density over the three cylinder families and fits the
/// predicted power laws; the n range must sit inside the table depth.
CylinderExponents cylinder_measure_exponents(const MapSpec& spec, const DensityEstimate& d,
                                             const PartitionTable& table, long n_lo,
                                             long n_hi);

void export_density_csv(const DensityEstimate& d, const std::string& path);

} // namespace intermap
