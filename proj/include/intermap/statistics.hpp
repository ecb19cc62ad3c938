#pragma once

#include <cstdint>
#include <vector>

#include "intermap/empirical.hpp"
#include "intermap/maps.hpp"
#include "intermap/observables.hpp"
#include "intermap/partition.hpp"

namespace intermap {

/// Samples from the invariant measure: iid uniform for the circle map
/// (Lebesgue is invariant), a thinned long orbit after burn-in for the
/// interval map.
std::vector<double> invariant_samples(const MapSpec& spec, std::size_t count,
                                      std::uint64_t seed);

struct CorrelationResult {
    std::vector<double> C;       // C[n], n = 0..n_max
    std::vector<double> stderr_; // batch-mean standard errors
    double mean_phi = 0;
    double mean_psi = 0;
};

/// C(n) = avg[phi(T^n x) psi(x)] - avg[phi] avg[psi] from batched long
/// orbits; error bars across 100 batches.
CorrelationResult estimate_correlation(const MapSpec& spec, const ObservableSpec& phi,
                                       const ObservableSpec& psi, long n_max, long samples,
                                       std::uint64_t seed, unsigned workers = 1,
                                       int batches = 100);

/// Predicted leading correlation term sum_{k>n} mu(tau > k on I_m) in the
/// probability normalization; the table tail is extended by the closed-form
/// power-law asymptotic beyond its depth.
double renewal_leading_term(const PartitionTable& table, int m, long n);

enum class NormKind { SqrtN, NPow, SqrtNLogN };

struct Normalization {
    NormKind kind = NormKind::SqrtN;
    double exponent = 0.5; // used by NPow
    double scale(long n) const;
};

/// Empirical law of S_n(phi)/B_n over starts from the invariant measure.
EmpiricalDist birkhoff_normalized_sums(const MapSpec& spec, const ObservableSpec& phi,
                                       long n, long samples, Normalization norm,
                                       std::uint64_t seed, unsigned workers = 1);

/// Ball measure mu(B_r(center)) used to rescale recurrence times: exact
/// r for the circle map, occupation fraction of a calibration orbit for
/// the interval map.
double ball_measure(const MapSpec& spec, double center, double r, std::uint64_t seed,
                    long calib_steps = 100000000);

/// Rejects centers whose ball crosses 0 or +-1 or comes within half a
/// radius of them (the recurrence asymptotics need generic centers).
void require_generic_center(double center, double r);

struct RecurrenceOptions {
    double t_cap = 100.0; // censor rescaled times beyond this (mass e^{-100})
};

/// Rescaled first-return times tau * mu(B_r) for starts distributed by the
/// conditional invariant measure on the ball (successive hit gaps of a
/// stationary orbit); reference law exp(1).
EmpiricalDist return_time_distribution(const MapSpec& spec, double center, double r,
                                       long samples, std::uint64_t seed,
                                       unsigned workers = 1, RecurrenceOptions opt = {});

/// Rescaled first-hitting times for starts from the whole space.
EmpiricalDist hitting_time_distribution(const MapSpec& spec, double center, double r,
                                        long samples, std::uint64_t seed,
                                        unsigned workers = 1, RecurrenceOptions opt = {});

/// Empirical pmf of the number of ball visits within rescaled time t;
/// reference Poisson(t).
std::vector<double> visit_count_distribution(const MapSpec& spec, double center, double r,
                                             double t, long samples, std::uint64_t seed,
                                             unsigned workers = 1);

double poisson_pmf(double t, int k);

enum class ExtremeClass { G1, G2, G3 };

struct ExtremeSpec {
    ExtremeClass cls = ExtremeClass::G1;
    double alpha = 1.0; // G2/G3
    double cap = 0.0;   // G3 upper bound D
};

/// Block maxima of g(d(., xi)) normalized by the quantile recipe
///   G1: M_n - log(s n)          -> Gumbel   exp(-e^{-y})
///   G2: M_n / (s n)^{1/alpha}   -> Frechet  exp(-y^{-alpha}), y > 0
///   G3: (s n)^{1/alpha}(M_n-D)  -> Weibull  exp(-(-y)^alpha), y <= 0
/// where s is the measured local measure slope mu(B_eps(xi))/eps.
EmpiricalDist extreme_maxima_distribution(const MapSpec& spec, double xi, ExtremeSpec g,
                                          long n, long samples, std::uint64_t seed,
                                          unsigned workers = 1);

double gumbel_cdf(double y);
double frechet_cdf(double y, double alpha);
double weibull_cdf(double y, double alpha);

struct LargeDeviationCurve {
    std::vector<long> n;
    std::vector<double> prob;    // m(|S_n phi / n| > eps), NaN when dropped
    std::vector<bool> dropped;   // fewer than 10 exceedances
    double fitted_slope = 0;     // log-log fit over kept points
    long kept = 0;
};

/// Tail probabilities of Birkhoff averages over overlapping stationary
/// windows of pooled long orbits.
LargeDeviationCurve large_deviation_curve(const MapSpec& spec, const ObservableSpec& phi,
                                          double eps, const std::vector<long>& n_list,
                                          long samples, std::uint64_t seed,
                                          unsigned workers = 1);

/// Predicted tail-decay exponent zeta: 1/(g-1) for the circle map,
/// (1 - k(g-1))/(k(g-1)) for the interval map.
double large_deviation_exponent(const MapSpec& spec);

/// Stable-law parameters of the normalized Birkhoff sum limit for the
/// circle map with gamma in (2, infinity): p = g/(g-1), beta = sgn phi(1),
/// c = (1/(2g)) (2g|phi(1)|/(g-1))^{g/(g-1)} Gamma(1-p) cos(p pi/2).
struct StableFitParams {
    double p = 0, c = 0, beta = 0;
};
StableFitParams stable_sum_params(double gamma, double phi_at_one);

} // namespace intermap
