#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace intermap {

/// Sorted-sample empirical distribution; total weight 1.
class EmpiricalDist {
public:
    EmpiricalDist() = default;
    explicit EmpiricalDist(std::vector<double> samples);

    double cdf(double t) const;
    std::size_t size() const { return samples_.size(); }
    bool empty() const { return samples_.empty(); }
    const std::vector<double>& sorted_samples() const { return samples_; }
    double quantile(double q) const;
    double mean() const;
    double variance() const;

private:
    std::vector<double> samples_;
};

/// sup_t |F_emp(t) - F(t)|, evaluated at the sample jumps.
double ks_distance(const EmpiricalDist& a, const std::function<double(double)>& cdf);

double normal_cdf(double x, double mu = 0.0, double sigma = 1.0);
double exponential_cdf(double t); // 1 - e^{-t}, 0 for t < 0

/// Regularized incomplete gamma Q(s, x) and the chi-square survival
/// function built on it.
double gamma_q(double s, double x);
double chi_square_sf(double x, double dof);

/// Least-squares slope of log(y) against log(x).
double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct MeanStderr {
    double mean = 0;
    double stderr_ = 0;
};

/// Mean and standard error of a set of batch means.
MeanStderr batch_stats(const std::vector<double>& batch_means);

} // namespace intermap
