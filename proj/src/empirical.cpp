#include "intermap/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace intermap {

EmpiricalDist::EmpiricalDist(std::vector<double> samples) : samples_(std::move(samples)) {
    if (samples_.empty()) throw std::invalid_argument("EmpiricalDist: no samples");
    std::sort(samples_.begin(), samples_.end());
}

double EmpiricalDist::cdf(double t) const {
    auto it = std::upper_bound(samples_.begin(), samples_.end(), t);
    return static_cast<double>(it - samples_.begin()) / static_cast<double>(samples_.size());
}

double EmpiricalDist::quantile(double q) const {
    if (q <= 0) return samples_.front();
    if (q >= 1) return samples_.back();
    auto idx = static_cast<std::size_t>(q * static_cast<double>(samples_.size()));
    if (idx >= samples_.size()) idx = samples_.size() - 1;
    return samples_[idx];
}

double EmpiricalDist::mean() const {
    double m = 0;
    for (double s : samples_) m += s;
    return m / static_cast<double>(samples_.size());
}

double EmpiricalDist::variance() const {
    double m = mean(), v = 0;
    for (double s : samples_) v += (s - m) * (s - m);
    return v / static_cast<double>(samples_.size());
}

double ks_distance(const EmpiricalDist& a, const std::function<double(double)>& cdf) {
    const auto& s = a.sorted_samples();
    const double n = static_cast<double>(s.size());
    double d = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        double f = cdf(s[i]);
        d = std::max(d, std::abs((static_cast<double>(i) + 1.0) / n - f));
        d = std::max(d, std::abs(static_cast<double>(i) / n - f));
    }
    return d;
}

double normal_cdf(double x, double mu, double sigma) {
    return 0.5 * std::erfc(-(x - mu) / (sigma * std::sqrt(2.0)));
}

double exponential_cdf(double t) { return t <= 0 ? 0.0 : -std::expm1(-t); }

namespace {

// Lower regularized gamma by series, upper by continued fraction
// (Lentz); standard split at x < s+1.
double gamma_p_series(double s, double x) {
    double sum = 1.0 / s, term = sum, ap = s;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

double gamma_q_cf(double s, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - s, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i < 500; ++i) {
        double an = -static_cast<double>(i) * (static_cast<double>(i) - s);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    return std::exp(-x + s * std::log(x) - std::lgamma(s)) * h;
}

} // namespace

double gamma_q(double s, double x) {
    if (x < 0 || s <= 0) throw std::invalid_argument("gamma_q: bad arguments");
    if (x == 0) return 1.0;
    if (x < s + 1.0) return 1.0 - gamma_p_series(s, x);
    return gamma_q_cf(s, x);
}

double chi_square_sf(double x, double dof) { return gamma_q(0.5 * dof, 0.5 * x); }

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_loglog_slope: need >= 2 points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

MeanStderr batch_stats(const std::vector<double>& batch_means) {
    MeanStderr r;
    const double n = static_cast<double>(batch_means.size());
    for (double m : batch_means) r.mean += m;
    r.mean /= n;
    if (batch_means.size() > 1) {
        double v = 0;
        for (double m : batch_means) v += (m - r.mean) * (m - r.mean);
        r.stderr_ = std::sqrt(v / (n * (n - 1.0)));
    }
    return r;
}

} // namespace intermap
