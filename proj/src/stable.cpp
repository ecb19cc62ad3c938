#include "intermap/stable.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "intermap/empirical.hpp"
#include "intermap/quadrature.hpp"

namespace intermap {

StableLaw::StableLaw(double p_, double c_, double beta_) : p(p_), c(c_), beta(beta_) {
    bool p_ok = (p > 0 && p < 1) || (p > 1 && p <= 2);
    if (!p_ok) throw std::invalid_argument("StableLaw: p must be in (0,1) u (1,2]");
    if (!(c > 0)) throw std::invalid_argument("StableLaw: c must be > 0");
    if (!(beta >= -1 && beta <= 1)) throw std::invalid_argument("StableLaw: beta in [-1,1]");
}

double StableLaw::cdf(double x) const {
    if (p == 2.0) return normal_cdf(x, 0.0, std::sqrt(2.0 * c));
    const double tau = std::tan(0.5 * M_PI * p);
    QuadStatus st;
    double integral;
    // Envelope e^{-c t^p}; truncate where it is < 1e-20.
    const double u_max = 46.0 / c;
    if (p > 1.0) {
        // Integrand is continuous at t = 0 (limit -x).
        const double t_max = std::pow(u_max, 1.0 / p);
        auto f = [&](double t) {
            if (t == 0.0) return -x;
            double tp = std::pow(t, p);
            return std::exp(-c * tp) * std::sin(c * beta * tau * tp - x * t) / t;
        };
        integral = adaptive_simpson(f, 0.0, t_max, 2.5e-7, st);
    } else {
        // Substitute u = t^p (removes the t^{p-1} endpoint blowup), then
        // u = v^8 so the leftover fractional powers u^{1/p - 1} enter at
        // order >= 7 and the integrand is smooth at the origin.
        const double v_max = std::pow(u_max, 0.125);
        auto f = [&](double v) {
            if (v == 0.0) return 0.0;
            double u = std::pow(v, 8.0);
            double t = std::pow(v, 8.0 / p);
            return 8.0 * std::exp(-c * u) * std::sin(c * beta * tau * u - x * t) / v;
        };
        integral = (1.0 / p) * adaptive_simpson(f, 0.0, v_max, 2.5e-7 * p, st);
    }
    if (!st.converged)
        throw std::runtime_error("StableLaw::cdf: quadrature not converged, residual error " +
                                 std::to_string(st.worst_err));
    double F = 0.5 - integral / M_PI;
    if (F < 0) F = 0;
    if (F > 1) F = 1;
    return F;
}

double StableLaw::tail_c1() const {
    if (p == 2.0) throw std::domain_error("tail_c1: Gaussian tail is not polynomial");
    return 0.5 * (1.0 + beta) * c / (std::tgamma(1.0 - p) * std::cos(0.5 * M_PI * p));
}

std::function<double(double)> tabulated_cdf(const StableLaw& law, double lo, double hi,
                                            int points) {
    if (!(hi > lo) || points < 2) throw std::invalid_argument("tabulated_cdf: bad grid");
    auto grid = std::make_shared<std::vector<double>>();
    grid->reserve(static_cast<std::size_t>(points));
    const double dx = (hi - lo) / static_cast<double>(points - 1);
    for (int i = 0; i < points; ++i) grid->push_back(law.cdf(lo + dx * i));
    return [grid, lo, hi, dx, points](double x) {
        if (x <= lo) return (*grid)[0];
        if (x >= hi) return (*grid)[static_cast<std::size_t>(points - 1)];
        double s = (x - lo) / dx;
        auto i = static_cast<std::size_t>(s);
        double w = s - static_cast<double>(i);
        return (1.0 - w) * (*grid)[i] + w * (*grid)[i + 1];
    };
}

} // namespace intermap
