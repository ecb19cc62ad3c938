#pragma once

#include <functional>

namespace intermap {

/// Stable law X(p, c, beta) with characteristic function
///   E e^{itX} = exp(-c |t|^p (1 - i beta sgn(t) tan(p pi / 2))).
/// p = 2 degenerates to a centered Gaussian with variance 2c (c = 1/2
/// gives the standard normal).
struct StableLaw {
    double p;    // index, in (0,1) u (1,2]
    double c;    // scale, > 0
    double beta; // skewness, in [-1,1]

    StableLaw(double p_, double c_, double beta_);

    /// CDF by Gil-Pelaez inversion of the characteristic function,
    /// absolute error <= 1e-6.
    double cdf(double t) const;

    /// Upper tail constant: m(X > t) ~ c1 t^{-p} for p < 2.
    double tail_c1() const;
};

/// Piecewise-linear interpolant of the CDF on a uniform grid over
/// [lo, hi]; cheap enough to call per-sample in KS computations.
std::function<double(double)> tabulated_cdf(const StableLaw& law, double lo, double hi,
                                            int points = 2001);

} // namespace intermap
