#pragma once

#include <functional>

namespace intermap {

struct QuadStatus {
    double worst_err = 0;
    bool converged = true;
};

/// Adaptive Simpson with Richardson error control; panels that fail to
/// meet their tolerance budget at maximum depth mark the status instead
/// of throwing, so the caller decides what non-convergence means.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, QuadStatus& st);

} // namespace intermap
