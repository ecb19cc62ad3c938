#include "intermap/quadrature.hpp"

#include <cmath>

namespace intermap {

namespace {

double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a, double b, double fa,
                     double fm, double fb, double whole, double tol, int depth,
                     QuadStatus& st) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = simpson(a, m, fa, flm, fm);
    double right = simpson(m, b, fm, frm, fb);
    double err = (left + right - whole) / 15.0;
    if (std::abs(err) <= tol || depth <= 0) {
        if (depth <= 0 && std::abs(err) > tol) {
            st.converged = false;
            st.worst_err = std::max(st.worst_err, std::abs(err));
        }
        return left + right + err;
    }
    return adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, st) +
           adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, st);
}

} // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, QuadStatus& st) {
    double m = 0.5 * (a + b);
    double fa = f(a), fm = f(m), fb = f(b);
    double whole = simpson(a, b, fa, fm, fb);
    return adaptive_step(f, a, b, fa, fm, fb, whole, tol, 48, st);
}

} // namespace intermap
