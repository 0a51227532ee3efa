#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

namespace ddc {

// Safeguarded Newton: keeps a bracketing interval [lo, hi] with f(lo) <= 0 <= f(hi)
// and falls back to bisection whenever a Newton step leaves the bracket.
template <class F, class DF>
double newton_bisect(const F& f, const DF& df, double x0, double lo, double hi, double tol = 1e-14,
                     int max_iter = 200) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo > 0.0 || fhi < 0.0) throw std::runtime_error("newton_bisect: root not bracketed");
    double x = std::min(std::max(x0, lo), hi);
    for (int i = 0; i < max_iter; ++i) {
        const double fx = f(x);
        if (fx <= 0.0) lo = x; else hi = x;
        const double dfx = df(x);
        double xn = (dfx != 0.0) ? x - fx / dfx : 0.5 * (lo + hi);
        if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
        if (std::abs(xn - x) <= tol * (1.0 + std::abs(xn))) return xn;
        x = xn;
    }
    return x;
}

// Golden-section maximisation of a unimodal-ish function on [lo, hi].
template <class F>
double golden_max(const F& f, double lo, double hi, double tol = 1e-8, int max_iter = 200) {
    const double invphi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < max_iter && (b - a) > tol; ++i) {
        if (f1 >= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        }
    }
    return f1 >= f2 ? x1 : x2;
}

}  // namespace ddc
