#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace ddc {

// Adaptive Gauss(7)-Kronrod(15) quadrature on an interval stack.
// Integrands here are smooth exponentials, so plain interval bisection on the
// G7/K15 error estimate converges quickly.
template <class F>
double quad_gk(const F& f, double a, double b, double abs_tol = 1e-10, double rel_tol = 1e-10) {
    // Kronrod abscissae with embedded Gauss weights (node, gauss_w, kronrod_w).
    static const double nw[8][3] = {
        {0.000000000000000, 0.417959183673469, 0.209482141084728},
        {0.405845151377397, 0.381830050505119, 0.190350578064785},
        {0.741531185599394, 0.279705391489277, 0.140653259715525},
        {0.949107912342759, 0.129484966168870, 0.063092092629979},
        {0.207784955007898, 0.0, 0.204432940075298},
        {0.586087235467691, 0.0, 0.169004726639267},
        {0.864864423359769, 0.0, 0.104790010322250},
        {0.991455371120813, 0.0, 0.022935322010529},
    };
    if (a == b) return 0.0;
    const auto rule = [&](double lo, double hi, double& err) {
        const double mid = 0.5 * (lo + hi);
        const double h = hi - mid;
        const double f0 = f(mid);
        double g = nw[0][1] * f0;
        double k = nw[0][2] * f0;
        for (int i = 1; i < 8; ++i) {
            const double dx = h * nw[i][0];
            const double fi = f(mid + dx) + f(mid - dx);
            g += nw[i][1] * fi;
            k += nw[i][2] * fi;
        }
        g *= h;
        k *= h;
        err = std::abs(k - g);
        return k;
    };

    struct Seg {
        double lo, hi, val, err;
    };
    std::vector<Seg> stack;
    double err0;
    double val0 = rule(a, b, err0);
    stack.push_back({a, b, val0, err0});

    double total = 0.0;
    double total_err = 0.0;
    int max_segments = 4000;
    while (!stack.empty()) {
        Seg s = stack.back();
        stack.pop_back();
        const double width = std::abs(s.hi - s.lo);
        if (s.err <= abs_tol || s.err <= rel_tol * std::abs(s.val) || width < 1e-14 * (1.0 + std::abs(s.lo)) ||
            --max_segments <= 0) {
            total += s.val;
            total_err += s.err;
            continue;
        }
        const double mid = 0.5 * (s.lo + s.hi);
        double e1, e2;
        const double v1 = rule(s.lo, mid, e1);
        const double v2 = rule(mid, s.hi, e2);
        stack.push_back({s.lo, mid, v1, 0.5 * e1});
        stack.push_back({mid, s.hi, v2, 0.5 * e2});
    }
    (void)total_err;
    return total;
}

// Integrates across a list of interior breakpoints (kinks of the integrand).
template <class F>
double quad_gk_segmented(const F& f, double a, double b, std::vector<double> breaks, double abs_tol = 1e-10,
                         double rel_tol = 1e-10) {
    breaks.push_back(a);
    breaks.push_back(b);
    std::sort(breaks.begin(), breaks.end());
    double total = 0.0;
    for (size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double lo = breaks[i], hi = breaks[i + 1];
        if (hi <= a || lo >= b || hi <= lo) continue;
        total += quad_gk(f, std::max(lo, a), std::min(hi, b), abs_tol, rel_tol);
    }
    return total;
}

}  // namespace ddc
