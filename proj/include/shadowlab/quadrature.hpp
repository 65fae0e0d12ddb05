#pragma once

#include <cmath>
#include <cstddef>
#include <functional>

#include "shadowlab/errors.hpp"

namespace shadowlab {

// 15-point Kronrod rule with embedded 7-point Gauss rule on [-1, 1].
// Nodes/weights are the standard QUADPACK values.
struct GK15Result {
    double value;
    double error_estimate;
};

template <typename F>
GK15Result gk15(F&& f, double a, double b) {
    static const double xk[8] = {
        0.991455371120813, 0.949107912342759, 0.864864423359769,
        0.741531185599394, 0.586087235467691, 0.405845151377397,
        0.207784955007898, 0.000000000000000};
    static const double wk[8] = {
        0.022935322010529, 0.063092092629979, 0.104790010322250,
        0.140653259715525, 0.169004726639267, 0.190350578064785,
        0.204432940075298, 0.209482141084728};
    static const double wg[4] = {
        0.129484966168870, 0.279705391489277, 0.381830050505119,
        0.417959183673469};

    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double resk = 0.0, resg = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double dx = h * xk[i];
        double fv;
        if (i == 7) {
            fv = f(c);
            resk += wk[i] * fv;
            resg += wg[3] * fv;
        } else {
            const double f1 = f(c - dx);
            const double f2 = f(c + dx);
            resk += wk[i] * (f1 + f2);
            if (i % 2 == 1) resg += wg[i / 2] * (f1 + f2);
        }
    }
    resk *= h;
    resg *= h;
    return {resk, std::abs(resk - resg)};
}

// Adaptive bisection driven by the Kronrod error estimate.
template <typename F>
double integrate_adaptive(F&& f, double a, double b, double abs_tol,
                          int max_depth = 48) {
    struct Rec {
        static double go(F& f, double a, double b, double tol, int depth) {
            GK15Result r = gk15(f, a, b);
            if (r.error_estimate <= tol || depth <= 0) return r.value;
            const double c = 0.5 * (a + b);
            return go(f, a, c, 0.5 * tol, depth - 1) +
                   go(f, c, b, 0.5 * tol, depth - 1);
        }
    };
    if (!(a <= b)) return -integrate_adaptive(f, b, a, abs_tol, max_depth);
    return Rec::go(f, a, b, abs_tol, max_depth);
}

// Bisection for a continuous monotone (or at least single-crossing) function.
// Requires g(lo) and g(hi) to bracket zero.
template <typename G>
double bisect(G&& g, double lo, double hi, double x_tol, int max_iter = 200) {
    double flo = g(lo);
    double fhi = g(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo < 0.0) == (fhi < 0.0))
        throw NotFoundError("bisect: endpoints do not bracket a root");
    for (int i = 0; i < max_iter && (hi - lo) > x_tol; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = g(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace shadowlab
