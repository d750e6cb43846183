#pragma once

#include <cmath>
#include <limits>

#include "pass/errors.hpp"

namespace pass::detail {

/// argmax over [lo, hi] of min{fa(x)/wa, fb(x)/wb} when one of fa, fb is
/// nondecreasing and the other nonincreasing. A zero weight removes its term.
///
/// The optimum is either an endpoint (one term dominates on the whole
/// interval) or the crossing fa/wa = fb/wb, located by bisection on
/// wb*fa - wa*fb, which keeps the weights out of the denominators. Ties go to lo.
template <class Fa, class Fb>
double maximize_weighted_min(double lo, double hi, Fa&& fa, double wa, Fb&& fb, double wb,
                             double tol, int max_iter = 200) {
    if (!(hi > lo)) return lo;
    auto best_end = [&](auto&& f) { return f(hi) > f(lo) ? hi : lo; };
    if (wa == 0.0) return best_end(fb);
    if (wb == 0.0) return best_end(fa);

    auto gap = [&](double x) { return wb * fa(x) - wa * fb(x); };
    double g_lo = gap(lo);
    const double g_hi = gap(hi);
    if (!std::isfinite(g_lo) || !std::isfinite(g_hi))
        throw InternalConsistency("rate functions returned a non-finite value");

    if (g_lo >= 0.0 && g_hi >= 0.0) return best_end(fb);  // fb/wb binds everywhere
    if (g_lo <= 0.0 && g_hi <= 0.0) return best_end(fa);  // fa/wa binds everywhere

    for (int it = 0; it < max_iter && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double g = gap(mid);
        if (!std::isfinite(g)) throw InternalConsistency("bisection left its bracket");
        if ((g < 0.0) == (g_lo < 0.0)) {
            lo = mid;
            g_lo = g;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Root of f on a sign-changing bracket [lo, hi]; Newton steps that would
/// leave the bracket are replaced by bisection.
template <class F, class DF>
double safeguarded_newton(F&& f, DF&& df, double lo, double hi, int max_iter = 80,
                          double xtol = 0.0) {
    double f_lo = f(lo);
    const double f_hi = f(hi);
    if (f_lo == 0.0) return lo;
    if (f_hi == 0.0) return hi;
    if ((f_lo < 0.0) == (f_hi < 0.0)) throw InternalConsistency("root is not bracketed");
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < max_iter; ++it) {
        const double fx = f(x);
        if (fx == 0.0) return x;
        if ((fx < 0.0) == (f_lo < 0.0)) {
            lo = x;
            f_lo = fx;
        } else {
            hi = x;
        }
        if (hi - lo <= xtol) break;
        const double d = df(x);
        double next = (d != 0.0 && std::isfinite(d)) ? x - fx / d
                                                      : std::numeric_limits<double>::quiet_NaN();
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == x) break;
        x = next;
    }
    return x;
}

} // namespace pass::detail
