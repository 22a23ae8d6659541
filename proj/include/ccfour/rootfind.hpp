#pragma once

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ccfour {

// Bracketing bisection. Robust against removable singularities at the
// interval endpoints, which Newton steps are not.
template <class Func>
double bisect(const Func& f, double lo, double hi, double xtol = 1e-13, int max_iter = 200) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo < 0.0) == (fhi < 0.0)) {
        std::ostringstream msg;
        msg << "root not bracketed: f(" << lo << ")=" << flo << ", f(" << hi << ")=" << fhi;
        throw std::runtime_error(msg.str());
    }
    for (int it = 0; it < max_iter && (hi - lo) > xtol; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
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

// Number of sign changes of f over a uniform scan; used to confirm root
// uniqueness claims numerically.
template <class Func>
int count_sign_changes(const Func& f, double lo, double hi, int samples) {
    int changes = 0;
    double prev = f(lo);
    for (int k = 1; k <= samples; ++k) {
        double x = lo + (hi - lo) * k / samples;
        double cur = f(x);
        if (std::isfinite(prev) && std::isfinite(cur) && prev != 0.0 && (cur < 0.0) != (prev < 0.0))
            ++changes;
        prev = cur;
    }
    return changes;
}

}  // namespace ccfour
