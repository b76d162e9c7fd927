#pragma once

#include <cmath>
#include <optional>

namespace offswitch {

/**
 * Smallest x in [lo, hi] with f(x) <= 0, for f that is positive on a prefix
 * of the interval and non-positive afterwards. Returns nullopt when f stays
 * positive at hi. Bisects until the bracket is narrower than `tolerance`.
 */
template <class F>
std::optional<double> bisect_first_nonpositive(F&& f, double lo, double hi, double tolerance,
                                               int max_iterations = 200) {
    if (f(lo) <= 0.0) return lo;
    if (f(hi) > 0.0) return std::nullopt;
    for (int i = 0; i < max_iterations && hi - lo > tolerance; ++i) {
        const double mid = lo + 0.5 * (hi - lo);
        if (f(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return hi;
}

} // namespace offswitch
