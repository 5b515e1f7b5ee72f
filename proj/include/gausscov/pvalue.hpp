#pragma once

#include <cmath>
#include <string>

#include "gausscov/errors.hpp"
#include "gausscov/specfun.hpp"

namespace gausscov {

/// Single-candidate and selection-adjusted p-values for one step.
struct PValueResult {
    double p_single;    ///< upper-tail probability of one F(1, dendf)
    double p_adjusted;  ///< 1 - (1 - p_single)^q
    int q;              ///< candidates in contention
    double f_obs;       ///< the observed (maximal) F value
    int dendf;
};

/// Upper-tail p-value of F(1, dendf) at f_obs. The infinite-F sentinel
/// maps to 0. Evaluated through the survival function so that values far
/// into the tail keep full relative precision.
inline double p_single(double f_obs, int dendf) {
    if (dendf < 1)
        throw invalid_input_error("p_single: dendf must be >= 1, got " + std::to_string(dendf));
    if (std::isnan(f_obs) || f_obs < 0.0)
        throw invalid_input_error("p_single: f_obs must be nonnegative");
    if (std::isinf(f_obs)) return 0.0;
    return f_sf(FParams{1.0, static_cast<double>(dendf)}, f_obs);
}

/// Best-of-q adjustment 1 - (1 - p)^q, computed as -expm1(q * log1p(-p)).
/// Naive powering returns exactly 0 once (1-p) rounds to 1, which happens
/// already at p ~ 1e-17; this form keeps relative precision for q up to
/// 1e5 and p down to the underflow threshold.
inline double adjust_p_for_selection(double p, int q) {
    if (q < 1) throw invalid_input_error("adjust_p_for_selection: q must be >= 1");
    if (!(p >= 0.0) || !(p <= 1.0))
        throw invalid_input_error("adjust_p_for_selection: p must lie in [0, 1]");
    if (q == 1) return p;
    if (p >= 1.0) return 1.0;
    return -std::expm1(static_cast<double>(q) * std::log1p(-p));
}

/// p-value for selecting the largest F among q candidates.
inline PValueResult p_best_of_q(double f_max, int dendf, int q) {
    if (q < 1) throw invalid_input_error("p_best_of_q: q must be >= 1, got " + std::to_string(q));
    const double p1 = p_single(f_max, dendf);
    return {p1, adjust_p_for_selection(p1, q), q, f_max, dendf};
}

} // namespace gausscov
