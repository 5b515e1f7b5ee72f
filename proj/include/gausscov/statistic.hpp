#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <string>

#include "gausscov/errors.hpp"
#include "gausscov/linmodel.hpp"
#include "gausscov/specfun.hpp"

namespace gausscov {

/// Sentinel for a perfect fit: the candidate absorbs the whole residual.
inline constexpr double infinite_f = std::numeric_limits<double>::infinity();

/// The B statistic together with its F transform.
struct StatResult {
    double B;   ///< in [0, 1]
    double F;   ///< dendf * (1-B)/B, or infinite_f when B is 0
    int dendf;  ///< denominator degrees of freedom, n - k - 1
};

/// Fraction of the residual sum of squares that the candidate leaves
/// unexplained:
///
///   B = 1 - (r's)^2 / (s's * r'r)
///
/// One pass, three dot products. The quadratic-form definition through the
/// rank-one projector s s'/s's gives the same value and survives only in
/// test oracles; forming it costs O(n^2).
inline double compute_B(std::span<const double> r, std::span<const double> s) {
    if (r.size() != s.size())
        throw invalid_input_error("compute_B: vectors have lengths " + std::to_string(r.size()) +
                                  " and " + std::to_string(s.size()));
    double rr = 0.0, ss = 0.0, rs = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        rr += r[i] * r[i];
        ss += s[i] * s[i];
        rs += r[i] * s[i];
    }
    if (rr == 0.0) throw degenerate_input_error("compute_B: residual vector has zero norm");
    if (ss == 0.0) throw degenerate_input_error("compute_B: candidate vector has zero norm");

    const double value = 1.0 - (rs * rs) / (ss * rr);
    // Cauchy-Schwarz bounds B to [0, 1]; only roundoff-sized excursions are
    // forgiven, anything larger is a logic bug upstream.
    if (value < 0.0) {
        if (value >= -1e-12) return 0.0;
        throw accuracy_error("compute_B: value " + std::to_string(value) + " below 0");
    }
    if (value > 1.0) {
        if (value <= 1.0 + 1e-12) return 1.0;
        throw accuracy_error("compute_B: value " + std::to_string(value) + " above 1");
    }
    return value;
}

/// B and F for one candidate. B below 1e-14 maps to the infinite-F
/// sentinel rather than an overflowing quotient.
inline StatResult compute_stat(std::span<const double> r, std::span<const double> s, int dendf) {
    if (dendf < 1)
        throw invalid_input_error("compute_stat: dendf must be >= 1, got " +
                                  std::to_string(dendf));
    const double b = compute_B(r, s);
    if (b < 1e-14) return {b, infinite_f, dendf};
    return {b, beta_f_bridge(b, static_cast<double>(dendf)), dendf};
}

} // namespace gausscov
