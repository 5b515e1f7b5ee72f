#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "gausscov/errors.hpp"
#include "gausscov/linmodel.hpp"
#include "gausscov/pvalue.hpp"
#include "gausscov/statistic.hpp"

namespace gausscov {

struct SelectionConfig {
    double alpha = 0.01;                    ///< stop when the adjusted p-value reaches this
    std::optional<std::size_t> max_steps;   ///< cap on accepted inclusions; default: all candidates
    bool with_intercept = true;
    double collinearity_tol = 1e-8;
    bool count_rejected_in_q = false;       ///< count collinearity-rejected candidates toward q
};

struct CandidateScore {
    std::size_t index;
    double B;
    double F;
    double p_single;
};

struct StepRecord {
    std::size_t step;    ///< 1-based
    std::size_t chosen;  ///< column index attaining f_max
    std::size_t q;       ///< candidates in contention at this step
    double f_max;
    double p_adjusted;
    bool accepted;
    std::vector<CandidateScore> scores;  ///< in column order
};

enum class StopReason { threshold, max_steps, exhausted, perfect_fit };

inline const char* to_string(StopReason r) {
    switch (r) {
        case StopReason::threshold: return "threshold";
        case StopReason::max_steps: return "max_steps";
        case StopReason::exhausted: return "exhausted";
        case StopReason::perfect_fit: return "perfect_fit";
    }
    return "unknown";
}

struct SelectionTrace {
    std::vector<StepRecord> steps;
    std::vector<std::size_t> final_included;
    StopReason stop_reason = StopReason::exhausted;
};

namespace detail {

inline std::vector<std::size_t> candidate_columns(const RegressionState& state,
                                                  const Dataset& d) {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < d.n_cols(); ++j) {
        if (d.intercept_added && j == 0) continue;
        if (std::find(state.included.begin(), state.included.end(), j) != state.included.end())
            continue;
        out.push_back(j);
    }
    return out;
}

} // namespace detail

/// Scores every candidate column against the current residual: B, F and
/// the single-candidate p-value, with dendf = n - k - 1 for the k columns
/// included so far. Collinear candidates are silently dropped from the
/// result; the returned list is in column order.
inline std::vector<CandidateScore> score_candidates(const RegressionState& state,
                                                    const Dataset& d,
                                                    const SelectionConfig& cfg) {
    const auto candidates = detail::candidate_columns(state, d);
    if (candidates.empty())
        throw invalid_input_error("score_candidates: no non-included candidate column exists");
    const std::ptrdiff_t dendf_signed =
        static_cast<std::ptrdiff_t>(d.n_obs()) - static_cast<std::ptrdiff_t>(state.k()) - 1;
    if (dendf_signed < 1)
        throw degrees_of_freedom_error("score_candidates: n - k - 1 = " +
                                       std::to_string(dendf_signed) +
                                       ", too few observations to score a candidate");
    const int dendf = static_cast<int>(dendf_signed);

    std::vector<CandidateScore> scores;
    scores.reserve(candidates.size());
    for (std::size_t j : candidates) {
        const std::vector<double> s = residualize(state, d.columns[j]);
        if (norm2(s) <= cfg.collinearity_tol * norm2(d.columns[j])) continue;
        const StatResult stat = compute_stat(state.residual, s, dendf);
        scores.push_back({j, stat.B, stat.F, p_single(stat.F, dendf)});
    }
    return scores;
}

/// Greedy forward selection controlled by best-of-q adjusted p-values.
///
/// Each step scores all remaining candidates, takes the largest F, adjusts
/// its p-value for having chosen the best of q, and includes the winner if
/// the adjusted p-value is below alpha. The step that fails the threshold
/// is still recorded. Ties on F go to the lowest column index, so traces
/// are deterministic.
inline SelectionTrace forward_select(const Dataset& dataset, const SelectionConfig& cfg) {
    if (!(cfg.alpha > 0.0) || !(cfg.alpha < 1.0))
        throw invalid_input_error("forward_select: alpha must lie in (0, 1), got " +
                                  std::to_string(cfg.alpha));
    if (cfg.max_steps && *cfg.max_steps < 1)
        throw invalid_input_error("forward_select: max_steps must be >= 1");
    if (!(cfg.collinearity_tol > 0.0))
        throw invalid_input_error("forward_select: collinearity_tol must be positive");
    validate(dataset);

    Dataset augmented;
    if (cfg.with_intercept && !dataset.intercept_added)
        augmented = with_intercept_column(dataset);
    const Dataset& d = augmented.n_cols() > 0 ? augmented : dataset;
    RegressionState state = init_state(d, cfg.with_intercept);
    const double response_norm = norm2(d.response);

    const std::size_t total_candidates = detail::candidate_columns(state, d).size();
    const std::size_t max_steps = cfg.max_steps.value_or(total_candidates);

    SelectionTrace trace;
    std::size_t accepted_count = 0;
    for (;;) {
        const auto candidates = detail::candidate_columns(state, d);
        if (candidates.empty()) {
            trace.stop_reason = StopReason::exhausted;
            break;
        }
        if (norm2(state.residual) < 1e-12 * response_norm) {
            trace.stop_reason = StopReason::perfect_fit;
            break;
        }
        if (accepted_count >= max_steps) {
            trace.stop_reason = StopReason::max_steps;
            break;
        }

        const auto scores = score_candidates(state, d, cfg);
        if (scores.empty()) {
            trace.stop_reason = StopReason::exhausted;
            break;
        }

        // scores are in ascending column order; strict comparison keeps the
        // lowest index on ties
        std::size_t best = 0;
        for (std::size_t i = 1; i < scores.size(); ++i)
            if (scores[i].F > scores[best].F) best = i;

        const std::size_t q = cfg.count_rejected_in_q ? candidates.size() : scores.size();
        const int dendf =
            static_cast<int>(d.n_obs()) - static_cast<int>(state.k()) - 1;
        const PValueResult pv = p_best_of_q(scores[best].F, dendf, static_cast<int>(q));
        const bool accepted = pv.p_adjusted < cfg.alpha;

        trace.steps.push_back({trace.steps.size() + 1, scores[best].index, q, pv.f_obs,
                               pv.p_adjusted, accepted, scores});
        if (!accepted) {
            trace.stop_reason = StopReason::threshold;
            break;
        }
        state = add_covariate(state, d, scores[best].index, cfg.collinearity_tol);
        ++accepted_count;
    }
    trace.final_included = state.included;
    return trace;
}

} // namespace gausscov
