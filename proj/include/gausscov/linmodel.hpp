#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "gausscov/errors.hpp"

namespace gausscov {

inline double dot(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

inline double norm2(std::span<const double> v) { return std::sqrt(dot(v, v)); }

/// A response vector together with the full matrix of candidate covariates.
struct Dataset {
    std::vector<double> response;              ///< length n
    std::vector<std::vector<double>> columns;  ///< candidate covariates, each length n
    std::vector<std::string> names;            ///< one label per column
    bool intercept_added = false;              ///< column 0 is all-ones, never a candidate

    std::size_t n_obs() const { return response.size(); }
    std::size_t n_cols() const { return columns.size(); }
};

/// Checks the Dataset invariants: n >= 3, at least one column, matching
/// lengths, finite entries, and an all-ones column 0 when intercept_added.
inline void validate(const Dataset& d) {
    const std::size_t n = d.n_obs();
    if (n < 3)
        throw invalid_input_error("dataset needs at least 3 observations, got " +
                                  std::to_string(n));
    if (d.n_cols() == 0) throw invalid_input_error("dataset has no covariate columns");
    if (d.names.size() != d.n_cols())
        throw invalid_input_error("dataset has " + std::to_string(d.n_cols()) +
                                  " columns but " + std::to_string(d.names.size()) + " names");
    for (double v : d.response)
        if (!std::isfinite(v)) throw invalid_input_error("response contains a non-finite value");
    for (std::size_t j = 0; j < d.n_cols(); ++j) {
        if (d.columns[j].size() != n)
            throw invalid_input_error("column " + d.names[j] + " has length " +
                                      std::to_string(d.columns[j].size()) + ", expected " +
                                      std::to_string(n));
        for (double v : d.columns[j])
            if (!std::isfinite(v))
                throw invalid_input_error("column " + d.names[j] + " contains a non-finite value");
    }
    if (d.intercept_added) {
        for (double v : d.columns[0])
            if (v != 1.0)
                throw invalid_input_error("intercept_added is set but column 0 is not all-ones");
    }
}

/// Returns a copy of d with an all-ones column prepended as column 0.
inline Dataset with_intercept_column(const Dataset& d) {
    if (d.intercept_added) return d;
    Dataset out;
    out.response = d.response;
    out.columns.reserve(d.n_cols() + 1);
    out.columns.emplace_back(d.n_obs(), 1.0);
    out.columns.insert(out.columns.end(), d.columns.begin(), d.columns.end());
    out.names.reserve(d.n_cols() + 1);
    out.names.emplace_back("(intercept)");
    out.names.insert(out.names.end(), d.names.begin(), d.names.end());
    out.intercept_added = true;
    return out;
}

/// The current fit: which columns are included, an orthonormal basis of
/// their span, and the residual of the response against that span.
///
/// Immutable value. add_covariate returns a new state, so states can be
/// shared freely across workers.
struct RegressionState {
    std::vector<std::size_t> included;       ///< column indexes, in inclusion order
    std::vector<std::vector<double>> basis;  ///< orthonormal columns spanning the fit space
    std::vector<double> residual;            ///< response minus its projection

    std::size_t k() const { return included.size(); }
};

/// Projects z onto the orthogonal complement of the included span.
///
/// Classical Gram-Schmidt applied twice; the second pass repairs the
/// orthogonality lost to cancellation, keeping basis'*result at roundoff
/// level even for k in the dozens.
inline std::vector<double> residualize(const RegressionState& state,
                                       std::span<const double> z) {
    if (z.size() != state.residual.size())
        throw invalid_input_error("residualize: vector has length " + std::to_string(z.size()) +
                                  ", state expects " + std::to_string(state.residual.size()));
    std::vector<double> s(z.begin(), z.end());
    for (int pass = 0; pass < 2; ++pass) {
        for (const auto& q : state.basis) {
            const double coeff = dot(q, s);
            for (std::size_t i = 0; i < s.size(); ++i) s[i] -= coeff * q[i];
        }
    }
    return s;
}

/// Starting state: either the empty fit (residual = response) or the
/// intercept-only fit (residual = centered response).
inline RegressionState init_state(const Dataset& d, bool with_intercept) {
    validate(d);
    RegressionState state;
    state.residual = d.response;
    if (!with_intercept) return state;
    if (!d.intercept_added)
        throw invalid_input_error(
            "init_state: with_intercept requested but the dataset has no intercept column");

    const std::size_t n = d.n_obs();
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
    std::vector<double> q(n, inv_sqrt_n);
    const double coeff = dot(q, state.residual);
    for (std::size_t i = 0; i < n; ++i) state.residual[i] -= coeff * q[i];
    state.included.push_back(0);
    state.basis.push_back(std::move(q));
    return state;
}

/// Extends the fit by column j. The residualized column must keep at least
/// collinearity_tol of its original norm, otherwise the candidate is
/// numerically inside the current span and collinearity_error is thrown.
inline RegressionState add_covariate(const RegressionState& state, const Dataset& d,
                                     std::size_t j, double collinearity_tol = 1e-8) {
    if (j >= d.n_cols())
        throw invalid_input_error("add_covariate: column index " + std::to_string(j) +
                                  " out of range");
    if (std::find(state.included.begin(), state.included.end(), j) != state.included.end())
        throw invalid_input_error("add_covariate: column " + std::to_string(j) +
                                  " is already included");

    std::vector<double> s = residualize(state, d.columns[j]);
    const double original_norm = norm2(d.columns[j]);
    const double residual_norm = norm2(s);
    if (residual_norm <= collinearity_tol * original_norm)
        throw collinearity_error("column " + d.names[j] +
                                 " is collinear with the included columns");

    for (double& v : s) v /= residual_norm;

    RegressionState next;
    next.included = state.included;
    next.included.push_back(j);
    next.basis = state.basis;
    next.residual = state.residual;
    const double coeff = dot(s, next.residual);
    for (std::size_t i = 0; i < next.residual.size(); ++i) next.residual[i] -= coeff * s[i];
    next.basis.push_back(std::move(s));
    return next;
}

} // namespace gausscov
