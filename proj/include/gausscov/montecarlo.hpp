#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gausscov/errors.hpp"
#include "gausscov/linmodel.hpp"
#include "gausscov/parallel.hpp"
#include "gausscov/pvalue.hpp"
#include "gausscov/rng.hpp"
#include "gausscov/specfun.hpp"
#include "gausscov/statistic.hpp"

namespace gausscov {

enum class McScheme { gaussian_covariate, standard_model };

inline const char* to_string(McScheme s) {
    return s == McScheme::gaussian_covariate ? "gaussian_covariate" : "standard_model";
}

/// Distribution of the fixed response in the covariate-sampling scheme.
/// The Beta law of B holds for any fixed response; the heavy-tailed option
/// exercises exactly that.
enum class YDist { normal, student_t3 };

inline const char* to_string(YDist d) { return d == YDist::normal ? "normal" : "t3"; }

struct McConfig {
    std::size_t n = 20;       ///< sample size
    std::size_t k = 3;        ///< included-column count
    std::size_t reps = 100000;
    std::uint64_t seed = 1;
    double sigma_z = 1.0;     ///< candidate noise scale
    double sigma = 1.0;       ///< response noise scale (standard-model scheme)
    std::size_t q = 2;        ///< candidates per replication in the max experiment
    YDist y_dist = YDist::normal;
};

inline void validate(const McConfig& cfg) {
    if (cfg.n < 3) throw invalid_input_error("mc config: n must be at least 3");
    if (cfg.n < cfg.k + 2)
        throw degrees_of_freedom_error("mc config: need n - k - 1 >= 1, got n=" +
                                       std::to_string(cfg.n) + " k=" + std::to_string(cfg.k));
    if (cfg.reps < 1000) throw invalid_input_error("mc config: reps must be at least 1000");
    if (!(cfg.sigma_z > 0.0)) throw invalid_input_error("mc config: sigma_z must be positive");
    if (!(cfg.sigma > 0.0)) throw invalid_input_error("mc config: sigma must be positive");
    if (cfg.q < 1) throw invalid_input_error("mc config: q must be at least 1");
}

struct McReport {
    McScheme scheme;
    double ks_stat;
    BetaParams beta_params;
    double empirical_mean;
    double theoretical_mean;
    std::size_t reps;
};

/// Sup-norm distance between the empirical CDF of sorted samples and a
/// reference CDF, exact over the sample points: at each order statistic
/// the empirical CDF jumps from i/m to (i+1)/m, and the supremum is
/// attained against one of the two.
inline double ks_distance(std::span<const double> sorted_samples,
                          const std::function<double(double)>& cdf) {
    const std::size_t m = sorted_samples.size();
    if (m == 0) throw invalid_input_error("ks_distance: empty sample");
    double worst = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double x = sorted_samples[i];
        if (!std::isfinite(x)) throw invalid_input_error("ks_distance: non-finite sample");
        if (i + 1 < m && sorted_samples[i + 1] < x)
            throw invalid_input_error("ks_distance: samples are not sorted");
        const double fx = cdf(x);
        worst = std::max(worst, fx - static_cast<double>(i) / static_cast<double>(m));
        worst = std::max(worst, static_cast<double>(i + 1) / static_cast<double>(m) - fx);
    }
    return worst;
}

/// Two-sample KS distance between two sorted samples. Tied values are
/// consumed on both sides before the gap is measured.
inline double ks_two_sample(std::span<const double> a_sorted, std::span<const double> b_sorted) {
    if (a_sorted.empty() || b_sorted.empty())
        throw invalid_input_error("ks_two_sample: empty sample");
    const double na = static_cast<double>(a_sorted.size());
    const double nb = static_cast<double>(b_sorted.size());
    std::size_t i = 0, j = 0;
    double worst = 0.0;
    while (i < a_sorted.size() && j < b_sorted.size()) {
        const double x = std::min(a_sorted[i], b_sorted[j]);
        while (i < a_sorted.size() && a_sorted[i] <= x) ++i;
        while (j < b_sorted.size() && b_sorted[j] <= x) ++j;
        worst = std::max(worst, std::abs(static_cast<double>(i) / na -
                                         static_cast<double>(j) / nb));
    }
    return worst;
}

namespace detail {

// Stream tags for the fixed design and the per-replication draws. Each
// sampler owns its replication tag, so samples from different schemes are
// independent and two-sample comparisons between them are honest.
inline constexpr std::uint64_t stream_design_x = 1;
inline constexpr std::uint64_t stream_response = 2;
inline constexpr std::uint64_t stream_candidate = 3;
inline constexpr std::uint64_t stream_coefficients = 4;
inline constexpr std::uint64_t stream_rep_covariate = 100;
inline constexpr std::uint64_t stream_rep_standard = 101;
inline constexpr std::uint64_t stream_rep_max_experiment = 102;

inline std::vector<double> draw_normal_vector(RandomStream& rs, std::size_t n, double scale) {
    std::vector<double> v(n);
    for (double& x : v) x = scale * rs.normal();
    return v;
}

// The fixed part of a simulation: k included columns orthonormalized into a
// RegressionState, plus the response residual. Identical for every
// replication of a given seed.
struct FixedDesign {
    Dataset data;
    RegressionState state;
};

inline FixedDesign make_fixed_design(const McConfig& cfg) {
    FixedDesign fd;
    RandomStream xs(cfg.seed, stream_design_x);
    for (std::size_t j = 0; j < cfg.k; ++j) {
        fd.data.columns.push_back(draw_normal_vector(xs, cfg.n, 1.0));
        fd.data.names.push_back("x" + std::to_string(j + 1));
    }
    RandomStream ys(cfg.seed, stream_response);
    fd.data.response.resize(cfg.n);
    for (double& y : fd.data.response)
        y = cfg.y_dist == YDist::normal ? ys.normal() : ys.student_t3();

    fd.state.residual = fd.data.response;
    for (std::size_t j = 0; j < cfg.k; ++j)
        fd.state = add_covariate(fd.state, fd.data, j);
    return fd;
}

template <typename PerRep>
std::vector<double> run_reps(const McConfig& cfg, std::uint64_t rep_stream, unsigned threads,
                             PerRep&& per_rep) {
    std::vector<double> samples(cfg.reps);
    parallel_chunks(cfg.reps, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t rep = begin; rep < end; ++rep) {
            RandomStream rs(cfg.seed, rep_stream, rep);
            samples[rep] = per_rep(rs);
        }
    });
    return samples;
}

// Statistics are reduced serially in replication order, so the report is a
// pure function of the config no matter how many workers filled the buffer.
inline McReport make_report(McScheme scheme, std::vector<double> samples,
                            const BetaParams& law) {
    double sum = 0.0;
    for (double v : samples) sum += v;
    std::sort(samples.begin(), samples.end());
    McReport rep;
    rep.scheme = scheme;
    rep.beta_params = law;
    rep.ks_stat = ks_distance(samples, [&law](double x) { return beta_cdf(law, x); });
    rep.empirical_mean = sum / static_cast<double>(samples.size());
    rep.theoretical_mean = law.a / (law.a + law.b);
    rep.reps = samples.size();
    return rep;
}

} // namespace detail

/// Beta parameters of the null law of B for a given configuration:
/// Beta((n-k-1)/2, 1/2).
inline BetaParams null_beta_params(const McConfig& cfg) {
    return {0.5 * static_cast<double>(cfg.n - cfg.k - 1), 0.5};
}

/// B samples under the covariate-sampling scheme: the design and response
/// are fixed once per seed, and each replication draws a fresh Gaussian
/// candidate, residualizes it, and evaluates B against the fixed residual.
inline std::vector<double> sample_B_gaussian_covariate(const McConfig& cfg,
                                                       unsigned threads = 0) {
    validate(cfg);
    const detail::FixedDesign fd = detail::make_fixed_design(cfg);
    return detail::run_reps(cfg, detail::stream_rep_covariate, threads, [&](RandomStream& rs) {
        const auto z = detail::draw_normal_vector(rs, cfg.n, cfg.sigma_z);
        const auto s = residualize(fd.state, z);
        return compute_B(fd.state.residual, s);
    });
}

/// B samples under the standard model: the design, one candidate and the
/// coefficient vector are fixed, and each replication draws a fresh
/// response around the regression surface.
inline std::vector<double> sample_B_standard_model(const McConfig& cfg, unsigned threads = 0) {
    validate(cfg);
    const detail::FixedDesign fd = detail::make_fixed_design(cfg);

    RandomStream zs(cfg.seed, detail::stream_candidate);
    const auto z = detail::draw_normal_vector(zs, cfg.n, cfg.sigma_z);
    const auto s = residualize(fd.state, z);
    if (norm2(s) == 0.0)
        throw degenerate_input_error("standard-model scheme: fixed candidate is collinear");

    RandomStream bs(cfg.seed, detail::stream_coefficients);
    std::vector<double> surface(cfg.n, 0.0);
    for (std::size_t j = 0; j < cfg.k; ++j) {
        const double beta_j = bs.normal();
        for (std::size_t i = 0; i < cfg.n; ++i) surface[i] += beta_j * fd.data.columns[j][i];
    }

    return detail::run_reps(cfg, detail::stream_rep_standard, threads, [&](RandomStream& rs) {
        std::vector<double> y(cfg.n);
        for (std::size_t i = 0; i < cfg.n; ++i) y[i] = surface[i] + cfg.sigma * rs.normal();
        const auto r = residualize(fd.state, y);
        return compute_B(r, s);
    });
}

/// Adjusted p-values of the best of q candidates, one per replication.
/// Under the null these are Uniform(0, 1).
inline std::vector<double> sample_max_adjusted_pvalues(const McConfig& cfg,
                                                       unsigned threads = 0) {
    validate(cfg);
    const detail::FixedDesign fd = detail::make_fixed_design(cfg);
    const int dendf = static_cast<int>(cfg.n - cfg.k - 1);
    return detail::run_reps(cfg, detail::stream_rep_max_experiment, threads,
                            [&](RandomStream& rs) {
        double f_max = 0.0;
        for (std::size_t c = 0; c < cfg.q; ++c) {
            const auto z = detail::draw_normal_vector(rs, cfg.n, cfg.sigma_z);
            const auto s = residualize(fd.state, z);
            const StatResult stat = compute_stat(fd.state.residual, s, dendf);
            if (c == 0 || stat.F > f_max) f_max = stat.F;
        }
        return p_best_of_q(f_max, dendf, static_cast<int>(cfg.q)).p_adjusted;
    });
}

/// KS report of B(r, S) against Beta((n-k-1)/2, 1/2) under the
/// covariate-sampling scheme.
inline McReport simulate_B_gaussian_covariate(const McConfig& cfg, unsigned threads = 0) {
    return detail::make_report(McScheme::gaussian_covariate,
                               sample_B_gaussian_covariate(cfg, threads),
                               null_beta_params(cfg));
}

/// KS report of B(R, s) against the same Beta law under the standard model.
inline McReport simulate_B_standard_model(const McConfig& cfg, unsigned threads = 0) {
    return detail::make_report(McScheme::standard_model, sample_B_standard_model(cfg, threads),
                               null_beta_params(cfg));
}

/// KS report of the best-of-q adjusted p-values against Uniform(0, 1),
/// reported as Beta(1, 1).
inline McReport simulate_max_pvalue_uniformity(const McConfig& cfg, unsigned threads = 0) {
    return detail::make_report(McScheme::gaussian_covariate,
                               sample_max_adjusted_pvalues(cfg, threads), BetaParams{1.0, 1.0});
}

} // namespace gausscov
