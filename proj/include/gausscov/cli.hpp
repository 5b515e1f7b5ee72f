#pragma once

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gausscov/csv.hpp"
#include "gausscov/errors.hpp"
#include "gausscov/json_writer.hpp"
#include "gausscov/montecarlo.hpp"
#include "gausscov/selection.hpp"
#include "gausscov/version.hpp"

namespace gausscov::cli {

namespace detail {

/// Worker cap from the GCOV_THREADS environment variable; 0 means "decide
/// from the hardware". The cap never changes any reported number, only how
/// the replication loop is partitioned.
inline unsigned threads_from_env() {
    const char* raw = std::getenv("GCOV_THREADS");
    if (raw == nullptr || *raw == '\0') return 0;
    char* end = nullptr;
    const unsigned long v = std::strtoul(raw, &end, 10);
    if (end == raw || *end != '\0' || v > 1024)
        throw invalid_input_error("GCOV_THREADS must be an integer in [0, 1024], got \"" +
                                  std::string(raw) + "\"");
    return static_cast<unsigned>(v);
}

inline void write_mc_report(JsonWriter& w, const McReport& rep) {
    w.begin_object();
    w.key("scheme");
    w.value(to_string(rep.scheme));
    w.key("ks_stat");
    w.value(rep.ks_stat);
    w.key("beta_params");
    w.begin_object();
    w.key("a");
    w.value(rep.beta_params.a);
    w.key("b");
    w.value(rep.beta_params.b);
    w.end_object();
    w.key("empirical_mean");
    w.value(rep.empirical_mean);
    w.key("theoretical_mean");
    w.value(rep.theoretical_mean);
    w.key("reps");
    w.value(rep.reps);
    w.end_object();
}

inline void write_trace(JsonWriter& w, const SelectionTrace& trace) {
    w.begin_object();
    w.key("steps");
    w.begin_array();
    for (const auto& step : trace.steps) {
        w.begin_object();
        w.key("step");
        w.value(step.step);
        w.key("chosen");
        w.value(step.chosen);
        w.key("q");
        w.value(step.q);
        w.key("f_max");
        w.value(step.f_max);
        w.key("p_adjusted");
        w.value(step.p_adjusted);
        w.key("accepted");
        w.value(step.accepted);
        w.key("scores");
        w.begin_array();
        for (const auto& sc : step.scores) {
            w.begin_object();
            w.key("index");
            w.value(sc.index);
            w.key("B");
            w.value(sc.B);
            w.key("F");
            w.value(sc.F);
            w.key("p_single");
            w.value(sc.p_single);
            w.end_object();
        }
        w.end_array();
        w.end_object();
    }
    w.end_array();
    w.key("final_included");
    w.begin_array();
    for (std::size_t j : trace.final_included) w.value(j);
    w.end_array();
    w.key("stop_reason");
    w.value(to_string(trace.stop_reason));
    w.end_object();
}

struct SelectArgs {
    std::string data;
    std::string response;
    std::vector<std::string> drop;
    double alpha = 0.01;
    bool with_intercept = true;
    std::optional<std::size_t> max_steps;
    double tol = 1e-8;
    bool count_rejected_in_q = false;
};

struct VerifyArgs {
    McConfig cfg;
    std::string scheme = "covariate";
    std::string y_dist = "normal";
};

inline void write_verify_config(JsonWriter& w, const VerifyArgs& a, bool with_q) {
    w.begin_object();
    w.key("n");
    w.value(a.cfg.n);
    w.key("k");
    w.value(a.cfg.k);
    w.key("reps");
    w.value(a.cfg.reps);
    w.key("seed");
    w.value(a.cfg.seed);
    w.key("sigma_z");
    w.value(a.cfg.sigma_z);
    w.key("sigma");
    w.value(a.cfg.sigma);
    w.key("y_dist");
    w.value(to_string(a.cfg.y_dist));
    if (with_q) {
        w.key("q");
        w.value(a.cfg.q);
    } else {
        w.key("scheme");
        w.value(a.scheme);
    }
    w.end_object();
}

} // namespace detail

/// Entry point behind the binary. Parses argv (program name excluded),
/// executes the subcommand, writes one JSON document to out and a short
/// human-readable summary to err. Returns 0 on success, 1 on input
/// errors, 2 on internal accuracy failures.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{std::string(tool_name) +
                 ": Gaussian-covariate p-values for forward variable selection"};
    app.set_version_flag("--version", std::string(tool_name) + " " + tool_version);
    app.require_subcommand(1);

    detail::SelectArgs sel;
    auto* select = app.add_subcommand(
        "select", "Greedy forward selection on a CSV dataset");
    select->add_option("--data", sel.data, "CSV file with a header row")->required();
    select->add_option("--response", sel.response, "name of the response column")->required();
    select->add_option("--drop", sel.drop, "column names to ignore")->delimiter(',');
    select->add_option("--alpha", sel.alpha, "p-value threshold")->capture_default_str();
    select->add_flag("--intercept,!--no-intercept", sel.with_intercept,
                     "include an intercept column (default on)");
    std::size_t max_steps_raw = 0;
    auto* max_steps_opt = select->add_option(
        "--max-steps", max_steps_raw, "cap on included covariates (default: all candidates)");
    select->add_option("--tol", sel.tol, "collinearity tolerance")->capture_default_str();
    select->add_flag("--count-rejected-in-q", sel.count_rejected_in_q,
                     "count collinearity-rejected candidates toward q");

    detail::VerifyArgs vb;
    auto* verify_beta = app.add_subcommand(
        "verify-beta", "Monte Carlo check of the Beta law of the B statistic");
    verify_beta->add_option("--n", vb.cfg.n, "sample size")->capture_default_str();
    verify_beta->add_option("--k", vb.cfg.k, "included-column count")->capture_default_str();
    verify_beta->add_option("--reps", vb.cfg.reps, "replications")->capture_default_str();
    verify_beta->add_option("--seed", vb.cfg.seed, "RNG seed")->capture_default_str();
    verify_beta->add_option("--sigma-z", vb.cfg.sigma_z, "candidate noise scale")
        ->capture_default_str();
    verify_beta->add_option("--sigma", vb.cfg.sigma, "response noise scale")
        ->capture_default_str();
    verify_beta->add_option("--scheme", vb.scheme, "covariate, standard, or both")
        ->check(CLI::IsMember({"covariate", "standard", "both"}))
        ->capture_default_str();
    verify_beta->add_option("--ydist", vb.y_dist, "fixed-response distribution: normal or t3")
        ->check(CLI::IsMember({"normal", "t3"}))
        ->capture_default_str();

    detail::VerifyArgs vu;
    auto* verify_uniform = app.add_subcommand(
        "verify-uniform", "Monte Carlo check that best-of-q adjusted p-values are uniform");
    verify_uniform->add_option("--n", vu.cfg.n, "sample size")->capture_default_str();
    verify_uniform->add_option("--k", vu.cfg.k, "included-column count")->capture_default_str();
    verify_uniform->add_option("--reps", vu.cfg.reps, "replications")->capture_default_str();
    verify_uniform->add_option("--seed", vu.cfg.seed, "RNG seed")->capture_default_str();
    verify_uniform->add_option("--sigma-z", vu.cfg.sigma_z, "candidate noise scale")
        ->capture_default_str();
    verify_uniform->add_option("--q", vu.cfg.q, "candidates per replication")
        ->capture_default_str();
    verify_uniform->add_option("--ydist", vu.y_dist, "fixed-response distribution")
        ->check(CLI::IsMember({"normal", "t3"}))
        ->capture_default_str();

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << app.version() << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        err << "run with --help for usage\n";
        return 1;
    }

    const auto start = std::chrono::steady_clock::now();
    const auto elapsed_seconds = [&start] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };

    try {
        const unsigned threads = detail::threads_from_env();
        JsonWriter w;
        w.begin_object();
        w.key("tool_version");
        w.value(std::string(tool_name) + " " + tool_version);

        if (select->parsed()) {
            if (max_steps_opt->count() > 0) sel.max_steps = max_steps_raw;
            SelectionConfig cfg;
            cfg.alpha = sel.alpha;
            cfg.max_steps = sel.max_steps;
            cfg.with_intercept = sel.with_intercept;
            cfg.collinearity_tol = sel.tol;
            cfg.count_rejected_in_q = sel.count_rejected_in_q;

            const Dataset d = load_csv(sel.data, sel.response, sel.drop);
            const SelectionTrace trace = forward_select(d, cfg);

            w.key("mode");
            w.value("select");
            w.key("config");
            w.begin_object();
            w.key("data");
            w.value(sel.data);
            w.key("response");
            w.value(sel.response);
            w.key("drop");
            w.begin_array();
            for (const auto& name : sel.drop) w.value(name);
            w.end_array();
            w.key("alpha");
            w.value(cfg.alpha);
            w.key("with_intercept");
            w.value(cfg.with_intercept);
            w.key("max_steps");
            w.value(cfg.max_steps.value_or(d.n_cols()));
            w.key("tol");
            w.value(cfg.collinearity_tol);
            w.key("count_rejected_in_q");
            w.value(cfg.count_rejected_in_q);
            w.end_object();
            w.key("result");
            detail::write_trace(w, trace);
            w.end_object();
            out << w.str() << "\n";

            const std::size_t included = trace.final_included.size() -
                                         (trace.final_included.empty() || !cfg.with_intercept
                                              ? 0
                                              : 1);
            err << "select: included " << included << " of " << d.n_cols()
                << " candidates (stop: " << to_string(trace.stop_reason) << ") in "
                << elapsed_seconds() << " s\n";
            return 0;
        }

        if (verify_beta->parsed()) {
            vb.cfg.y_dist = vb.y_dist == "t3" ? YDist::student_t3 : YDist::normal;
            w.key("mode");
            w.value("verify_beta");
            w.key("config");
            detail::write_verify_config(w, vb, /*with_q=*/false);
            w.key("result");
            if (vb.scheme == "both") {
                auto covariate_samples = sample_B_gaussian_covariate(vb.cfg, threads);
                auto standard_samples = sample_B_standard_model(vb.cfg, threads);
                const McReport rc = gausscov::detail::make_report(
                    McScheme::gaussian_covariate, covariate_samples, null_beta_params(vb.cfg));
                const McReport rs = gausscov::detail::make_report(
                    McScheme::standard_model, standard_samples, null_beta_params(vb.cfg));
                std::sort(covariate_samples.begin(), covariate_samples.end());
                std::sort(standard_samples.begin(), standard_samples.end());
                const double d2 = ks_two_sample(covariate_samples, standard_samples);
                w.begin_object();
                w.key("gaussian_covariate");
                detail::write_mc_report(w, rc);
                w.key("standard_model");
                detail::write_mc_report(w, rs);
                w.key("two_sample_ks");
                w.value(d2);
                w.end_object();
                w.end_object();
                out << w.str() << "\n";
                err << "verify-beta both: ks_covariate=" << rc.ks_stat
                    << " ks_standard=" << rs.ks_stat << " two_sample_ks=" << d2 << " in "
                    << elapsed_seconds() << " s\n";
            } else {
                const McReport rep = vb.scheme == "standard"
                                         ? simulate_B_standard_model(vb.cfg, threads)
                                         : simulate_B_gaussian_covariate(vb.cfg, threads);
                detail::write_mc_report(w, rep);
                w.end_object();
                out << w.str() << "\n";
                err << "verify-beta " << to_string(rep.scheme) << ": ks=" << rep.ks_stat
                    << " mean=" << rep.empirical_mean << " (theory " << rep.theoretical_mean
                    << ") in " << elapsed_seconds() << " s\n";
            }
            return 0;
        }

        // verify-uniform
        vu.cfg.y_dist = vu.y_dist == "t3" ? YDist::student_t3 : YDist::normal;
        w.key("mode");
        w.value("verify_uniform");
        w.key("config");
        detail::write_verify_config(w, vu, /*with_q=*/true);
        w.key("result");
        const McReport rep = simulate_max_pvalue_uniformity(vu.cfg, threads);
        detail::write_mc_report(w, rep);
        w.end_object();
        out << w.str() << "\n";
        err << "verify-uniform q=" << vu.cfg.q << ": ks=" << rep.ks_stat << " in "
            << elapsed_seconds() << " s\n";
        return 0;
    } catch (const accuracy_error& e) {
        err << "internal accuracy error: " << e.what() << "\n";
        return 2;
    } catch (const invalid_input_error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace gausscov::cli
