#pragma once

// Command dispatch behind the CLI: fit, scan, diagnose, predict, simulate.
// Each command reads the inputs named in the config and emits deterministic
// CSV or JSON tables; human-readable summaries go to the message stream.

#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ctre/diagnostics.hpp"
#include "ctre/estimators.hpp"
#include "ctre/event_series.hpp"
#include "ctre/exceedances.hpp"
#include "ctre/forecast.hpp"
#include "ctre/io.hpp"
#include "ctre/simulate.hpp"
#include "ctre/stability.hpp"

namespace ctre {

enum class Command { fit, scan, diagnose, predict, simulate };
enum class OutFormat { csv, json };

struct RunConfig {
    Command command = Command::fit;
    std::string input;
    std::string output;  // empty: stdout
    OutFormat format = OutFormat::csv;

    // threshold spec: exactly one of k / ell where a threshold is required
    std::size_t k = 0;
    double ell = std::numeric_limits<double>::quiet_NaN();
    bool has_k = false, has_ell = false;

    // scan
    std::size_t k_min = 50, k_max = 500;
    std::size_t window_lo = 0, window_hi = 0;  // 0: default upper half
    FitMethod method = FitMethod::log_moment;
    bool keep_first = true;

    // diagnose
    std::size_t max_lag = 20;

    // predict
    double beta0 = 0.8;
    double sigma0 = 1.0;
    double t0 = 0.0;
    double t_min = 0.0, t_max = 0.0;  // 0: scaled defaults
    std::size_t points = 200;

    // simulate
    double beta = 0.8;
    std::size_t n = 10000;
    MagnitudeLaw magnitude_law = MagnitudeLaw::unit_exponential;
    WaitingLaw waiting_law = WaitingLaw::stable;
    std::uint64_t seed = 0;
};

namespace detail {

class OutputSink {
  public:
    explicit OutputSink(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw std::runtime_error("cannot open output file " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

  private:
    std::ofstream file_;
};

inline double resolve_threshold(const RunConfig& cfg, const EventSeries& series) {
    if (cfg.has_k == cfg.has_ell)
        throw std::invalid_argument("exactly one of --k / --ell must be given");
    return cfg.has_k ? order_threshold(series, cfg.k) : cfg.ell;
}

inline void report_parse(const ParseReport& rep, std::ostream& msg) {
    if (rep.header_skipped) msg << "note: header line skipped\n";
    if (rep.resorted) msg << "warning: input rows were out of order and have been sorted\n";
    if (rep.merged > 0)
        msg << "warning: " << rep.merged
            << " duplicate-timestamp rows merged (larger magnitude kept)\n";
    for (const auto& b : rep.bad_rows)
        msg << "warning: line " << b.line << " skipped: " << b.reason << '\n';
}

inline nlohmann::json fit_to_json(const MLFit& fit) {
    return {{"method", method_name(fit.method)},
            {"n", fit.n},
            {"beta", fit.params.beta},
            {"beta_ci", {fit.ci_beta.first, fit.ci_beta.second}},
            {"sigma", fit.params.sigma},
            {"sigma_ci", {fit.ci_sigma.first, fit.ci_sigma.second}},
            {"loglik", fit.loglik},
            {"beta_boundary", fit.beta_boundary},
            {"beta_clamped", fit.beta_clamped},
            {"converged", fit.converged},
            {"message", fit.message}};
}

inline nlohmann::json scan_to_json(const StabilityScan& scan, const StableParams& sel) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : scan.rows) {
        nlohmann::json jr = {{"k", r.k}, {"ell", r.ell}, {"ok", r.ok}};
        if (r.ok) {
            jr["m"] = r.m;
            jr["beta_hat"] = r.beta_hat;
            jr["beta_lo"] = r.beta_lo;
            jr["beta_hi"] = r.beta_hi;
            jr["sigma_hat"] = r.sigma_hat;
            jr["sigma_norm"] = r.sigma_norm;
            jr["sigma_lo"] = r.sigma_norm_lo;
            jr["sigma_hi"] = r.sigma_norm_hi;
        } else {
            jr["message"] = r.message;
        }
        rows.push_back(std::move(jr));
    }
    return {{"rows", std::move(rows)},
            {"selected",
             {{"beta0", sel.beta0},
              {"sigma0", sel.sigma0},
              {"beta_iqr", {sel.beta_spread.first, sel.beta_spread.second}},
              {"sigma_iqr", {sel.sigma_spread.first, sel.sigma_spread.second}},
              {"window", {sel.k_lo, sel.k_hi}},
              {"rows_used", sel.rows_used}}}};
}

}  // namespace detail

inline int run(const RunConfig& cfg, std::ostream& msg = std::cerr) {
    try {
        switch (cfg.command) {
            case Command::simulate: {
                SimConfig sim{cfg.beta, cfg.n, cfg.magnitude_law, cfg.waiting_law, cfg.seed};
                const EventSeries series = simulate_mrp(sim);
                detail::OutputSink sink(cfg.output);
                if (cfg.format == OutFormat::csv) {
                    write_events_csv(sink.stream(), series);
                } else {
                    nlohmann::json j = {{"times", series.times},
                                        {"magnitudes", series.magnitudes}};
                    sink.stream() << j.dump(2) << '\n';
                }
                return 0;
            }
            case Command::fit: {
                auto parsed = parse_events(cfg.input);
                detail::report_parse(parsed.report, msg);
                const double ell = detail::resolve_threshold(cfg, parsed.series);
                const auto exc = extract_exceedances(parsed.series, ell, cfg.keep_first);
                const MLFit fit = (cfg.method == FitMethod::mle)
                                      ? mle_fit(exc.durations)
                                      : logmoment_fit(exc.durations);
                std::unique_ptr<LRTResult> lrt;
                if (exc.durations.size() >= 10)
                    lrt = std::make_unique<LRTResult>(lr_test_exponential(exc.durations));
                else
                    msg << "note: fewer than 10 exceedances, likelihood-ratio test skipped\n";
                detail::OutputSink sink(cfg.output);
                if (cfg.format == OutFormat::csv) {
                    write_fit_csv(sink.stream(), fit, lrt.get());
                } else {
                    nlohmann::json j = {{"threshold", ell},
                                        {"exceedances", exc.durations.size()},
                                        {"fit", detail::fit_to_json(fit)}};
                    if (lrt)
                        j["lrt"] = {{"deviance", lrt->deviance},
                                    {"p_value", lrt->p_value},
                                    {"loglik_ml", lrt->loglik_ml},
                                    {"loglik_exp", lrt->loglik_exp}};
                    sink.stream() << j.dump(2) << '\n';
                }
                return 0;
            }
            case Command::scan: {
                auto parsed = parse_events(cfg.input);
                detail::report_parse(parsed.report, msg);
                const auto scan = stability_scan(parsed.series, cfg.k_min, cfg.k_max,
                                                 cfg.method, cfg.keep_first);
                const StableParams sel =
                    (cfg.window_lo && cfg.window_hi)
                        ? select_stable_params(scan, cfg.window_lo, cfg.window_hi)
                        : select_stable_params(scan);
                msg << "stable window k in [" << sel.k_lo << ", " << sel.k_hi
                    << "]: beta0 = " << detail::fmt_sig(sel.beta0, 6)
                    << ", sigma0 = " << detail::fmt_sig(sel.sigma0, 6) << " ("
                    << sel.rows_used << " rows)\n";
                detail::OutputSink sink(cfg.output);
                if (cfg.format == OutFormat::csv)
                    write_scan_csv(sink.stream(), scan);
                else
                    sink.stream() << detail::scan_to_json(scan, sel).dump(2) << '\n';
                return 0;
            }
            case Command::diagnose: {
                auto parsed = parse_events(cfg.input);
                detail::report_parse(parsed.report, msg);
                const double ell = detail::resolve_threshold(cfg, parsed.series);
                const auto exc = extract_exceedances(parsed.series, ell, cfg.keep_first);
                const auto rep = build_diagnostic_report(exc, cfg.max_lag);
                if (cfg.format == OutFormat::json) {
                    nlohmann::json j = {
                        {"threshold", ell},
                        {"acf",
                         {{"durations", rep.acf_durations.acf},
                          {"excesses", rep.acf_excesses.acf},
                          {"band", rep.acf_durations.band}}},
                        {"copula", {{"u", rep.copula.u}, {"v", rep.copula.v}}},
                        {"qq",
                         {{"theoretical", rep.qq.theoretical},
                          {"empirical", rep.qq.empirical},
                          {"beta_used", rep.qq.beta_used},
                          {"sigma_used", rep.qq.sigma_used}}}};
                    detail::OutputSink sink(cfg.output);
                    sink.stream() << j.dump(2) << '\n';
                } else if (cfg.output.empty()) {
                    std::cout << "# acf\n";
                    write_acf_csv(std::cout, rep);
                    std::cout << "# copula\n";
                    write_copula_csv(std::cout, rep.copula);
                    std::cout << "# qq\n";
                    write_qq_csv(std::cout, rep.qq);
                } else {
                    std::ofstream a(cfg.output + ".acf.csv");
                    std::ofstream c(cfg.output + ".copula.csv");
                    std::ofstream q(cfg.output + ".qq.csv");
                    if (!a || !c || !q)
                        throw std::runtime_error("cannot open diagnostic output files");
                    write_acf_csv(a, rep);
                    write_copula_csv(c, rep.copula);
                    write_qq_csv(q, rep.qq);
                }
                return 0;
            }
            case Command::predict: {
                if (!cfg.has_k)
                    throw std::invalid_argument("predict requires --k (order-statistic index)");
                const MLParams params = fitted_distribution_at(cfg.beta0, cfg.sigma0, cfg.k);
                const PredictiveState state{params, cfg.t0};
                const double lo = cfg.t_min > 0.0 ? cfg.t_min : 1e-3 * params.sigma;
                const double hi = cfg.t_max > 0.0 ? cfg.t_max : 1e3 * params.sigma;
                if (!(lo < hi) || cfg.points < 2)
                    throw std::invalid_argument("predict: bad t grid");
                const double s0 = detail::checked_survival_at_t0(state);
                std::vector<double> ts(cfg.points);
                const double step = std::log(hi / lo) / static_cast<double>(cfg.points - 1);
                for (std::size_t i = 0; i < cfg.points; ++i)
                    ts[i] = lo * std::exp(step * static_cast<double>(i));
                std::vector<double> qs;
                for (int i = 1; i <= 19; ++i) qs.push_back(0.05 * i);
                qs.push_back(0.99);

                if (cfg.format == OutFormat::json) {
                    nlohmann::json grid = nlohmann::json::array();
                    for (double t : ts)
                        grid.push_back(
                            {{"t", t},
                             {"density", conditional_density(state, t)},
                             {"survival", ml_survival(t + state.t0, params) / s0},
                             {"hazard", hazard_rate(params, t)}});
                    nlohmann::json quants = nlohmann::json::array();
                    for (double q : qs)
                        quants.push_back({{"q", q},
                                          {"t", conditional_survival_quantile(state, q)}});
                    nlohmann::json j = {{"beta", params.beta},
                                        {"sigma", params.sigma},
                                        {"t0", cfg.t0},
                                        {"grid", std::move(grid)},
                                        {"quantiles", std::move(quants)}};
                    detail::OutputSink sink(cfg.output);
                    sink.stream() << j.dump(2) << '\n';
                } else {
                    auto write_density = [&](std::ostream& os) {
                        os << "t,density,survival,hazard\n";
                        for (double t : ts)
                            os << detail::fmt_sig(t) << ','
                               << detail::fmt_sig(conditional_density(state, t)) << ','
                               << detail::fmt_sig(ml_survival(t + state.t0, params) / s0)
                               << ',' << detail::fmt_sig(hazard_rate(params, t)) << '\n';
                    };
                    auto write_quants = [&](std::ostream& os) {
                        os << "q,t\n";
                        for (double q : qs)
                            os << detail::fmt_sig(q) << ','
                               << detail::fmt_sig(conditional_survival_quantile(state, q))
                               << '\n';
                    };
                    if (cfg.output.empty()) {
                        std::cout << "# density\n";
                        write_density(std::cout);
                        std::cout << "# quantiles\n";
                        write_quants(std::cout);
                    } else {
                        std::ofstream d(cfg.output + ".density.csv");
                        std::ofstream q(cfg.output + ".quantiles.csv");
                        if (!d || !q)
                            throw std::runtime_error("cannot open predict output files");
                        write_density(d);
                        write_quants(q);
                    }
                }
                return 0;
            }
        }
    } catch (const std::exception& e) {
        msg << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}

}  // namespace ctre
