#pragma once

// Model-assumption checks: autocorrelation of log series (i.i.d.), empirical
// copula of (duration, excess) pairs (uncoupledness), and Mittag-Leffler QQ
// data (distributional fit). All outputs are plot-ready tables.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "ctre/estimators.hpp"
#include "ctre/event_series.hpp"
#include "ctre/mittag_leffler.hpp"

namespace ctre {

struct AcfResult {
    std::vector<double> acf;  // lag 0 .. max_lag
    double band = 0.0;        // white-noise 95% band, 1.96/sqrt(m)
};

struct CopulaPoints {
    std::vector<double> u, v;  // rank/(m+1) pseudo-observations
};

struct QQPoints {
    std::vector<double> theoretical, empirical;
    double beta_used = 0.0;
    double sigma_used = 0.0;
};

struct DiagnosticReport {
    AcfResult acf_durations;
    AcfResult acf_excesses;
    CopulaPoints copula;
    QQPoints qq;
};

// Sample autocorrelation of ln(values) up to max_lag.
inline AcfResult acf_log(const std::vector<double>& values, std::size_t max_lag) {
    if (values.size() < 2) throw std::invalid_argument("acf_log: need at least 2 values");
    if (max_lag >= values.size())
        throw std::invalid_argument("acf_log: max_lag must be below the sample size");
    std::vector<double> x(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] > 0.0)) throw std::invalid_argument("acf_log: values must be positive");
        x[i] = std::log(values[i]);
    }
    const double m = detail::mean(x);
    double denom = 0.0;
    for (double v : x) denom += (v - m) * (v - m);
    if (denom == 0.0) throw std::invalid_argument("acf_log: degenerate series");

    AcfResult r;
    r.band = 1.96 / std::sqrt(static_cast<double>(x.size()));
    r.acf.resize(max_lag + 1);
    for (std::size_t h = 0; h <= max_lag; ++h) {
        double num = 0.0;
        for (std::size_t i = 0; i + h < x.size(); ++i) num += (x[i] - m) * (x[i + h] - m);
        r.acf[h] = num / denom;
    }
    return r;
}

namespace detail {

// Ranks with average tie-breaking, scaled by 1/(m+1).
inline std::vector<double> pseudo_obs(const std::vector<double>& x) {
    const std::size_t m = x.size();
    std::vector<std::size_t> idx(m);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> r(m);
    std::size_t i = 0;
    while (i < m) {
        std::size_t j = i;
        while (j + 1 < m && x[idx[j + 1]] == x[idx[i]]) ++j;
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;  // 1-based average rank
        for (std::size_t t = i; t <= j; ++t) r[idx[t]] = avg / static_cast<double>(m + 1);
        i = j + 1;
    }
    return r;
}

}  // namespace detail

// Pseudo-observations (rank_x/(m+1), rank_y/(m+1)); invariant under strictly
// monotone transforms of either margin.
inline CopulaPoints empirical_copula(const std::vector<double>& x,
                                     const std::vector<double>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("empirical_copula: length mismatch");
    if (x.size() < 2) throw std::invalid_argument("empirical_copula: need at least 2 pairs");
    return {detail::pseudo_obs(x), detail::pseudo_obs(y)};
}

// QQ data against the log-moment Mittag-Leffler fit, plotting positions
// p_i = i/(m+1); intended for display on logarithmic axes.
inline QQPoints ml_qq_points(const std::vector<double>& sample) {
    if (sample.size() < 3) throw std::invalid_argument("ml_qq_points: need at least 3 values");
    const MLFit fit = logmoment_fit(sample);
    QQPoints qq;
    qq.beta_used = fit.params.beta;
    qq.sigma_used = fit.params.sigma;
    qq.empirical = sample;
    std::sort(qq.empirical.begin(), qq.empirical.end());
    const std::size_t m = sample.size();
    qq.theoretical.resize(m);
    for (std::size_t i = 1; i <= m; ++i)
        qq.theoretical[i - 1] =
            ml_quantile(static_cast<double>(i) / static_cast<double>(m + 1), fit.params);
    return qq;
}

// The three checks applied to one exceedance series.
inline DiagnosticReport build_diagnostic_report(const ExceedanceSeries& exc,
                                                std::size_t max_lag = 20) {
    DiagnosticReport rep;
    const std::size_t m = exc.durations.size();
    const std::size_t lag = std::min<std::size_t>(max_lag, m > 1 ? m - 1 : 1);
    rep.acf_durations = acf_log(exc.durations, lag);
    rep.acf_excesses = acf_log(exc.excesses, lag);
    rep.copula = empirical_copula(exc.durations, exc.excesses);
    rep.qq = ml_qq_points(exc.durations);
    return rep;
}

}  // namespace ctre
