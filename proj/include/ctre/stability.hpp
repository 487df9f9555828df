#pragma once

// Stability-scan estimation: fit the inter-exceedance law at every
// order-statistic threshold k in [k_min, k_max], normalize the scale by
// k^{1/beta} and read the stabilized (beta0, sigma0) off a window of rows.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "ctre/estimators.hpp"
#include "ctre/event_series.hpp"
#include "ctre/exceedances.hpp"
#include "ctre/math_utils.hpp"

namespace ctre {

struct ScanRow {
    std::size_t k = 0;
    double ell = 0.0;
    std::size_t m = 0;  // durations used by the fit (k - 1 when magnitudes are distinct)
    double beta_hat = 0.0;
    double beta_lo = 0.0, beta_hi = 0.0;
    double sigma_hat = 0.0;                      // per-threshold scale
    double sigma_norm = 0.0;                     // k^{1/beta_hat} * sigma_hat
    double sigma_norm_lo = 0.0, sigma_norm_hi = 0.0;
    bool ok = false;
    std::string message;
};

struct StabilityScan {
    std::vector<ScanRow> rows;
    std::size_t k_min = 0, k_max = 0;
    FitMethod method = FitMethod::log_moment;
    std::size_t n_events = 0;
};

struct StableParams {
    double beta0 = 0.0;
    double sigma0 = 0.0;
    std::pair<double, double> beta_spread{0.0, 0.0};   // interquartile range over the window
    std::pair<double, double> sigma_spread{0.0, 0.0};  // IQR of k^{1/beta0} sigma_hat(k)
    std::size_t k_lo = 0, k_hi = 0;
    std::size_t rows_used = 0;
};

namespace detail {

// 95% interval for ln(k^{1/beta} sigma) under the log-moment asymptotics,
// with the beta uncertainty entering through the k^{1/beta} factor:
//   h(m, s2) = ln k / g(s2) + m + euler_gamma,  dh/ds2 = 3 beta ln k / (2 pi^2)
inline std::pair<double, double> lognorm_ci(double beta, double sigma_norm, double lnk,
                                            std::size_t m) {
    const auto av = logmoment_avar(beta, m);
    const double pi2 = 3.14159265358979323846 * 3.14159265358979323846;
    const double dh_ds2 = 3.0 * beta * lnk / (2.0 * pi2);
    const double var_h =
        av.var_mean + 2.0 * dh_ds2 * av.cov_mean_s2 + dh_ds2 * dh_ds2 * av.var_s2;
    const double sd = std::sqrt(std::max(var_h, 0.0));
    return {sigma_norm * std::exp(-1.96 * sd), sigma_norm * std::exp(1.96 * sd)};
}

}  // namespace detail

inline StabilityScan stability_scan(const EventSeries& series, std::size_t k_min,
                                    std::size_t k_max,
                                    FitMethod method = FitMethod::log_moment,
                                    bool keep_first = true) {
    series.validate();
    if (!(k_min >= 3 && k_min < k_max && k_max <= series.n()))
        throw std::invalid_argument("stability_scan: need 3 <= k_min < k_max <= n");

    StabilityScan scan;
    scan.k_min = k_min;
    scan.k_max = k_max;
    scan.method = method;
    scan.n_events = series.n();
    scan.rows.reserve(k_max - k_min + 1);

    for (std::size_t k = k_min; k <= k_max; ++k) {
        ScanRow row;
        row.k = k;
        try {
            row.ell = order_threshold(series, k);
            const auto exc = extract_exceedances(series, row.ell, keep_first);
            row.m = exc.durations.size();
            const MLFit fit = (method == FitMethod::mle) ? mle_fit(exc.durations)
                                                         : logmoment_fit(exc.durations);
            const double lnk = std::log(static_cast<double>(k));
            row.beta_hat = fit.params.beta;
            row.beta_lo = fit.ci_beta.first;
            row.beta_hi = fit.ci_beta.second;
            row.sigma_hat = fit.params.sigma;
            row.sigma_norm = std::exp(lnk / fit.params.beta) * fit.params.sigma;
            if (method == FitMethod::log_moment) {
                const auto ci =
                    detail::lognorm_ci(fit.params.beta, row.sigma_norm, lnk, row.m);
                row.sigma_norm_lo = ci.first;
                row.sigma_norm_hi = ci.second;
            } else {
                // back the normal sd out of the per-parameter intervals; the
                // cross term is not available from the fit summary
                const double sd_b = (fit.ci_beta.second - fit.ci_beta.first) / (2.0 * 1.96);
                const double sd_ls =
                    std::log(fit.ci_sigma.second / fit.ci_sigma.first) / (2.0 * 1.96);
                const double g = lnk / (fit.params.beta * fit.params.beta);
                const double sd = std::sqrt(g * g * sd_b * sd_b + sd_ls * sd_ls);
                row.sigma_norm_lo = row.sigma_norm * std::exp(-1.96 * sd);
                row.sigma_norm_hi = row.sigma_norm * std::exp(1.96 * sd);
            }
            row.ok = true;
        } catch (const std::exception& e) {
            row.ok = false;
            row.message = e.what();
        }
        scan.rows.push_back(std::move(row));
    }
    return scan;
}

// Medians over a k-window of the scan; the scale rows are re-normalized with
// the common beta0 before taking the median. Spreads are interquartile.
inline StableParams select_stable_params(const StabilityScan& scan, std::size_t k_lo,
                                         std::size_t k_hi) {
    if (k_lo > k_hi || k_lo < scan.k_min || k_hi > scan.k_max)
        throw std::invalid_argument("select_stable_params: window outside scan range");
    std::vector<double> betas;
    std::vector<const ScanRow*> rows;
    for (const auto& r : scan.rows) {
        if (r.ok && r.k >= k_lo && r.k <= k_hi) {
            betas.push_back(r.beta_hat);
            rows.push_back(&r);
        }
    }
    if (betas.empty()) throw std::invalid_argument("select_stable_params: empty window");

    StableParams sp;
    sp.k_lo = k_lo;
    sp.k_hi = k_hi;
    sp.rows_used = betas.size();
    sp.beta0 = detail::median(betas);

    std::vector<double> norms;
    norms.reserve(rows.size());
    for (const ScanRow* r : rows)
        norms.push_back(std::pow(static_cast<double>(r->k), 1.0 / sp.beta0) * r->sigma_hat);
    sp.sigma0 = detail::median(norms);

    std::sort(betas.begin(), betas.end());
    std::sort(norms.begin(), norms.end());
    sp.beta_spread = {detail::quantile_sorted(betas, 0.25), detail::quantile_sorted(betas, 0.75)};
    sp.sigma_spread = {detail::quantile_sorted(norms, 0.25), detail::quantile_sorted(norms, 0.75)};
    return sp;
}

// Default window: the upper half of the scanned k range.
inline StableParams select_stable_params(const StabilityScan& scan) {
    const std::size_t k_lo = scan.k_min + (scan.k_max - scan.k_min) / 2;
    return select_stable_params(scan, k_lo, scan.k_max);
}

// Fitted inter-exceedance law at the k-th order-statistic threshold:
// ML(beta0, k^{-1/beta0} sigma0).
inline MLParams fitted_distribution_at(double beta0, double sigma0, std::size_t k) {
    if (k < 1) throw std::invalid_argument("fitted_distribution_at: k must be >= 1");
    MLParams p{beta0, std::pow(static_cast<double>(k), -1.0 / beta0) * sigma0};
    p.validate();
    return p;
}

}  // namespace ctre
