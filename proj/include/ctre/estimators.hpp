#pragma once

// Parameter estimation for Mittag-Leffler samples: the log-moment method of
// Cahoy (2013), maximum likelihood, the likelihood-ratio test against the
// exponential null, and the Kratz-Resnick (1996) QQ-estimator for the tail
// exponent of magnitudes.

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ctre/math_utils.hpp"
#include "ctre/mittag_leffler.hpp"

namespace ctre {

enum class FitMethod { log_moment, mle };

struct MLFit {
    MLParams params{1.0, 1.0};
    std::pair<double, double> ci_beta{0.0, 1.0};   // 95%
    std::pair<double, double> ci_sigma{0.0, 0.0};  // 95%
    double loglik = std::numeric_limits<double>::quiet_NaN();
    FitMethod method = FitMethod::log_moment;
    std::size_t n = 0;
    bool beta_clamped = false;   // moment equation produced beta outside (0, 1]
    bool beta_boundary = false;  // MLE ended on the beta = 1 boundary
    bool converged = true;
    std::string message;
};

struct LRTResult {
    double deviance = 0.0;
    double p_value = 1.0;
    double loglik_ml = 0.0;
    double loglik_exp = 0.0;
    MLFit ml_fit;
};

struct TailEstimate {
    double alpha_hat = 0.0;  // static estimate, at the largest requested cutoff
    std::size_t cutoff = 0;
    std::vector<std::pair<std::size_t, double>> per_cutoff;
};

namespace detail {

inline void check_positive_sample(const std::vector<double>& sample, std::size_t min_n,
                                  const char* who) {
    if (sample.size() < min_n)
        throw std::invalid_argument(std::string(who) + ": sample too small");
    for (double t : sample)
        if (!(t > 0.0) || !std::isfinite(t))
            throw std::invalid_argument(std::string(who) + ": sample values must be positive");
}

// Cumulants of ln T for T ~ ML(beta, 1), from ln T = (1/beta) ln X + ln D:
//   kappa2 = (pi^2/6)(2/beta^2 - 1)
//   kappa3 = -2 zeta(3)                  (beta-independent)
//   kappa4 = (pi^4/15)(2/beta^4 - 1)
struct LogCumulants {
    double k2, k3, k4;
};

inline LogCumulants ml_log_cumulants(double beta) {
    const double pi2 = 3.14159265358979323846 * 3.14159265358979323846;
    return {pi2 / 6.0 * (2.0 / (beta * beta) - 1.0), -2.0 * zeta3,
            pi2 * pi2 / 15.0 * (2.0 / std::pow(beta, 4) - 1.0)};
}

// Asymptotic covariance pieces of (mean, variance) of ln T at sample size n.
struct LogMomentAvar {
    double var_mean;     // kappa2 / n
    double cov_mean_s2;  // kappa3 / n
    double var_s2;       // (kappa4 + 2 kappa2^2) / n
    double dbeta_ds2;    // derivative of the moment equation, -3 beta^3 / (2 pi^2)
};

inline LogMomentAvar logmoment_avar(double beta, std::size_t n) {
    const auto k = ml_log_cumulants(beta);
    const double pi2 = 3.14159265358979323846 * 3.14159265358979323846;
    const double dn = static_cast<double>(n);
    return {k.k2 / dn, k.k3 / dn, (k.k4 + 2.0 * k.k2 * k.k2) / dn,
            -3.0 * beta * beta * beta / (2.0 * pi2)};
}

// Sample log-likelihood under ML(beta, sigma) using the cached kernel.
inline double ml_loglik(const std::vector<double>& log_sample, double beta, double sigma,
                        const MlLogKernel* kernel) {
    const double ls = std::log(sigma);
    if (beta == 1.0) {
        double acc = 0.0;
        for (double lt : log_sample) acc += -ls - std::exp(lt - ls);
        return acc;
    }
    double acc = 0.0;
    for (double lt : log_sample) {
        const double u = lt - ls;
        acc += (beta - 1.0) * u - ls + (*kernel)(std::exp(beta * u));
    }
    return acc;
}

}  // namespace detail

// Method of log-transformed moments (Cahoy 2013). With m and s^2 the sample
// mean and (unbiased) variance of ln T:
//   beta  = pi sqrt(2 / (6 s^2 + pi^2)),  clamped into (0, 1]
//   sigma = exp(m + euler_gamma)
// CIs from asymptotic normality of (m, s^2) and the delta method.
inline MLFit logmoment_fit(const std::vector<double>& sample) {
    detail::check_positive_sample(sample, 2, "logmoment_fit");
    std::vector<double> logs(sample.size());
    std::transform(sample.begin(), sample.end(), logs.begin(),
                   [](double t) { return std::log(t); });
    const double m = detail::mean(logs);
    const double s2 = detail::variance(logs);
    if (s2 == 0.0) throw std::invalid_argument("logmoment_fit: degenerate sample");

    const double pi = 3.14159265358979323846;
    MLFit fit;
    fit.method = FitMethod::log_moment;
    fit.n = sample.size();
    double beta = pi * std::sqrt(2.0 / (6.0 * s2 + pi * pi));
    if (beta > 1.0) {
        beta = 1.0;
        fit.beta_clamped = true;
    } else if (beta < 1e-3) {
        beta = 1e-3;
        fit.beta_clamped = true;
    }
    const double sigma = std::exp(m + euler_gamma);
    fit.params = {beta, sigma};

    const auto av = detail::logmoment_avar(beta, sample.size());
    const double sd_beta = std::fabs(av.dbeta_ds2) * std::sqrt(av.var_s2);
    fit.ci_beta = {std::max(beta - 1.96 * sd_beta, 1e-12), std::min(beta + 1.96 * sd_beta, 1.0)};
    const double sd_lnsigma = std::sqrt(av.var_mean);
    fit.ci_sigma = {sigma * std::exp(-1.96 * sd_lnsigma), sigma * std::exp(1.96 * sd_lnsigma)};

    if (beta == 1.0) {
        fit.loglik = detail::ml_loglik(logs, 1.0, sigma, nullptr);
    } else {
        detail::MlLogKernel kernel(beta);
        fit.loglik = detail::ml_loglik(logs, beta, sigma, &kernel);
    }
    return fit;
}

namespace detail {

// Golden-section maximization on [a, b], assuming a unimodal objective; the
// best point ever evaluated is returned, so the result never undercuts the
// probes that bracketed it.
template <class F>
inline std::pair<double, double> golden_max(F&& f, double a, double b, double tol) {
    constexpr double inv_phi = 0.6180339887498949;
    double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    double best_x = f1 >= f2 ? x1 : x2;
    double best_f = std::max(f1, f2);
    for (int it = 0; it < 200 && (b - a) > tol; ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
        if (f1 > best_f) {
            best_f = f1;
            best_x = x1;
        }
        if (f2 > best_f) {
            best_f = f2;
            best_x = x2;
        }
    }
    return {best_x, best_f};
}

// Coarse grid scan followed by golden refinement; the window is shifted if
// the maximum lands on an edge. localized reports whether the optimum was
// bracketed before the shift budget ran out.
struct ScanResult {
    double x, f;
    bool localized;
};

template <class F>
inline ScanResult scan_then_refine(F&& f, double center, double half_width, double lo_cap,
                                   double hi_cap, double tol) {
    constexpr int grid_n = 7;
    for (int shift = 0; shift < 6; ++shift) {
        double lo = std::max(center - half_width, lo_cap);
        double hi = std::min(center + half_width, hi_cap);
        if (!(lo < hi)) {
            const double x = std::clamp(center, lo_cap, hi_cap);
            return {x, f(x), true};
        }
        double xs[grid_n], fs[grid_n];
        int best = 0;
        for (int i = 0; i < grid_n; ++i) {
            xs[i] = lo + (hi - lo) * i / (grid_n - 1);
            fs[i] = f(xs[i]);
            if (fs[i] > fs[best]) best = i;
        }
        const bool lo_edge = best == 0 && lo > lo_cap;
        const bool hi_edge = best == grid_n - 1 && hi < hi_cap;
        if (lo_edge || hi_edge) {
            center = xs[best];
            continue;  // re-center the window on the runaway edge
        }
        const double ra = best > 0 ? xs[best - 1] : xs[0];
        const double rb = best < grid_n - 1 ? xs[best + 1] : xs[grid_n - 1];
        auto ref = golden_max(f, ra, rb, tol);
        if (ref.second >= fs[best]) return {ref.first, ref.second, true};
        return {xs[best], fs[best], true};
    }
    return {center, f(center), false};
}

}  // namespace detail

// Maximum likelihood over beta in (0, 1], sigma > 0, via the profile
// likelihood: an outer search on beta (one kernel cache per probe) around an
// inner search on ln sigma. The log-moment estimate seeds both searches and
// the closed-form exponential MLE (beta = 1, sigma = mean) is always
// considered, so the returned log-likelihood is never below either candidate
// and lr_test_exponential deviances are non-negative by construction.
inline MLFit mle_fit(const std::vector<double>& sample, const MLParams* init = nullptr) {
    detail::check_positive_sample(sample, 2, "mle_fit");
    std::vector<double> logs(sample.size());
    std::transform(sample.begin(), sample.end(), logs.begin(),
                   [](double t) { return std::log(t); });

    MLFit lm;
    bool have_lm = true;
    try {
        lm = logmoment_fit(sample);
    } catch (const std::invalid_argument&) {
        have_lm = false;
    }
    double beta0 = init ? init->beta : (have_lm ? lm.params.beta : 0.7);
    double sigma0 = init ? init->sigma : (have_lm ? lm.params.sigma : detail::median(sample));
    beta0 = std::clamp(beta0, 0.02, 1.0 - 1e-4);
    const double lsig0 = std::log(sigma0);

    std::unique_ptr<detail::MlLogKernel> kernel;
    double kernel_beta = -1.0;
    auto loglik_at = [&](double beta, double lsig) {
        if (beta != kernel_beta) {
            kernel = std::make_unique<detail::MlLogKernel>(beta);
            kernel_beta = beta;
        }
        return detail::ml_loglik(logs, beta, std::exp(lsig), kernel.get());
    };

    double lsig_best = lsig0;
    bool inner_localized = true;
    auto profile = [&](double beta) {
        auto r = detail::scan_then_refine([&](double ls) { return loglik_at(beta, ls); },
                                          lsig_best, 1.8, lsig0 - 40.0, lsig0 + 40.0, 1e-6);
        lsig_best = r.x;
        inner_localized = inner_localized && r.localized;
        return r.f;
    };
    auto outer = detail::scan_then_refine(profile, beta0, 0.21, 0.02, 1.0 - 1e-4, 1e-5);

    double beta = outer.x;
    // re-profile sigma at the final beta (lsig_best may belong to a probe)
    auto inner = detail::scan_then_refine([&](double ls) { return loglik_at(beta, ls); },
                                          lsig_best, 1.0, lsig0 - 40.0, lsig0 + 40.0, 1e-8);
    double lsig = inner.x;
    double ll = inner.f;
    double sigma = std::exp(lsig);

    MLFit fit;
    fit.method = FitMethod::mle;
    fit.n = sample.size();
    fit.converged = outer.localized && inner.localized && inner_localized;
    if (!fit.converged)
        fit.message = "profile search did not bracket an interior optimum; best point returned";

    // exponential candidate: beta = 1 with its closed-form MLE sigma
    const double mean_t = detail::mean(sample);
    const double ll_exp = detail::ml_loglik(logs, 1.0, mean_t, nullptr);
    const bool boundary = ll_exp >= ll || beta > 1.0 - 1.5e-4;
    if (ll_exp >= ll) {
        beta = 1.0;
        sigma = mean_t;
        ll = ll_exp;
    } else if (beta > 1.0 - 1.5e-4) {
        beta = 1.0;
    }
    fit.params = {beta, sigma};
    fit.loglik = ll;
    fit.beta_boundary = boundary;

    if (boundary) {
        // one-sided interval against 1; width from the log-moment asymptotics
        const auto av = detail::logmoment_avar(1.0, sample.size());
        const double sd_beta = std::fabs(av.dbeta_ds2) * std::sqrt(av.var_s2);
        fit.ci_beta = {std::max(1.0 - 1.96 * sd_beta, 1e-12), 1.0};
        const double sd_ls = 1.0 / std::sqrt(static_cast<double>(sample.size()));
        fit.ci_sigma = {sigma * std::exp(-1.96 * sd_ls), sigma * std::exp(1.96 * sd_ls)};
        return fit;
    }

    // observed information in (beta, ln sigma) by central differences,
    // grouped by beta so the kernel cache is built once per column
    const double hb = std::min(1e-3, 0.5 * (1.0 - beta));
    const double hs = 1e-3;
    auto nll = [&](double b, double ls) { return -loglik_at(b, ls); };
    const double f0 = nll(beta, lsig);
    const double fsp = nll(beta, lsig + hs), fsm = nll(beta, lsig - hs);
    const double fbp = nll(beta + hb, lsig), fpp = nll(beta + hb, lsig + hs);
    const double fbm = nll(beta - hb, lsig), fmm = nll(beta - hb, lsig - hs);
    const double hbb = (fbp - 2.0 * f0 + fbm) / (hb * hb);
    const double hss = (fsp - 2.0 * f0 + fsm) / (hs * hs);
    const double hbs = (fpp - fbp - fsp + 2.0 * f0 - fbm - fsm + fmm) / (2.0 * hb * hs);
    const double det = hbb * hss - hbs * hbs;
    if (det > 0.0 && hbb > 0.0) {
        const double sd_b = std::sqrt(hss / det), sd_ls = std::sqrt(hbb / det);
        fit.ci_beta = {std::max(beta - 1.96 * sd_b, 1e-12), std::min(beta + 1.96 * sd_b, 1.0)};
        fit.ci_sigma = {sigma * std::exp(-1.96 * sd_ls), sigma * std::exp(1.96 * sd_ls)};
    } else {
        fit.ci_beta = {std::max(beta - 0.5, 1e-12), std::min(beta + 0.5, 1.0)};
        fit.ci_sigma = {0.5 * sigma, 2.0 * sigma};
        fit.message = "information matrix not positive definite; wide fallback intervals";
    }
    return fit;
}

// Likelihood-ratio test of the exponential null (beta = 1) against the
// Mittag-Leffler alternative; deviance referred to a chi-square with one
// degree of freedom.
inline LRTResult lr_test_exponential(const std::vector<double>& sample) {
    detail::check_positive_sample(sample, 10, "lr_test_exponential");
    LRTResult r;
    r.ml_fit = mle_fit(sample);
    r.loglik_ml = r.ml_fit.loglik;
    const double mean_t = detail::mean(sample);
    r.loglik_exp = -static_cast<double>(sample.size()) * (std::log(mean_t) + 1.0);
    r.deviance = std::max(2.0 * (r.loglik_ml - r.loglik_exp), 0.0);
    r.p_value = std::erfc(std::sqrt(0.5 * r.deviance));  // upper tail of chi2_1
    return r;
}

// Kratz-Resnick QQ-estimator. For each cutoff c, regress the log of the top
// c order statistics on the exponential quantiles -ln(1 - i/(n+1)) and
// report the reciprocal slope; the static estimate uses the largest cutoff.
inline TailEstimate qq_tail_estimate(const std::vector<double>& sample,
                                     const std::vector<std::size_t>& cutoffs) {
    detail::check_positive_sample(sample, 3, "qq_tail_estimate");
    if (cutoffs.empty()) throw std::invalid_argument("qq_tail_estimate: no cutoffs given");
    const std::size_t n = sample.size();
    std::vector<double> sorted(sample);
    std::sort(sorted.begin(), sorted.end());

    TailEstimate est;
    for (std::size_t c : cutoffs) {
        if (c < 3 || c > n)
            throw std::invalid_argument("qq_tail_estimate: cutoff must lie in [3, n]");
        std::vector<double> x(c), y(c);
        for (std::size_t j = 0; j < c; ++j) {
            const std::size_t i = n - c + j + 1;  // global rank, 1-based
            x[j] = -std::log1p(-static_cast<double>(i) / static_cast<double>(n + 1));
            y[j] = std::log(sorted[i - 1]);
        }
        const double slope = detail::ls_fit(x, y).second;
        const double ah = 1.0 / slope;
        est.per_cutoff.emplace_back(c, ah);
        if (c >= est.cutoff) {
            est.cutoff = c;
            est.alpha_hat = ah;
        }
    }
    if (!(est.alpha_hat > 0.0))
        throw std::invalid_argument("qq_tail_estimate: non-positive slope at largest cutoff");
    return est;
}

}  // namespace ctre
