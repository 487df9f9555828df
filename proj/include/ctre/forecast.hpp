#pragma once

// Conditional prediction of the time until the next threshold crossing given
// the elapsed time t0 since the last one, and the hazard rate of the fitted
// law. The Mittag-Leffler distribution is not memoryless for beta < 1: the
// longer the wait so far, the further out the next crossing shifts.

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ctre/mittag_leffler.hpp"

namespace ctre {

struct PredictiveState {
    MLParams params{1.0, 1.0};  // threshold-adjusted, e.g. from fitted_distribution_at
    double t0 = 0.0;            // elapsed time since the last crossing

    void validate() const {
        params.validate();
        if (!(t0 >= 0.0)) throw std::invalid_argument("PredictiveState: t0 must be >= 0");
    }
};

namespace detail {

inline double checked_survival_at_t0(const PredictiveState& state) {
    if (state.t0 == 0.0) return 1.0;
    const double s0 = ml_survival(state.t0, state.params);
    if (!(s0 > 0.0))
        throw std::domain_error("forecast: survival underflows at the given t0");
    return s0;
}

}  // namespace detail

// p(t | t0) = f(t + t0) / S(t0); integrates to one over t in (0, inf).
inline double conditional_density(const PredictiveState& state, double t) {
    state.validate();
    if (!(t > 0.0)) throw std::domain_error("conditional_density: t must be positive");
    const double s0 = detail::checked_survival_at_t0(state);
    return ml_pdf(t + state.t0, state.params) / s0;
}

// Smallest t with P[T <= t0 + t | T > t0] >= q, via the survival ratio
// S(t + t0) = (1 - q) S(t0).
inline double conditional_survival_quantile(const PredictiveState& state, double q) {
    state.validate();
    if (!(q >= 0.0 && q < 1.0))
        throw std::domain_error("conditional_survival_quantile: q must lie in [0, 1)");
    if (q == 0.0) return 0.0;
    const double s0 = detail::checked_survival_at_t0(state);
    if (state.params.beta == 1.0)  // memoryless
        return -state.params.sigma * std::log1p(-q);
    const double target = (1.0 - q) * s0;
    const double t_total = detail::invert_survival(state.params, target);
    return std::max(t_total - state.t0, 0.0);
}

// h(t) = f(t) / S(t): the crossing risk per unit time. Strictly decreasing
// for beta < 1, constant 1/sigma for beta = 1.
inline double hazard_rate(const MLParams& params, double t) {
    params.validate();
    if (!(t > 0.0)) throw std::domain_error("hazard_rate: t must be positive");
    if (params.beta == 1.0) return 1.0 / params.sigma;
    const double s = ml_survival(t, params);
    if (!(s > 0.0)) throw std::domain_error("hazard_rate: survival underflows at t");
    return ml_pdf(t, params) / s;
}

}  // namespace ctre
