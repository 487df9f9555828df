#pragma once

// Simulation of bursty marked renewal processes: waiting times from the
// totally skewed stable law (or exponential, for the null model), magnitudes
// i.i.d. and independent of the waits. Waits and magnitudes draw from
// separate streams of the seed, so changing the magnitude law never disturbs
// the event times; magnitudes are quantile transforms of one uniform each,
// so their ranks (and hence all order-statistic thresholds) agree across laws.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ctre/event_series.hpp"
#include "ctre/rng.hpp"
#include "ctre/stable.hpp"

namespace ctre {

enum class MagnitudeLaw { unit_exponential, standard_gumbel };
enum class WaitingLaw { stable, exponential };

struct SimConfig {
    double beta = 0.8;  // stability parameter of the waiting times
    std::size_t n = 10000;
    MagnitudeLaw magnitude_law = MagnitudeLaw::unit_exponential;
    WaitingLaw waiting_law = WaitingLaw::stable;
    std::uint64_t seed = 0;

    void validate() const {
        if (n < 2) throw std::invalid_argument("SimConfig: n must be >= 2");
        if (waiting_law == WaitingLaw::stable && !(beta > 0.0 && beta < 1.0))
            throw std::invalid_argument("SimConfig: beta must lie in (0, 1) for stable waits");
    }
};

inline EventSeries simulate_mrp(const SimConfig& cfg) {
    cfg.validate();
    Rng wait_rng(cfg.seed, 0);
    Rng mag_rng(cfg.seed, 1);

    EventSeries s;
    s.times.resize(cfg.n);
    s.magnitudes.resize(cfg.n);
    double t = 0.0;
    for (std::size_t i = 0; i < cfg.n; ++i) {
        t += (cfg.waiting_law == WaitingLaw::stable)
                 ? detail::stable_draw(wait_rng, cfg.beta)
                 : wait_rng.exponential();
        s.times[i] = t;
        const double u = mag_rng.uniform_open();
        s.magnitudes[i] = (cfg.magnitude_law == MagnitudeLaw::unit_exponential)
                              ? -std::log1p(-u)
                              : -std::log(-std::log(u));
    }
    return s;
}

}  // namespace ctre
