#pragma once

// Threshold-exceedance extraction. A crossing is a strict exceedance
// J > ell; the first duration is measured from the observation origin at
// time 0 (keep_first = false drops it for stationarity-cautious use).

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "ctre/event_series.hpp"

namespace ctre {

inline ExceedanceSeries extract_exceedances(const EventSeries& series, double ell,
                                            bool keep_first = true) {
    series.validate();
    ExceedanceSeries out;
    out.threshold = ell;
    double prev = 0.0;
    for (std::size_t i = 0; i < series.n(); ++i) {
        const double j = series.magnitudes[i];
        if (j == ell) ++out.ties;
        if (j > ell) {
            out.durations.push_back(series.times[i] - prev);
            out.excesses.push_back(j - ell);
            prev = series.times[i];
        }
    }
    if (out.durations.empty())
        throw std::invalid_argument("extract_exceedances: no magnitude exceeds the threshold");
    out.p_hat = static_cast<double>(out.durations.size()) / static_cast<double>(series.n());
    out.k = out.durations.size() + 1;
    if (!keep_first || out.durations.front() == 0.0) {
        out.first_dropped = true;
        out.durations.erase(out.durations.begin());
        out.excesses.erase(out.excesses.begin());
    }
    return out;
}

// The k-th largest magnitude, 1 <= k <= n. With distinct magnitudes,
// extraction at this level yields exactly k - 1 strict exceedances.
inline double order_threshold(const EventSeries& series, std::size_t k) {
    series.validate();
    if (k < 1 || k > series.n())
        throw std::invalid_argument("order_threshold: k out of range");
    std::vector<double> mags(series.magnitudes);
    std::nth_element(mags.begin(), mags.begin() + (k - 1), mags.end(),
                     std::greater<double>());
    return mags[k - 1];
}

}  // namespace ctre
