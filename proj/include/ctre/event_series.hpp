#pragma once

// Core data model: a marked renewal sample path (event times and magnitudes)
// and the threshold-exceedance series derived from it.

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace ctre {

// Ordered (time, magnitude) pairs. Times are offsets from the observation
// origin at 0, strictly increasing.
struct EventSeries {
    std::vector<double> times;
    std::vector<double> magnitudes;

    std::size_t n() const { return times.size(); }

    void validate() const {
        if (times.size() != magnitudes.size())
            throw std::invalid_argument("EventSeries: times/magnitudes length mismatch");
        if (times.size() < 2) throw std::invalid_argument("EventSeries: need at least 2 events");
        for (std::size_t i = 0; i < times.size(); ++i) {
            if (i > 0 && !(times[i] > times[i - 1]))
                throw std::invalid_argument("EventSeries: times must be strictly increasing");
        }
    }
};

// Inter-exceedance durations and excess sizes above a threshold.
struct ExceedanceSeries {
    double threshold = 0.0;
    std::size_t k = 0;  // order-statistic index: #crossings + 1
    std::vector<double> durations;
    std::vector<double> excesses;
    double p_hat = 0.0;            // crossings / n
    std::size_t ties = 0;          // magnitudes exactly equal to the threshold
    bool first_dropped = false;    // leading zero-length duration removed
};

}  // namespace ctre
