#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace anclab {

// Averaged noise reduction: 20*log10 of the ratio of exponentially smoothed
// |e| to smoothed |d|. Undefined (nullopt) until the disturbance smoother
// has seen a nonzero sample.
class AnrTracker {
public:
    explicit AnrTracker(double beta);

    // Feeds one (e, d) pair and returns the ANR in dB, or nullopt while the
    // disturbance average is still zero.
    std::optional<double> step(double e, double d);

    double smoothed_error() const { return a_e_; }
    double smoothed_disturbance() const { return a_d_; }

private:
    double beta_;
    double a_e_ = 0.0;
    double a_d_ = 0.0;
};

// Squared Euclidean distance between a weight vector and the optimum.
double true_msd(std::span<const double> w, std::span<const double> w_opt);

// Pointwise arithmetic mean of equal-length per-trial curves. NaN is used
// as the "undefined" marker and propagates, so an undefined sample in any
// trial leaves that position undefined in the mean.
std::vector<double> average_trials(std::span<const std::vector<double>> curves);

} // namespace anclab
