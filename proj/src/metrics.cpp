#include "anclab/metrics.hpp"

#include <cmath>
#include <string>

#include "anclab/errors.hpp"

namespace anclab {

AnrTracker::AnrTracker(double beta) : beta_(beta) {
    if (!(beta > 0.0 && beta < 1.0)) throw ConfigError("ANR beta must be in (0, 1)");
}

std::optional<double> AnrTracker::step(double e, double d) {
    a_e_ = beta_ * a_e_ + (1.0 - beta_) * std::abs(e);
    a_d_ = beta_ * a_d_ + (1.0 - beta_) * std::abs(d);
    if (a_d_ == 0.0) return std::nullopt;
    return 20.0 * std::log10(a_e_ / a_d_);
}

double true_msd(std::span<const double> w, std::span<const double> w_opt) {
    if (w.size() != w_opt.size())
        throw ConfigError("weight vector lengths differ: " + std::to_string(w.size()) +
                          " vs " + std::to_string(w_opt.size()));
    double acc = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        double diff = w[i] - w_opt[i];
        acc += diff * diff;
    }
    return acc;
}

std::vector<double> average_trials(std::span<const std::vector<double>> curves) {
    if (curves.empty()) throw ConfigError("no trial curves to average");
    std::size_t n = curves.front().size();
    for (const auto& c : curves)
        if (c.size() != n) throw ConfigError("trial curves have mixed lengths");
    std::vector<double> mean(n, 0.0);
    for (const auto& c : curves)
        for (std::size_t i = 0; i < n; ++i) mean[i] += c[i];
    for (auto& v : mean) v /= static_cast<double>(curves.size());
    return mean;
}

} // namespace anclab
