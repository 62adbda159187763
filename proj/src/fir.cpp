#include "anclab/fir.hpp"

#include <algorithm>

#include "anclab/errors.hpp"

namespace anclab {

DelayLine::DelayLine(std::size_t length) : buf_(length, 0.0) {
    if (length == 0) throw ConfigError("DelayLine length must be positive");
}

void DelayLine::push(double x) {
    head_ = (head_ + buf_.size() - 1) % buf_.size();
    buf_[head_] = x;
}

void DelayLine::copy_to(std::span<double> out) const {
    for (std::size_t i = 0; i < buf_.size(); ++i) out[i] = (*this)[i];
}

double fir_step(const FirPath& path, DelayLine& line, double x) {
    line.push(x);
    double acc = 0.0;
    for (std::size_t i = 0; i < path.taps.size(); ++i) acc += path.taps[i] * line[i];
    return acc;
}

std::vector<double> fir_batch(const FirPath& path, std::span<const double> x) {
    std::vector<double> y(x.size(), 0.0);
    for (std::size_t n = 0; n < x.size(); ++n) {
        double acc = 0.0;
        std::size_t m_max = std::min(path.taps.size(), n + 1);
        for (std::size_t m = 0; m < m_max; ++m) acc += path.taps[m] * x[n - m];
        y[n] = acc;
    }
    return y;
}

FirPath preset_path(const std::string& name) {
    if (name == "primary") {
        return {{0.01, -0.05, 0.02, 0.75, -0.4, -0.5, -0.2, -0.05, 0.3, 0.005}};
    }
    if (name == "secondary") {
        return {{0.01, -0.01, 0.9, 0.02, -0.5}};
    }
    if (name == "secondary_estimate") {
        return {{-0.0455, -0.0453, 0.8683, 0.0399, -0.518}};
    }
    throw ConfigError("unknown preset path '" + name + "'");
}

} // namespace anclab
