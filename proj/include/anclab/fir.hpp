#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace anclab {

// Finite impulse response path, taps ordered h[0] = current sample.
struct FirPath {
    std::vector<double> taps;

    std::size_t order() const { return taps.size(); }

    bool operator==(const FirPath&) const = default;
};

// Fixed-length history of the most recent inputs, index 0 = newest.
class DelayLine {
public:
    explicit DelayLine(std::size_t length);

    void push(double x);
    double operator[](std::size_t i) const { return buf_[(head_ + i) % buf_.size()]; }
    std::size_t size() const { return buf_.size(); }

    // Writes the history into out, newest first. out.size() must equal size().
    void copy_to(std::span<double> out) const;

private:
    std::vector<double> buf_;
    std::size_t head_ = 0;
};

// Pushes x and returns the path output for the updated history.
double fir_step(const FirPath& path, DelayLine& line, double x);

// Filters a whole block from zero initial state; output length equals input length.
std::vector<double> fir_batch(const FirPath& path, std::span<const double> x);

// A path bundled with its own history, convenient for streaming plants.
struct FirStream {
    FirPath path;
    DelayLine line;

    explicit FirStream(FirPath p) : path(std::move(p)), line(path.order()) {}

    double step(double x) { return fir_step(path, line, x); }
};

// Named coefficient sets used by the bundled scenarios: "primary",
// "secondary", and "secondary_estimate" (a perturbed secondary model).
FirPath preset_path(const std::string& name);

} // namespace anclab
