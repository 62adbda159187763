#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "anclab/rng.hpp"

namespace anclab {

enum class NoiseKind { White, Ar1, AlphaStable, Bursty, File };

// Declarative description of a reference-noise source. Only the fields for
// the active kind are read; the rest keep their defaults.
struct NoiseSpec {
    NoiseKind kind = NoiseKind::White;

    // white / bursty
    double mean = 0.0;
    double variance = 1.0;
    double variance_after = 1.0;   // bursty: variance once switch_at is reached
    std::size_t switch_at = 0;     // bursty: first index with the new variance

    // ar1: x[k] = pole * x[k-1] + w[k], w white with innovation_variance
    double pole = 0.0;
    double innovation_variance = 1.0;

    // alpha_stable: symmetric, characteristic exponent alpha, dispersion gamma
    double alpha = 2.0;
    double gamma = 1.0;

    // file: mono WAV (PCM16 or float32) or plain text, one sample per line.
    // add_white_variance > 0 mixes independent Gaussian noise into the samples.
    std::string path;
    double add_white_variance = 0.0;

    bool operator==(const NoiseSpec&) const = default;
};

// Gaussian white noise with the given mean and variance.
std::vector<double> gen_white(std::size_t n, double mean, double variance, RngStream& rng);

// First-order autoregression with unit-variance Gaussian innovations and
// zero initial state. |pole| < 1 required.
std::vector<double> gen_ar1(std::size_t n, double pole, RngStream& rng);

// Symmetric alpha-stable samples (Chambers-Mallows-Stuck construction),
// alpha in (0, 2], dispersion gamma > 0. alpha = 2 gives N(0, 2*gamma).
std::vector<double> gen_alpha_stable(std::size_t n, double alpha, double gamma,
                                     RngStream& rng);

// Zero-mean Gaussian noise whose variance jumps from variance_before to
// variance_after at index switch_at.
std::vector<double> gen_bursty(std::size_t n, double variance_before, double variance_after,
                               std::size_t switch_at, RngStream& rng);

// Reads samples from a mono WAV file (PCM16 or IEEE float32) or, for any
// other extension, from text with one sample per line.
std::vector<double> load_noise(const std::string& path);

// Realizes a NoiseSpec. rng drives the primary draw; aux_rng is consumed
// only for file noise with add_white_variance > 0, keeping the additive
// component independent of everything else.
std::vector<double> make_noise(const NoiseSpec& spec, std::size_t n, RngStream& rng,
                               RngStream& aux_rng);

// Empirical characteristic function (1/n) * sum exp(i*t*x[k]).
std::complex<double> empirical_cf(std::span<const double> samples, double t);

} // namespace anclab
