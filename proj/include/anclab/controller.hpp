#pragma once

#include <cstddef>
#include <vector>

#include "anclab/fir.hpp"

namespace anclab {

// Physical signal paths: reference -> disturbance (primary) and
// controller output -> error microphone (secondary).
struct Plant {
    FirStream primary;
    FirStream secondary;

    Plant(FirPath primary_path, FirPath secondary_path)
        : primary(std::move(primary_path)), secondary(std::move(secondary_path)) {}
};

// Multiplicative robust attenuation applied to the error inside the weight
// update. Unit leaves the update untouched; Mcc uses a Gaussian kernel of
// width sigma; Ehcf uses the exponential hyperbolic cosine family (eta,
// theta). Parameters must be strictly positive.
struct ScalingKind {
    enum class Fn { Unit, Mcc, Ehcf };

    Fn fn = Fn::Unit;
    double sigma = 1.0;
    double eta = 1.0;
    double theta = 1.0;

    bool operator==(const ScalingKind&) const = default;
};

// Adaptive controller: weights, signal histories, the secondary-path
// estimate it filters the reference through, and the recursive error power.
struct ControllerState {
    std::vector<double> w;
    DelayLine x_line;
    FirStream s_hat;
    DelayLine xf_line;
    double sigma_e2 = 0.0;
    bool sigma_e2_primed = false;
    double epsilon = 1e-10;

    // Dense copy of xf_line (newest first) and its squared norm, refreshed
    // by filtered_reference_step so the update and the trend engine never
    // walk the ring buffer repeatedly.
    std::vector<double> xf;
    double xf_norm2 = 0.0;

    ControllerState(std::size_t filter_length, FirPath s_hat_path, double eps)
        : w(filter_length, 0.0),
          x_line(filter_length),
          s_hat(std::move(s_hat_path)),
          xf_line(filter_length),
          epsilon(eps),
          xf(filter_length, 0.0) {}
};

// Everything one simulation tick produces before (and independent of) the
// weight update.
struct AncTick {
    double d = 0.0;      // disturbance at the cancellation point
    double y = 0.0;      // controller output
    double d_hat = 0.0;  // anti-noise arriving through the secondary path
    double e = 0.0;      // residual error (d - d_hat + v)
    double g = 0.0;      // robust scaling factor for this error
};

// Filters x through the secondary-path estimate, pushes the result into the
// filtered-reference history, and refreshes the dense copy and its norm.
double filtered_reference_step(ControllerState& state, double x);

// y = w . [x(m), x(m-1), ...] over the current reference history.
double controller_output(const ControllerState& state);

inline double residual_error(double d, double d_hat, double v) { return d - d_hat + v; }

// Robust attenuation g[e]. Always finite; Unit returns 1.
double scaling_factor(const ScalingKind& kind, double e);

// w += mu * g * e * xf / (||xf||^2 + epsilon). Throws DivergenceError if the
// result is non-finite or the weight norm passes the runaway bound.
void weight_update(ControllerState& state, double e, double mu, double g,
                   std::size_t iteration);

// sigma_e2 <- lambda * sigma_e2 + (1 - lambda) * e^2, except the very first
// sample initializes sigma_e2 to e^2 outright to avoid startup bias.
double update_error_power(ControllerState& state, double e, double lambda);

// Steps (a)-(e) of a tick: advances the plant, computes y, d_hat, e, the
// filtered reference, the error power, and the scaling factor. The weight
// update is separate so a step-size selector can run in between.
AncTick anc_prepare(Plant& plant, ControllerState& state, const ScalingKind& kind,
                    double x, double v, double lambda, std::size_t iteration);

// A whole fixed-step tick: anc_prepare followed by weight_update.
AncTick anc_step(Plant& plant, ControllerState& state, const ScalingKind& kind,
                 double x, double v, double mu, double lambda, std::size_t iteration);

} // namespace anclab
