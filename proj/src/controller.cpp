#include "anclab/controller.hpp"

#include <cmath>

#include "anclab/errors.hpp"

namespace anclab {

namespace {

// Weight norms beyond this are treated as runaway adaptation.
constexpr double kWeightNormBound = 1e6;

// log(cosh(a)) and log(sinh(|a|)) without overflowing cosh/sinh themselves.
// For large |a| both approach |a| - log 2.
double log_cosh(double a) {
    double abs_a = std::abs(a);
    if (abs_a > 20.0) return abs_a - 0.6931471805599453;
    return std::log(std::cosh(a));
}

double log_sinh_abs(double a) {
    double abs_a = std::abs(a);
    if (abs_a > 20.0) return abs_a - 0.6931471805599453;
    return std::log(std::sinh(abs_a));
}

} // namespace

double filtered_reference_step(ControllerState& state, double x) {
    double xf = state.s_hat.step(x);
    state.xf_line.push(xf);
    state.xf_line.copy_to(state.xf);
    double n2 = 0.0;
    for (double v : state.xf) n2 += v * v;
    state.xf_norm2 = n2;
    return xf;
}

double controller_output(const ControllerState& state) {
    double acc = 0.0;
    for (std::size_t i = 0; i < state.w.size(); ++i) acc += state.w[i] * state.x_line[i];
    return acc;
}

double scaling_factor(const ScalingKind& kind, double e) {
    switch (kind.fn) {
        case ScalingKind::Fn::Unit:
            return 1.0;
        case ScalingKind::Fn::Mcc:
            return std::exp(-(e * e) / (2.0 * kind.sigma * kind.sigma));
        case ScalingKind::Fn::Ehcf: {
            // g = exp(-cosh(eta*e)^theta) * sinh(eta*e) * cosh(eta*e)^(theta-1) / e,
            // evaluated in log space so huge |e| underflows to 0 instead of
            // producing inf * 0. The e -> 0 limit is eta * exp(-1).
            if (std::abs(e) < 1e-8) return kind.eta * std::exp(-1.0);
            double a = kind.eta * e;
            double lc = log_cosh(a);
            double log_g = -std::exp(kind.theta * lc) + log_sinh_abs(a) +
                           (kind.theta - 1.0) * lc - std::log(std::abs(e));
            // sinh(a) and e share their sign, so g is always nonnegative.
            return std::exp(log_g);
        }
    }
    return 1.0;
}

void weight_update(ControllerState& state, double e, double mu, double g,
                   std::size_t iteration) {
    double denom = state.xf_norm2 + state.epsilon;
    double gain = mu * g * e / denom;
    double norm2 = 0.0;
    for (std::size_t i = 0; i < state.w.size(); ++i) {
        state.w[i] += gain * state.xf[i];
        norm2 += state.w[i] * state.w[i];
    }
    if (!std::isfinite(norm2))
        throw DivergenceError("weight vector became non-finite", iteration);
    if (norm2 > kWeightNormBound * kWeightNormBound)
        throw DivergenceError("weight norm exceeded runaway bound", iteration);
}

double update_error_power(ControllerState& state, double e, double lambda) {
    if (!state.sigma_e2_primed) {
        state.sigma_e2 = e * e;
        state.sigma_e2_primed = true;
    } else {
        state.sigma_e2 = lambda * state.sigma_e2 + (1.0 - lambda) * e * e;
    }
    return state.sigma_e2;
}

AncTick anc_prepare(Plant& plant, ControllerState& state, const ScalingKind& kind,
                    double x, double v, double lambda, std::size_t iteration) {
    AncTick tick;
    tick.d = plant.primary.step(x);
    state.x_line.push(x);
    tick.y = controller_output(state);
    tick.d_hat = plant.secondary.step(tick.y);
    tick.e = residual_error(tick.d, tick.d_hat, v);
    if (!std::isfinite(tick.e))
        throw DivergenceError("error signal became non-finite", iteration);
    filtered_reference_step(state, x);
    update_error_power(state, tick.e, lambda);
    tick.g = scaling_factor(kind, tick.e);
    return tick;
}

AncTick anc_step(Plant& plant, ControllerState& state, const ScalingKind& kind,
                 double x, double v, double mu, double lambda, std::size_t iteration) {
    AncTick tick = anc_prepare(plant, state, kind, x, v, lambda, iteration);
    weight_update(state, tick.e, mu, tick.g, iteration);
    return tick;
}

} // namespace anclab
