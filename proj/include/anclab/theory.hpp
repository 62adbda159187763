#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace anclab {

// Closed-form predictions for the normalized filtered-reference update with
// white input. All functions validate their domains and throw ConfigError
// rather than clamping.

// Per-iteration MSD contraction factor h(mu, L) = 1 - 2mu/L + mu^2(L+2)/L^2.
double convergence_factor(double mu, std::size_t filter_length);

// Mean-square stability region is 0 < mu < 2L/(L+2).
double ms_stability_bound(std::size_t filter_length);

// Fastest-decay step-size, the minimum of the convergence factor: L/(L+2).
double optimal_step(std::size_t filter_length);

// Steady-state MSD prediction mu*sigma_e2 / (sigma_f2 * (2L - mu*(L+2))).
double theoretical_steady_msd(double mu, std::size_t filter_length, double sigma_e2,
                              double sigma_f2);

// Sample estimate of the mean-convergence bound 2 / lambda_max(Lambda) with
// Lambda = mean of xf xf^T / ||xf||^2 over the supplied vectors. Power
// iteration, 100 steps, tolerance 1e-10. Diagnostic only.
double estimate_mean_bound(std::span<const std::vector<double>> xf_samples);

} // namespace anclab
