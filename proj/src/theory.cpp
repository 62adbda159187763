#include "anclab/theory.hpp"

#include <cmath>
#include <string>

#include "anclab/errors.hpp"
#include "anclab/rng.hpp"

namespace anclab {

namespace {

void require_length(std::size_t filter_length) {
    if (filter_length < 1) throw ConfigError("filter length must be >= 1");
}

} // namespace

double convergence_factor(double mu, std::size_t filter_length) {
    require_length(filter_length);
    double L = static_cast<double>(filter_length);
    return 1.0 - 2.0 * mu / L + mu * mu * (L + 2.0) / (L * L);
}

double ms_stability_bound(std::size_t filter_length) {
    require_length(filter_length);
    double L = static_cast<double>(filter_length);
    return 2.0 * L / (L + 2.0);
}

double optimal_step(std::size_t filter_length) {
    require_length(filter_length);
    double L = static_cast<double>(filter_length);
    return L / (L + 2.0);
}

double theoretical_steady_msd(double mu, std::size_t filter_length, double sigma_e2,
                              double sigma_f2) {
    require_length(filter_length);
    double bound = ms_stability_bound(filter_length);
    if (!(mu > 0.0 && mu < bound))
        throw ConfigError("step-size " + std::to_string(mu) +
                          " outside stable range (0, " + std::to_string(bound) + ")");
    if (!(sigma_f2 > 0.0)) throw ConfigError("sigma_f2 must be > 0");
    if (!(sigma_e2 >= 0.0)) throw ConfigError("sigma_e2 must be >= 0");
    double L = static_cast<double>(filter_length);
    return mu * sigma_e2 / (sigma_f2 * (2.0 * L - mu * (L + 2.0)));
}

double estimate_mean_bound(std::span<const std::vector<double>> xf_samples) {
    if (xf_samples.empty()) throw ConfigError("no filtered-reference samples supplied");
    std::size_t dim = xf_samples.front().size();
    if (dim == 0) throw ConfigError("filtered-reference samples are zero-length");

    // Lambda = mean of xf xf^T / ||xf||^2; all-zero vectors contribute nothing.
    std::vector<double> lambda(dim * dim, 0.0);
    std::size_t used = 0;
    for (const auto& xf : xf_samples) {
        if (xf.size() != dim)
            throw ConfigError("filtered-reference samples have mixed lengths");
        double n2 = 0.0;
        for (double v : xf) n2 += v * v;
        if (n2 == 0.0) continue;
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) lambda[i * dim + j] += xf[i] * xf[j] / n2;
        ++used;
    }
    if (used == 0) throw ConfigError("all filtered-reference samples are zero");
    for (auto& v : lambda) v /= static_cast<double>(used);

    // Power iteration; Lambda is symmetric PSD so this converges to
    // lambda_max from a generic start.
    RngStream rng(0x9e3779b9u, 0);
    std::vector<double> vec(dim), next(dim);
    for (auto& v : vec) v = rng.gaussian();
    double eigen = 0.0;
    for (int it = 0; it < 100; ++it) {
        for (std::size_t i = 0; i < dim; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < dim; ++j) acc += lambda[i * dim + j] * vec[j];
            next[i] = acc;
        }
        double norm = 0.0;
        for (double v : next) norm += v * v;
        norm = std::sqrt(norm);
        if (norm == 0.0) throw ConfigError("degenerate autocorrelation estimate");
        double estimate = norm;
        for (std::size_t i = 0; i < dim; ++i) vec[i] = next[i] / norm;
        if (std::abs(estimate - eigen) <= 1e-10 * std::max(1.0, std::abs(estimate))) {
            eigen = estimate;
            break;
        }
        eigen = estimate;
    }
    if (!(eigen > 0.0)) throw ConfigError("largest eigenvalue estimate is not positive");
    return 2.0 / eigen;
}

} // namespace anclab
