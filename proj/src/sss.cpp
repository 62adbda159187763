#include "anclab/sss.hpp"

#include <algorithm>
#include <cmath>

#include "anclab/errors.hpp"

namespace anclab {

namespace {

void validate_candidates(const std::vector<double>& mus, std::size_t filter_length) {
    if (mus.empty()) throw ConfigError("step-size candidate list is empty");
    double bound = 2.0 * static_cast<double>(filter_length) /
                   (static_cast<double>(filter_length) + 2.0);
    for (std::size_t k = 0; k < mus.size(); ++k) {
        if (!(mus[k] > 0.0 && mus[k] < bound))
            throw ConfigError("step-size candidate " + std::to_string(mus[k]) +
                              " outside stable range (0, " + std::to_string(bound) + ")");
        if (k > 0 && !(mus[k] < mus[k - 1]))
            throw ConfigError("step-size candidates must be strictly decreasing");
    }
}

} // namespace

SssState::SssState(std::vector<double> mus, std::size_t filter_length, double rho)
    : candidates(std::move(mus)) {
    validate_candidates(candidates, filter_length);
    if (!(rho > 0.0)) throw ConfigError("trend seed rho must be > 0");
    pbar.assign(candidates.size(), std::vector<double>(filter_length, rho));
    j.assign(candidates.size(), rho * static_cast<double>(filter_length));
    selected = 0;
}

void msd_trend_step(std::span<double> pbar_k, double mu, std::span<const double> xf,
                    double xf_norm2, double sigma_e2, double g, bool clamp_nonnegative) {
    double n2 = xf_norm2;
    double n4 = n2 * n2;
    double mg = mu * g;
    double mg2 = mg * mg;

    double weighted_sum = 0.0;
    for (std::size_t i = 0; i < pbar_k.size(); ++i) {
        double r = xf[i] * xf[i];
        weighted_sum += r * pbar_k[i];
    }

    double c1 = 2.0 * mg / n2;
    double c2 = mg2 * sigma_e2 / n4;
    double c3 = 2.0 * mg2 / n4;
    double c4 = mg2 / n4;
    for (std::size_t i = 0; i < pbar_k.size(); ++i) {
        double r = xf[i] * xf[i];
        double p = pbar_k[i];
        p = (1.0 - c1 * r) * p + c2 * r + c3 * r * r * p + c4 * r * weighted_sum;
        if (clamp_nonnegative && p < 0.0) p = 0.0;
        pbar_k[i] = p;
    }
}

double msd_trend_value(std::span<const double> pbar_k) {
    double acc = 0.0;
    for (double v : pbar_k) acc += v;
    return acc;
}

std::pair<double, std::size_t> select_step(std::span<const double> j,
                                           std::span<const double> candidates,
                                           std::size_t iteration) {
    std::size_t best = 0;
    for (std::size_t k = 0; k < j.size(); ++k) {
        if (!std::isfinite(j[k]))
            throw DivergenceError("step-size trend became non-finite", iteration);
        // <= so that ties move toward the smaller step (later index).
        if (j[k] <= j[best]) best = k;
    }
    return {candidates[best], best};
}

double sss_iteration(SssState& state, std::span<const double> xf, double xf_norm2,
                     double sigma_e2, double g, std::size_t iteration) {
    for (std::size_t k = 0; k < state.candidates.size(); ++k) {
        msd_trend_step(state.pbar[k], state.candidates[k], xf, xf_norm2, sigma_e2, g,
                       state.clamp_nonnegative);
        state.j[k] = msd_trend_value(state.pbar[k]);
    }
    auto [mu, index] = select_step(state.j, state.candidates, iteration);
    state.selected = index;
    return mu;
}

FullMsdOracle::FullMsdOracle(std::vector<double> mus, std::size_t filter_length, double rho)
    : candidates(std::move(mus)), dim(filter_length) {
    validate_candidates(candidates, filter_length);
    if (!(rho > 0.0)) throw ConfigError("trend seed rho must be > 0");
    p.assign(candidates.size(), std::vector<double>(dim * dim, 0.0));
    for (auto& mat : p)
        for (std::size_t i = 0; i < dim; ++i) mat[i * dim + i] = rho;
}

double FullMsdOracle::trend_value(std::size_t k) const {
    const auto& mat = p[k];
    double acc = 0.0;
    for (std::size_t i = 0; i < dim; ++i) acc += mat[i * dim + i];
    return acc;
}

std::size_t FullMsdOracle::select(std::size_t iteration) const {
    std::vector<double> traces(candidates.size());
    for (std::size_t k = 0; k < candidates.size(); ++k) traces[k] = trend_value(k);
    return select_step(traces, candidates, iteration).second;
}

void full_matrix_msd_step(std::span<double> p, std::size_t dim, double mu,
                          std::span<const double> xf, double xf_norm2, double sigma_e2,
                          double g) {
    double n2 = xf_norm2;
    double n4 = n2 * n2;
    double mg = mu * g;
    double mg2 = mg * mg;

    // With the instantaneous rank-one R = xf xf^T, the matrix products
    // collapse: R P has rows xf_i * u with u = P^T xf, and both R P R and
    // R * Tr(R P) equal q * R with q = xf^T P xf.
    std::vector<double> u(dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i) {
        double xi = xf[i];
        if (xi == 0.0) continue;
        for (std::size_t jj = 0; jj < dim; ++jj) u[jj] += xi * p[i * dim + jj];
    }
    double q = 0.0;
    for (std::size_t jj = 0; jj < dim; ++jj) q += u[jj] * xf[jj];

    double c1 = 2.0 * mg / n2;
    double c2 = mg2 / n4;
    double add = c2 * (sigma_e2 + 3.0 * q);
    for (std::size_t i = 0; i < dim; ++i) {
        double xi = xf[i];
        for (std::size_t jj = 0; jj < dim; ++jj) {
            p[i * dim + jj] += -c1 * xi * u[jj] + add * xi * xf[jj];
        }
    }
}

void oracle_iteration(FullMsdOracle& oracle, std::span<const double> xf, double xf_norm2,
                      double sigma_e2, double g) {
    for (std::size_t k = 0; k < oracle.candidates.size(); ++k) {
        full_matrix_msd_step(oracle.p[k], oracle.dim, oracle.candidates[k], xf, xf_norm2,
                             sigma_e2, g);
    }
}

} // namespace anclab
