#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace anclab {

// Switched step-size selector: one diagonal weight-deviation trend per
// candidate step, updated every tick; the candidate with the smallest
// predicted deviation drives the next weight update.
struct SssState {
    std::vector<double> candidates;        // strictly decreasing step-sizes
    std::vector<std::vector<double>> pbar; // K trend vectors of length L
    std::vector<double> j;                 // trend totals, j[k] == sum(pbar[k])
    std::size_t selected = 0;              // index of the current choice
    bool clamp_nonnegative = false;        // optional floor at 0 per element

    SssState(std::vector<double> mus, std::size_t filter_length, double rho);
};

// Advances one diagonal trend vector in place. Requires xf_norm2 > 0; the
// caller skips silent-reference ticks entirely.
void msd_trend_step(std::span<double> pbar_k, double mu, std::span<const double> xf,
                    double xf_norm2, double sigma_e2, double g, bool clamp_nonnegative);

// Trend total: plain element sum.
double msd_trend_value(std::span<const double> pbar_k);

// Index and value of the candidate with the minimal trend; ties go to the
// smaller step (the later index). Non-finite trends are a fault.
std::pair<double, std::size_t> select_step(std::span<const double> j,
                                           std::span<const double> candidates,
                                           std::size_t iteration);

// Updates every candidate trend and returns the newly selected step-size.
double sss_iteration(SssState& state, std::span<const double> xf, double xf_norm2,
                     double sigma_e2, double g, std::size_t iteration);

// Brute-force reference: the same trends kept as full L x L deviation
// covariance matrices (row-major). Diagnostic only; quadratic per tick.
struct FullMsdOracle {
    std::vector<double> candidates;
    std::vector<std::vector<double>> p; // K matrices, L*L row-major
    std::size_t dim = 0;

    FullMsdOracle(std::vector<double> mus, std::size_t filter_length, double rho);

    double trend_value(std::size_t k) const;
    std::size_t select(std::size_t iteration) const;
};

// Advances one full covariance trend matrix in place (row-major L x L).
void full_matrix_msd_step(std::span<double> p, std::size_t dim, double mu,
                          std::span<const double> xf, double xf_norm2, double sigma_e2,
                          double g);

// Advances every oracle trend for one tick.
void oracle_iteration(FullMsdOracle& oracle, std::span<const double> xf, double xf_norm2,
                      double sigma_e2, double g);

} // namespace anclab
