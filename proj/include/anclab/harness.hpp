#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "anclab/scenario.hpp"

namespace anclab {

// Per-iteration history of one trial. anr_db uses NaN for "not yet
// defined"; true_msd uses NaN outside identification mode. j holds one
// column per step-size candidate and is empty for fixed-step algorithms.
struct TrialTrace {
    std::vector<double> e;
    std::vector<double> d;
    std::vector<double> anr_db;
    std::vector<double> selected_mu;
    std::vector<double> true_msd;
    std::vector<std::vector<double>> j;

    std::size_t size() const { return e.size(); }
};

struct TrialResult {
    TrialTrace trace;
    bool diverged = false;
    std::size_t diverged_at = 0;
    std::string divergence_reason;
    double final_anr_db = 0.0;     // NaN if never defined or trial diverged early
    double final_selected_mu = 0.0;
    double wall_seconds = 0.0;
    std::vector<double> final_w;
};

// Small footprint of a trial kept after its trace is folded into the mean.
struct TrialSummary {
    bool diverged = false;
    std::size_t diverged_at = 0;
    std::string divergence_reason;
    double final_anr_db = 0.0;
    double final_selected_mu = 0.0;
    double wall_seconds = 0.0;
};

struct ExperimentResult {
    TrialTrace aggregate;                // pointwise mean over non-diverged trials
    std::vector<TrialSummary> trials;    // one per trial, in index order
    std::size_t excluded = 0;
    double wall_seconds = 0.0;
};

// Runs one trial. Deterministic function of (scenario, scenario.run.seed,
// trial_index): the reference noise uses stream index trial_index, the
// measurement noise stream index trial_index + 2^32, and file-noise
// augmentation stream index trial_index + 2^33.
TrialResult run_trial(const Scenario& scenario, std::size_t trial_index);

// Runs all trials (workers in parallel, aggregation in trial-index order so
// results do not depend on scheduling). If out_dir is nonempty, writes
// trial_NNN.csv per trial, aggregate.csv, and metadata.json there. Throws
// DivergenceError if every trial diverged.
ExperimentResult run_experiment(const Scenario& scenario, const std::string& out_dir);

// CSV emission for one trace (trial or aggregate), schema
// iter,e,d,anr_db,selected_mu[,J_1..J_K],true_msd. NaN anr cells are "NA",
// NaN true_msd cells are empty.
void write_trace_csv(std::ostream& out, const TrialTrace& trace);

// Side-by-side run of the vectorized trend engine and the full-matrix
// reference on one trial of a switched scenario; counts how often both pick
// the same step-size index.
struct OracleReport {
    std::size_t ticks = 0;
    std::size_t agreements = 0;
    std::vector<std::size_t> chosen_vectorized;  // per-candidate pick counts
    std::vector<std::size_t> chosen_full;

    double rate() const {
        return ticks == 0 ? 0.0
                          : static_cast<double>(agreements) / static_cast<double>(ticks);
    }
};

OracleReport run_oracle_trial(const Scenario& scenario, std::size_t trial_index);

// Human-readable closed-form report (6 significant digits): stability
// bound, optimal step, convergence factor at mu, and predicted steady-state
// MSD. Domain violations surface as ConfigError.
std::string theory_report(std::size_t filter_length, double mu, double sigma_e2,
                          double sigma_f2);

// Populated in metadata.json so emitted data can be traced to a build.
inline constexpr const char* kArtifactVersion = "1.0.0";

} // namespace anclab
