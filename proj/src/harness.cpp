#include "anclab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "anclab/errors.hpp"
#include "anclab/format.hpp"
#include "anclab/metrics.hpp"
#include "anclab/sss.hpp"
#include "anclab/theory.hpp"

namespace anclab {

namespace {

constexpr std::uint64_t kMeasurementStreamOffset = 1ull << 32;
constexpr std::uint64_t kFileAugmentStreamOffset = 1ull << 33;

// Identification mode replaces both secondary paths with unit impulses so
// the optimal weights are exactly the primary coefficients.
Scenario effective_scenario(const Scenario& scenario) {
    if (!scenario.run.identification_mode) return scenario;
    Scenario s = scenario;
    s.secondary = FirPath{{1.0}};
    s.secondary_estimate = FirPath{{1.0}};
    return s;
}

std::vector<double> optimum_weights(const Scenario& s) {
    if (s.primary.order() > s.run.filter_length)
        throw ConfigError("identification_mode needs filter_length >= primary path order (" +
                          std::to_string(s.primary.order()) + ")");
    std::vector<double> w_opt(s.run.filter_length, 0.0);
    for (std::size_t i = 0; i < s.primary.order(); ++i) w_opt[i] = s.primary.taps[i];
    return w_opt;
}

} // namespace

TrialResult run_trial(const Scenario& scenario, std::size_t trial_index) {
    auto started = std::chrono::steady_clock::now();
    Scenario s = effective_scenario(scenario);
    const std::size_t n = s.run.iterations;
    const bool switched = s.algorithm.switched();
    const bool ident = s.run.identification_mode;
    const std::size_t k_count = switched ? s.algorithm.mu_list.size() : 0;

    RngStream ref_rng(s.run.seed, trial_index);
    RngStream meas_rng(s.run.seed, trial_index + kMeasurementStreamOffset);
    RngStream aux_rng(s.run.seed, trial_index + kFileAugmentStreamOffset);
    std::vector<double> x = make_noise(s.noise, n, ref_rng, aux_rng);

    Plant plant(s.primary, s.secondary);
    ControllerState ctl(s.run.filter_length, s.secondary_estimate, s.run.epsilon);
    std::optional<SssState> sss;
    if (switched) {
        sss.emplace(s.algorithm.mu_list, s.run.filter_length, s.algorithm.rho);
        sss->clamp_nonnegative = s.algorithm.clamp_trends;
    }
    AnrTracker anr(s.run.anr_beta);
    std::vector<double> w_opt;
    if (ident) w_opt = optimum_weights(s);
    const double meas_sd = std::sqrt(s.run.measurement_noise_variance);
    const ScalingKind& scaling = s.algorithm.scaling;
    const double lambda = s.algorithm.lambda;

    TrialResult result;
    TrialTrace& trace = result.trace;
    trace.e.reserve(n);
    trace.d.reserve(n);
    trace.anr_db.reserve(n);
    trace.selected_mu.reserve(n);
    trace.true_msd.reserve(n);
    trace.j.assign(k_count, {});
    for (auto& col : trace.j) col.reserve(n);

    double nan = std::numeric_limits<double>::quiet_NaN();
    result.final_anr_db = nan;

    for (std::size_t m = 0; m < n; ++m) {
        double v = meas_sd > 0.0 ? meas_sd * meas_rng.gaussian() : 0.0;
        double mu_used;
        AncTick tick;
        try {
            tick = anc_prepare(plant, ctl, scaling, x[m], v, lambda, m);
            if (switched) {
                if (ctl.xf_norm2 > ctl.epsilon) {
                    mu_used = sss_iteration(*sss, ctl.xf, ctl.xf_norm2, ctl.sigma_e2,
                                            tick.g, m);
                } else {
                    // Silent reference: no trend information this tick, keep
                    // the previous selection.
                    mu_used = sss->candidates[sss->selected];
                }
            } else {
                mu_used = s.algorithm.mu;
            }
            weight_update(ctl, tick.e, mu_used, tick.g, m);
        } catch (const DivergenceError& err) {
            result.diverged = true;
            result.diverged_at = err.iteration();
            result.divergence_reason = err.what();
            break;
        }

        trace.e.push_back(tick.e);
        trace.d.push_back(tick.d);
        auto anr_db = anr.step(tick.e, tick.d);
        trace.anr_db.push_back(anr_db ? *anr_db : nan);
        trace.selected_mu.push_back(mu_used);
        trace.true_msd.push_back(ident ? true_msd(ctl.w, w_opt) : nan);
        for (std::size_t k = 0; k < k_count; ++k) trace.j[k].push_back(sss->j[k]);

        if (anr_db) result.final_anr_db = *anr_db;
        result.final_selected_mu = mu_used;
    }

    result.final_w = ctl.w;
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return result;
}

void write_trace_csv(std::ostream& out, const TrialTrace& trace) {
    const std::size_t candidates = trace.j.size();
    out << "iter,e,d,anr_db,selected_mu";
    for (std::size_t k = 0; k < candidates; ++k) out << ",J_" << (k + 1);
    out << ",true_msd\n";
    for (std::size_t m = 0; m < trace.size(); ++m) {
        out << m << ',' << format_double(trace.e[m]) << ',' << format_double(trace.d[m])
            << ',';
        if (std::isnan(trace.anr_db[m]))
            out << "NA";
        else
            out << format_double(trace.anr_db[m]);
        out << ',' << format_double(trace.selected_mu[m]);
        for (std::size_t k = 0; k < candidates; ++k)
            out << ',' << format_double(trace.j[k][m]);
        out << ',';
        if (!std::isnan(trace.true_msd[m])) out << format_double(trace.true_msd[m]);
        out << '\n';
    }
}

namespace {

std::string trial_file_name(std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "trial_%03zu.csv", index);
    return buf;
}

void write_file(const std::filesystem::path& path, const std::string& payload) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path.string() + ": cannot open for writing");
    out << payload;
    if (!out) throw IoError(path.string() + ": write failed");
}

std::string utc_timestamp() {
    std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

const char* algorithm_label(const AlgorithmSpec& a) {
    switch (a.kind) {
        case AlgorithmSpec::Kind::FxnlmsFixed: return "fxnlms_fixed";
        case AlgorithmSpec::Kind::Sss: return "sss";
        case AlgorithmSpec::Kind::RSss: return "r_sss";
        case AlgorithmSpec::Kind::RFixed: return "r_fixed";
    }
    return "fxnlms_fixed";
}

// Accumulates traces into a pointwise sum, then divides by the count.
struct TraceAccumulator {
    TrialTrace sum;
    std::size_t count = 0;

    void add(const TrialTrace& t) {
        if (count == 0) {
            sum = t;
        } else {
            for (std::size_t m = 0; m < t.size(); ++m) {
                sum.e[m] += t.e[m];
                sum.d[m] += t.d[m];
                sum.anr_db[m] += t.anr_db[m];
                sum.selected_mu[m] += t.selected_mu[m];
                sum.true_msd[m] += t.true_msd[m];
            }
            for (std::size_t k = 0; k < t.j.size(); ++k)
                for (std::size_t m = 0; m < t.size(); ++m) sum.j[k][m] += t.j[k][m];
        }
        ++count;
    }

    TrialTrace mean() const {
        TrialTrace out = sum;
        // Divide rather than multiply by a precomputed reciprocal so the
        // result is bitwise identical to metrics' average_trials.
        double n = static_cast<double>(count);
        for (auto* col : {&out.e, &out.d, &out.anr_db, &out.selected_mu, &out.true_msd})
            for (auto& v : *col) v /= n;
        for (auto& col : out.j)
            for (auto& v : col) v /= n;
        return out;
    }
};

} // namespace

ExperimentResult run_experiment(const Scenario& scenario, const std::string& out_dir) {
    auto started = std::chrono::steady_clock::now();
    const std::size_t trials = scenario.run.trials;

    std::filesystem::path dir;
    if (!out_dir.empty()) {
        dir = out_dir;
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec) throw IoError(out_dir + ": cannot create output directory");
    }

    unsigned hw = std::thread::hardware_concurrency();
    std::size_t workers = std::min<std::size_t>(std::max(hw, 1u), trials);

    // Workers deposit results indexed by trial; the main thread consumes
    // them strictly in trial order so the aggregate never depends on
    // completion order.
    std::mutex mu;
    std::condition_variable ready;
    std::vector<std::optional<TrialResult>> slots(trials);
    std::atomic<std::size_t> next_trial{0};
    std::exception_ptr worker_error;

    auto work = [&]() {
        while (true) {
            std::size_t index = next_trial.fetch_add(1);
            if (index >= trials) return;
            try {
                TrialResult result = run_trial(scenario, index);
                std::lock_guard<std::mutex> lock(mu);
                slots[index] = std::move(result);
                ready.notify_all();
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (!worker_error) worker_error = std::current_exception();
                ready.notify_all();
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);

    ExperimentResult experiment;
    experiment.trials.resize(trials);
    TraceAccumulator accumulator;
    std::vector<std::size_t> excluded_indices;

    for (std::size_t index = 0; index < trials; ++index) {
        TrialResult result;
        {
            std::unique_lock<std::mutex> lock(mu);
            ready.wait(lock, [&] { return slots[index].has_value() || worker_error; });
            if (worker_error) break;
            result = std::move(*slots[index]);
            slots[index].reset();
        }

        if (!dir.empty()) {
            std::ostringstream csv;
            write_trace_csv(csv, result.trace);
            write_file(dir / trial_file_name(index), csv.str());
        }

        TrialSummary& summary = experiment.trials[index];
        summary.diverged = result.diverged;
        summary.diverged_at = result.diverged_at;
        summary.divergence_reason = result.divergence_reason;
        summary.final_anr_db = result.final_anr_db;
        summary.final_selected_mu = result.final_selected_mu;
        summary.wall_seconds = result.wall_seconds;

        if (result.diverged) {
            ++experiment.excluded;
            excluded_indices.push_back(index);
        } else {
            accumulator.add(result.trace);
        }
    }

    for (auto& t : pool) t.join();
    if (worker_error) std::rethrow_exception(worker_error);

    if (accumulator.count == 0)
        throw DivergenceError("all " + std::to_string(trials) + " trials diverged", 0);
    experiment.aggregate = accumulator.mean();
    experiment.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    if (!dir.empty()) {
        std::ostringstream csv;
        write_trace_csv(csv, experiment.aggregate);
        write_file(dir / "aggregate.csv", csv.str());

        nlohmann::json meta;
        meta["name"] = scenario.run.name;
        meta["version"] = kArtifactVersion;
        meta["created_utc"] = utc_timestamp();
        meta["seed"] = scenario.run.seed;
        meta["trials"] = trials;
        meta["iterations"] = scenario.run.iterations;
        meta["filter_length"] = scenario.run.filter_length;
        meta["algorithm"] = algorithm_label(scenario.algorithm);
        meta["excluded_count"] = experiment.excluded;
        meta["excluded_trials"] = excluded_indices;
        meta["wall_seconds"] = experiment.wall_seconds;
        write_file(dir / "metadata.json", meta.dump(2) + "\n");
    }

    return experiment;
}

std::string theory_report(std::size_t filter_length, double mu, double sigma_e2,
                          double sigma_f2) {
    std::ostringstream out;
    out << "stability_bound = " << format_significant(ms_stability_bound(filter_length), 6)
        << "\n";
    out << "optimal_step = " << format_significant(optimal_step(filter_length), 6) << "\n";
    out << "convergence_factor = " << format_significant(convergence_factor(mu, filter_length), 6)
        << "\n";
    out << "steady_state_msd = "
        << format_significant(theoretical_steady_msd(mu, filter_length, sigma_e2, sigma_f2), 6)
        << "\n";
    return out.str();
}

OracleReport run_oracle_trial(const Scenario& scenario, std::size_t trial_index) {
    Scenario s = effective_scenario(scenario);
    if (!s.algorithm.switched())
        throw ConfigError("oracle comparison needs a switched (sss / r_sss) scenario");
    const std::size_t n = s.run.iterations;
    const std::size_t k_count = s.algorithm.mu_list.size();

    RngStream ref_rng(s.run.seed, trial_index);
    RngStream meas_rng(s.run.seed, trial_index + kMeasurementStreamOffset);
    RngStream aux_rng(s.run.seed, trial_index + kFileAugmentStreamOffset);
    std::vector<double> x = make_noise(s.noise, n, ref_rng, aux_rng);

    Plant plant(s.primary, s.secondary);
    ControllerState ctl(s.run.filter_length, s.secondary_estimate, s.run.epsilon);
    SssState sss(s.algorithm.mu_list, s.run.filter_length, s.algorithm.rho);
    sss.clamp_nonnegative = s.algorithm.clamp_trends;
    FullMsdOracle oracle(s.algorithm.mu_list, s.run.filter_length, s.algorithm.rho);
    const double meas_sd = std::sqrt(s.run.measurement_noise_variance);

    OracleReport report;
    report.chosen_vectorized.assign(k_count, 0);
    report.chosen_full.assign(k_count, 0);

    for (std::size_t m = 0; m < n; ++m) {
        double v = meas_sd > 0.0 ? meas_sd * meas_rng.gaussian() : 0.0;
        AncTick tick = anc_prepare(plant, ctl, s.algorithm.scaling, x[m], v,
                                   s.algorithm.lambda, m);
        double mu_used;
        if (ctl.xf_norm2 > ctl.epsilon) {
            mu_used = sss_iteration(sss, ctl.xf, ctl.xf_norm2, ctl.sigma_e2, tick.g, m);
            oracle_iteration(oracle, ctl.xf, ctl.xf_norm2, ctl.sigma_e2, tick.g);
            std::size_t full_pick = oracle.select(m);
            ++report.ticks;
            ++report.chosen_vectorized[sss.selected];
            ++report.chosen_full[full_pick];
            if (full_pick == sss.selected) ++report.agreements;
        } else {
            mu_used = sss.candidates[sss.selected];
        }
        // The vectorized engine drives the actual adaptation; the oracle
        // only watches.
        weight_update(ctl, tick.e, mu_used, tick.g, m);
    }
    return report;
}

} // namespace anclab
