#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "anclab/errors.hpp"
#include "anclab/format.hpp"
#include "anclab/harness.hpp"
#include "anclab/noise.hpp"
#include "anclab/scenario.hpp"

namespace {

int cmd_run(const std::string& scenario_path, std::uint64_t* seed_override,
            std::size_t* trials_override, const std::string& out_dir) {
    anclab::Scenario scenario = anclab::load_scenario(scenario_path);
    if (seed_override) scenario.run.seed = *seed_override;
    if (trials_override) scenario.run.trials = *trials_override;

    anclab::ExperimentResult result = anclab::run_experiment(scenario, out_dir);

    std::cout << "scenario '" << scenario.run.name << "': " << scenario.run.trials
              << " trials x " << scenario.run.iterations << " iterations (seed "
              << scenario.run.seed << ")\n";
    std::cout << "diverged trials: " << result.excluded << " of " << scenario.run.trials
              << "\n";
    double final_anr = result.aggregate.anr_db.back();
    std::cout << "final mean ANR: "
              << (std::isnan(final_anr) ? std::string("NA")
                                        : anclab::format_significant(final_anr, 6) + " dB")
              << "\n";
    std::cout << "wall time: " << anclab::format_significant(result.wall_seconds, 3)
              << " s\n";
    if (!out_dir.empty()) std::cout << "wrote " << out_dir << "/aggregate.csv\n";
    return 0;
}

int cmd_theory(std::size_t filter_length, double mu, double sigma_e2, double sigma_f2) {
    std::cout << anclab::theory_report(filter_length, mu, sigma_e2, sigma_f2);
    return 0;
}

int cmd_gen_noise(const std::string& scenario_path, std::size_t n, std::uint64_t seed,
                  std::uint64_t stream, const std::string& out_path) {
    anclab::Scenario scenario = anclab::load_scenario(scenario_path);
    anclab::RngStream rng(seed, stream);
    anclab::RngStream aux(seed, stream + (1ull << 33));
    std::vector<double> samples = anclab::make_noise(scenario.noise, n, rng, aux);

    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw anclab::IoError(out_path + ": cannot open for writing");
    for (double v : samples) out << anclab::format_double(v) << '\n';
    if (!out) throw anclab::IoError(out_path + ": write failed");
    std::cout << "wrote " << n << " samples to " << out_path << "\n";
    return 0;
}

int cmd_oracle(const std::string& scenario_path, std::size_t trial) {
    anclab::Scenario scenario = anclab::load_scenario(scenario_path);
    anclab::OracleReport report = anclab::run_oracle_trial(scenario, trial);

    std::cout << "trial " << trial << ": " << report.ticks << " ticks compared\n";
    for (std::size_t k = 0; k < report.chosen_vectorized.size(); ++k) {
        std::cout << "  mu[" << k << "] = "
                  << anclab::format_double(scenario.algorithm.mu_list[k])
                  << ": vectorized " << report.chosen_vectorized[k] << ", full-matrix "
                  << report.chosen_full[k] << "\n";
    }
    std::cout << "selection agreement: " << report.agreements << " of " << report.ticks
              << " (" << anclab::format_significant(report.rate(), 6) << ")\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Single-channel feedforward ANC simulation laboratory"};
    app.require_subcommand(1);

    // run
    std::string run_scenario;
    std::uint64_t run_seed = 0;
    std::size_t run_trials = 0;
    std::string run_out;
    bool run_has_seed = false, run_has_trials = false;
    CLI::App* run = app.add_subcommand("run", "Run a scenario's Monte Carlo experiment");
    run->add_option("scenario", run_scenario, "Scenario file")->required();
    run->add_option("--seed", run_seed, "Override the base seed")
        ->each([&](const std::string&) { run_has_seed = true; });
    run->add_option("--trials", run_trials, "Override the trial count")
        ->each([&](const std::string&) { run_has_trials = true; });
    run->add_option("--out", run_out, "Directory for per-trial and aggregate CSVs");

    // theory
    std::size_t theory_length = 16;
    double theory_mu = 0.0, theory_se2 = 0.0, theory_sf2 = 1.0;
    CLI::App* theory = app.add_subcommand("theory", "Print closed-form predictions");
    theory->add_option("--L", theory_length, "Filter length")->required();
    theory->add_option("--mu", theory_mu, "Step-size")->required();
    theory->add_option("--sigma-e2", theory_se2, "Steady-state error power");
    theory->add_option("--sigma-f2", theory_sf2, "Filtered-reference variance");

    // gen-noise
    std::string gen_scenario, gen_out;
    std::size_t gen_n = 0;
    std::uint64_t gen_seed = 42, gen_stream = 0;
    CLI::App* gen = app.add_subcommand("gen-noise", "Write a noise realization as text");
    gen->add_option("scenario", gen_scenario, "Scenario file providing the [noise] section")
        ->required();
    gen->add_option("--n", gen_n, "Sample count")->required();
    gen->add_option("--seed", gen_seed, "Base seed");
    gen->add_option("--stream", gen_stream, "Stream index (trial r uses stream r)");
    gen->add_option("--out", gen_out, "Output text file")->required();

    // oracle
    std::string oracle_scenario;
    std::size_t oracle_trial = 0;
    CLI::App* oracle = app.add_subcommand(
        "oracle", "Compare vectorized trends against the full-matrix reference");
    oracle->add_option("scenario", oracle_scenario, "Scenario file")->required();
    oracle->add_option("--trial", oracle_trial, "Trial index to replay");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (run->parsed())
            return cmd_run(run_scenario, run_has_seed ? &run_seed : nullptr,
                           run_has_trials ? &run_trials : nullptr, run_out);
        if (theory->parsed())
            return cmd_theory(theory_length, theory_mu, theory_se2, theory_sf2);
        if (gen->parsed())
            return cmd_gen_noise(gen_scenario, gen_n, gen_seed, gen_stream, gen_out);
        if (oracle->parsed()) return cmd_oracle(oracle_scenario, oracle_trial);
    } catch (const anclab::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    } catch (const anclab::DivergenceError& e) {
        std::cerr << "divergence: " << e.what() << "\n";
        return 2;
    } catch (const anclab::IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
