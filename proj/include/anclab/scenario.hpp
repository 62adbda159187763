#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "anclab/controller.hpp"
#include "anclab/fir.hpp"
#include "anclab/noise.hpp"

namespace anclab {

// Which update drives the controller and whether the step-size is fixed or
// switched. Robust kinds additionally carry a ScalingKind.
struct AlgorithmSpec {
    enum class Kind { FxnlmsFixed, Sss, RSss, RFixed };

    Kind kind = Kind::FxnlmsFixed;
    double mu = 0.1;                   // fixed kinds
    std::vector<double> mu_list;       // switched kinds, strictly decreasing
    double rho = 1.0;                  // trend seed for switched kinds
    double lambda = 0.8;               // error-power forgetting factor
    bool clamp_trends = false;
    ScalingKind scaling;               // Unit unless a robust kind

    bool switched() const { return kind == Kind::Sss || kind == Kind::RSss; }
    bool robust() const { return kind == Kind::RSss || kind == Kind::RFixed; }

    bool operator==(const AlgorithmSpec&) const = default;
};

// Execution parameters shared by every algorithm.
struct RunSpec {
    std::string name = "scenario";
    std::size_t filter_length = 16;
    std::size_t iterations = 0;
    std::size_t trials = 1;
    std::uint64_t seed = 42;
    double anr_beta = 0.999;
    double epsilon = 1e-10;
    double measurement_noise_variance = 0.0;
    bool identification_mode = false;

    bool operator==(const RunSpec&) const = default;
};

// A full experiment description, parsed from the section/key=value format
// documented in the README.
struct Scenario {
    FirPath primary;
    FirPath secondary;
    FirPath secondary_estimate;
    NoiseSpec noise;
    AlgorithmSpec algorithm;
    RunSpec run;

    bool operator==(const Scenario&) const = default;
};

// Parses and validates a scenario document. Throws ConfigError naming the
// offending key and line.
Scenario parse_scenario(const std::string& text);

// Reads the file and parses it; IoError if unreadable.
Scenario load_scenario(const std::string& path);

// Canonical text form; parse_scenario(serialize_scenario(s)) == s.
std::string serialize_scenario(const Scenario& scenario);

} // namespace anclab
