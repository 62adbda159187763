#include "anclab/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "anclab/errors.hpp"
#include "anclab/format.hpp"
#include "anclab/theory.hpp"

namespace anclab {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
    throw ConfigError("line " + std::to_string(line) + ": " + msg);
}

struct RawEntry {
    std::string value;
    std::size_t line;
};

// section name -> key -> (value, line)
using RawConfig = std::map<std::string, std::map<std::string, RawEntry>>;

RawConfig tokenize(const std::string& text) {
    static const std::set<std::string> known_sections{"paths", "noise", "algorithm", "run"};
    RawConfig config;
    std::string section;
    std::istringstream in(text);
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw.substr(0, raw.find('#'));
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(line_no, "unterminated section header '" + line + "'");
            section = trim(line.substr(1, line.size() - 2));
            if (!known_sections.count(section))
                fail(line_no, "unknown section [" + section + "]");
            config[section];
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) fail(line_no, "expected key = value, got '" + line + "'");
        if (section.empty()) fail(line_no, "key outside any section");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail(line_no, "empty key");
        auto [it, inserted] = config[section].emplace(key, RawEntry{value, line_no});
        if (!inserted)
            fail(line_no, "duplicate key '" + key + "' in [" + section + "] (first at line " +
                              std::to_string(it->second.line) + ")");
    }
    return config;
}

std::vector<double> parse_double_list(const RawEntry& entry, const std::string& what) {
    std::vector<double> values;
    std::size_t pos = 0;
    const std::string& s = entry.value;
    while (pos <= s.size()) {
        std::size_t comma = s.find(',', pos);
        std::string token = trim(comma == std::string::npos ? s.substr(pos)
                                                            : s.substr(pos, comma - pos));
        if (token.empty()) fail(entry.line, what + ": empty element in list");
        values.push_back(parse_double_strict(token, what));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (values.empty()) fail(entry.line, what + ": empty list");
    return values;
}

// Consumes keys out of a section map and complains about leftovers.
class Section {
public:
    Section(RawConfig& config, const std::string& name) : name_(name) {
        auto it = config.find(name);
        if (it != config.end()) entries_ = &it->second;
    }

    bool present() const { return entries_ != nullptr; }

    const RawEntry* take(const std::string& key) {
        if (!entries_) return nullptr;
        auto it = entries_->find(key);
        if (it == entries_->end()) return nullptr;
        taken_.insert(key);
        return &it->second;
    }

    const RawEntry& require(const std::string& key) {
        const RawEntry* entry = take(key);
        if (!entry)
            throw ConfigError("[" + name_ + "] is missing required key '" + key + "'");
        return *entry;
    }

    void finish() const {
        if (!entries_) return;
        for (const auto& [key, entry] : *entries_) {
            if (!taken_.count(key))
                fail(entry.line, "unknown key '" + key + "' in [" + name_ + "]");
        }
    }

private:
    std::string name_;
    std::map<std::string, RawEntry>* entries_ = nullptr;
    std::set<std::string> taken_;
};

double take_double(Section& sec, const std::string& key, double fallback) {
    const RawEntry* e = sec.take(key);
    return e ? parse_double_strict(e->value, key) : fallback;
}

std::size_t take_size(Section& sec, const std::string& key, std::size_t fallback,
                      bool required = false) {
    const RawEntry* e = required ? &sec.require(key) : sec.take(key);
    if (!e) return fallback;
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(e->value.data(), e->value.data() + e->value.size(), v);
    if (ec != std::errc() || ptr != e->value.data() + e->value.size())
        fail(e->line, key + ": not a nonnegative integer: '" + e->value + "'");
    return v;
}

bool take_bool(Section& sec, const std::string& key, bool fallback) {
    const RawEntry* e = sec.take(key);
    if (!e) return fallback;
    if (e->value == "true") return true;
    if (e->value == "false") return false;
    fail(e->line, key + ": expected true or false, got '" + e->value + "'");
}

FirPath parse_path_value(const RawEntry& entry, const std::string& key) {
    if (entry.value.rfind("preset:", 0) == 0) {
        try {
            return preset_path(entry.value.substr(7));
        } catch (const ConfigError& err) {
            fail(entry.line, key + ": " + err.what());
        }
    }
    return FirPath{parse_double_list(entry, key)};
}

void validate_scaling(const ScalingKind& kind) {
    if (kind.fn == ScalingKind::Fn::Mcc && !(kind.sigma > 0.0))
        throw ConfigError("mcc_sigma must be > 0");
    if (kind.fn == ScalingKind::Fn::Ehcf) {
        if (!(kind.eta > 0.0)) throw ConfigError("ehcf_eta must be > 0");
        if (!(kind.theta > 0.0)) throw ConfigError("ehcf_theta must be > 0");
    }
}

void validate_step(double mu, std::size_t filter_length, const std::string& what) {
    double bound = ms_stability_bound(filter_length);
    if (!(mu > 0.0 && mu < bound))
        throw ConfigError(what + " " + format_double(mu) + " outside stable range (0, " +
                          format_significant(bound, 6) + ")");
}

} // namespace

Scenario parse_scenario(const std::string& text) {
    RawConfig raw = tokenize(text);
    for (const char* name : {"paths", "noise", "algorithm", "run"}) {
        if (!raw.count(name))
            throw ConfigError(std::string("missing required section [") + name +
                              "]; scenario needs [paths], [noise], [algorithm], [run]");
    }

    Scenario sc;

    Section paths(raw, "paths");
    sc.primary = parse_path_value(paths.require("primary"), "primary");
    sc.secondary = parse_path_value(paths.require("secondary"), "secondary");
    if (const RawEntry* e = paths.take("secondary_estimate"))
        sc.secondary_estimate = parse_path_value(*e, "secondary_estimate");
    else
        sc.secondary_estimate = sc.secondary;
    paths.finish();

    Section noise(raw, "noise");
    {
        const RawEntry& kind = noise.require("kind");
        if (kind.value == "white") sc.noise.kind = NoiseKind::White;
        else if (kind.value == "ar1") sc.noise.kind = NoiseKind::Ar1;
        else if (kind.value == "alpha_stable") sc.noise.kind = NoiseKind::AlphaStable;
        else if (kind.value == "bursty") sc.noise.kind = NoiseKind::Bursty;
        else if (kind.value == "file") sc.noise.kind = NoiseKind::File;
        else fail(kind.line, "unknown noise kind '" + kind.value + "'");
    }
    sc.noise.mean = take_double(noise, "mean", 0.0);
    sc.noise.variance = take_double(noise, "variance", 1.0);
    sc.noise.variance_after = take_double(noise, "variance_after", 1.0);
    sc.noise.switch_at = take_size(noise, "switch_at", 0);
    sc.noise.pole = take_double(noise, "pole", 0.0);
    sc.noise.innovation_variance = take_double(noise, "innovation_variance", 1.0);
    sc.noise.alpha = take_double(noise, "alpha", 2.0);
    sc.noise.gamma = take_double(noise, "gamma", 1.0);
    if (const RawEntry* e = noise.take("path")) sc.noise.path = e->value;
    sc.noise.add_white_variance = take_double(noise, "add_white_variance", 0.0);
    noise.finish();

    Section algo(raw, "algorithm");
    {
        const RawEntry& kind = algo.require("kind");
        if (kind.value == "fxnlms_fixed") sc.algorithm.kind = AlgorithmSpec::Kind::FxnlmsFixed;
        else if (kind.value == "sss") sc.algorithm.kind = AlgorithmSpec::Kind::Sss;
        else if (kind.value == "r_sss") sc.algorithm.kind = AlgorithmSpec::Kind::RSss;
        else if (kind.value == "r_fixed") sc.algorithm.kind = AlgorithmSpec::Kind::RFixed;
        else fail(kind.line, "unknown algorithm kind '" + kind.value + "'");
    }
    sc.algorithm.mu = take_double(algo, "mu", 0.1);
    if (const RawEntry* e = algo.take("mu_list"))
        sc.algorithm.mu_list = parse_double_list(*e, "mu_list");
    sc.algorithm.rho = take_double(algo, "rho", 1.0);
    sc.algorithm.lambda = take_double(algo, "lambda", 0.8);
    sc.algorithm.clamp_trends = take_bool(algo, "clamp_trends", false);
    if (const RawEntry* e = algo.take("scaling")) {
        if (e->value == "none") sc.algorithm.scaling.fn = ScalingKind::Fn::Unit;
        else if (e->value == "mcc") sc.algorithm.scaling.fn = ScalingKind::Fn::Mcc;
        else if (e->value == "ehcf") sc.algorithm.scaling.fn = ScalingKind::Fn::Ehcf;
        else fail(e->line, "unknown scaling '" + e->value + "'");
    }
    sc.algorithm.scaling.sigma = take_double(algo, "mcc_sigma", 1.0);
    sc.algorithm.scaling.eta = take_double(algo, "ehcf_eta", 1.0);
    sc.algorithm.scaling.theta = take_double(algo, "ehcf_theta", 1.0);
    algo.finish();

    Section run(raw, "run");
    if (const RawEntry* e = run.take("name")) sc.run.name = e->value;
    sc.run.filter_length = take_size(run, "filter_length", 0, true);
    sc.run.iterations = take_size(run, "iterations", 0, true);
    sc.run.trials = take_size(run, "trials", 1);
    sc.run.seed = take_size(run, "seed", 42);
    sc.run.anr_beta = take_double(run, "anr_beta", 0.999);
    sc.run.epsilon = take_double(run, "epsilon", 1e-10);
    sc.run.measurement_noise_variance = take_double(run, "measurement_noise_variance", 0.0);
    sc.run.identification_mode = take_bool(run, "identification_mode", false);
    run.finish();

    // Cross-field validation. Step-size domains depend on the filter length.
    if (sc.run.filter_length < 1) throw ConfigError("filter_length must be >= 1");
    if (sc.run.iterations < 1) throw ConfigError("iterations must be >= 1");
    if (sc.run.trials < 1) throw ConfigError("trials must be >= 1");
    if (!(sc.run.anr_beta > 0.0 && sc.run.anr_beta < 1.0))
        throw ConfigError("anr_beta must be in (0, 1)");
    if (!(sc.run.epsilon > 0.0)) throw ConfigError("epsilon must be > 0");
    if (!(sc.run.measurement_noise_variance >= 0.0))
        throw ConfigError("measurement_noise_variance must be >= 0");
    if (sc.primary.taps.empty()) throw ConfigError("primary path has no taps");
    if (sc.secondary.taps.empty()) throw ConfigError("secondary path has no taps");
    if (sc.secondary_estimate.taps.empty())
        throw ConfigError("secondary_estimate path has no taps");

    if (!(sc.algorithm.lambda > 0.0 && sc.algorithm.lambda < 1.0))
        throw ConfigError("lambda must be in (0, 1)");
    if (sc.algorithm.switched()) {
        if (sc.algorithm.mu_list.empty())
            throw ConfigError("switched algorithm requires mu_list");
        for (std::size_t k = 0; k < sc.algorithm.mu_list.size(); ++k) {
            validate_step(sc.algorithm.mu_list[k], sc.run.filter_length, "mu_list entry");
            if (k > 0 && !(sc.algorithm.mu_list[k] < sc.algorithm.mu_list[k - 1]))
                throw ConfigError("mu_list must be strictly decreasing");
        }
        if (!(sc.algorithm.rho > 0.0)) throw ConfigError("rho must be > 0");
    } else {
        validate_step(sc.algorithm.mu, sc.run.filter_length, "mu");
    }
    if (sc.algorithm.robust()) {
        if (sc.algorithm.scaling.fn == ScalingKind::Fn::Unit)
            throw ConfigError("robust algorithm kinds require scaling = mcc or ehcf");
        validate_scaling(sc.algorithm.scaling);
    } else if (sc.algorithm.scaling.fn != ScalingKind::Fn::Unit) {
        throw ConfigError("scaling is only valid for r_sss / r_fixed algorithm kinds");
    }

    switch (sc.noise.kind) {
        case NoiseKind::White:
            if (!(sc.noise.variance >= 0.0)) throw ConfigError("variance must be >= 0");
            break;
        case NoiseKind::Ar1:
            if (!(std::abs(sc.noise.pole) < 1.0))
                throw ConfigError("ar1 pole must satisfy |pole| < 1");
            if (!(sc.noise.innovation_variance >= 0.0))
                throw ConfigError("innovation_variance must be >= 0");
            break;
        case NoiseKind::AlphaStable:
            if (!(sc.noise.alpha > 0.0 && sc.noise.alpha <= 2.0))
                throw ConfigError("alpha must be in (0, 2]");
            if (!(sc.noise.gamma > 0.0)) throw ConfigError("gamma must be > 0");
            break;
        case NoiseKind::Bursty:
            if (!(sc.noise.variance >= 0.0 && sc.noise.variance_after >= 0.0))
                throw ConfigError("bursty variances must be >= 0");
            break;
        case NoiseKind::File:
            if (sc.noise.path.empty()) throw ConfigError("file noise requires path");
            if (!(sc.noise.add_white_variance >= 0.0))
                throw ConfigError("add_white_variance must be >= 0");
            break;
    }

    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path + ": cannot open scenario file");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_scenario(buf.str());
    } catch (const ConfigError& err) {
        throw ConfigError(path + ": " + err.what());
    }
}

namespace {

std::string join_taps(const FirPath& path) {
    std::string out;
    for (std::size_t i = 0; i < path.taps.size(); ++i) {
        if (i) out += ", ";
        out += format_double(path.taps[i]);
    }
    return out;
}

const char* noise_kind_name(NoiseKind kind) {
    switch (kind) {
        case NoiseKind::White: return "white";
        case NoiseKind::Ar1: return "ar1";
        case NoiseKind::AlphaStable: return "alpha_stable";
        case NoiseKind::Bursty: return "bursty";
        case NoiseKind::File: return "file";
    }
    return "white";
}

const char* algorithm_kind_name(AlgorithmSpec::Kind kind) {
    switch (kind) {
        case AlgorithmSpec::Kind::FxnlmsFixed: return "fxnlms_fixed";
        case AlgorithmSpec::Kind::Sss: return "sss";
        case AlgorithmSpec::Kind::RSss: return "r_sss";
        case AlgorithmSpec::Kind::RFixed: return "r_fixed";
    }
    return "fxnlms_fixed";
}

const char* scaling_name(ScalingKind::Fn fn) {
    switch (fn) {
        case ScalingKind::Fn::Unit: return "none";
        case ScalingKind::Fn::Mcc: return "mcc";
        case ScalingKind::Fn::Ehcf: return "ehcf";
    }
    return "none";
}

} // namespace

std::string serialize_scenario(const Scenario& sc) {
    std::ostringstream out;
    out << "[paths]\n";
    out << "primary = " << join_taps(sc.primary) << "\n";
    out << "secondary = " << join_taps(sc.secondary) << "\n";
    out << "secondary_estimate = " << join_taps(sc.secondary_estimate) << "\n";

    out << "\n[noise]\n";
    out << "kind = " << noise_kind_name(sc.noise.kind) << "\n";
    out << "mean = " << format_double(sc.noise.mean) << "\n";
    out << "variance = " << format_double(sc.noise.variance) << "\n";
    out << "variance_after = " << format_double(sc.noise.variance_after) << "\n";
    out << "switch_at = " << sc.noise.switch_at << "\n";
    out << "pole = " << format_double(sc.noise.pole) << "\n";
    out << "innovation_variance = " << format_double(sc.noise.innovation_variance) << "\n";
    out << "alpha = " << format_double(sc.noise.alpha) << "\n";
    out << "gamma = " << format_double(sc.noise.gamma) << "\n";
    if (!sc.noise.path.empty()) out << "path = " << sc.noise.path << "\n";
    out << "add_white_variance = " << format_double(sc.noise.add_white_variance) << "\n";

    out << "\n[algorithm]\n";
    out << "kind = " << algorithm_kind_name(sc.algorithm.kind) << "\n";
    out << "mu = " << format_double(sc.algorithm.mu) << "\n";
    if (!sc.algorithm.mu_list.empty()) {
        out << "mu_list = ";
        for (std::size_t k = 0; k < sc.algorithm.mu_list.size(); ++k) {
            if (k) out << ", ";
            out << format_double(sc.algorithm.mu_list[k]);
        }
        out << "\n";
    }
    out << "rho = " << format_double(sc.algorithm.rho) << "\n";
    out << "lambda = " << format_double(sc.algorithm.lambda) << "\n";
    out << "clamp_trends = " << (sc.algorithm.clamp_trends ? "true" : "false") << "\n";
    out << "scaling = " << scaling_name(sc.algorithm.scaling.fn) << "\n";
    out << "mcc_sigma = " << format_double(sc.algorithm.scaling.sigma) << "\n";
    out << "ehcf_eta = " << format_double(sc.algorithm.scaling.eta) << "\n";
    out << "ehcf_theta = " << format_double(sc.algorithm.scaling.theta) << "\n";

    out << "\n[run]\n";
    out << "name = " << sc.run.name << "\n";
    out << "filter_length = " << sc.run.filter_length << "\n";
    out << "iterations = " << sc.run.iterations << "\n";
    out << "trials = " << sc.run.trials << "\n";
    out << "seed = " << sc.run.seed << "\n";
    out << "anr_beta = " << format_double(sc.run.anr_beta) << "\n";
    out << "epsilon = " << format_double(sc.run.epsilon) << "\n";
    out << "measurement_noise_variance = "
        << format_double(sc.run.measurement_noise_variance) << "\n";
    out << "identification_mode = " << (sc.run.identification_mode ? "true" : "false")
        << "\n";
    return out.str();
}

} // namespace anclab
