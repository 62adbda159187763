#include "anclab/noise.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "anclab/errors.hpp"

namespace anclab {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

void require(bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
}

} // namespace

std::vector<double> gen_white(std::size_t n, double mean, double variance, RngStream& rng) {
    require(variance >= 0.0, "white noise variance must be >= 0");
    double sd = std::sqrt(variance);
    std::vector<double> x(n);
    for (auto& v : x) v = mean + sd * rng.gaussian();
    return x;
}

std::vector<double> gen_ar1(std::size_t n, double pole, RngStream& rng) {
    require(std::abs(pole) < 1.0, "ar1 pole must satisfy |pole| < 1");
    std::vector<double> x(n);
    double prev = 0.0;
    for (auto& v : x) {
        prev = pole * prev + rng.gaussian();
        v = prev;
    }
    return x;
}

std::vector<double> gen_alpha_stable(std::size_t n, double alpha, double gamma,
                                     RngStream& rng) {
    require(alpha > 0.0 && alpha <= 2.0, "alpha_stable alpha must be in (0, 2]");
    require(gamma > 0.0, "alpha_stable gamma must be > 0");
    double scale = std::pow(gamma, 1.0 / alpha);
    std::vector<double> x(n);
    for (auto& v : x) {
        double u = kPi * (rng.uniform_open() - 0.5);
        if (alpha == 1.0) {
            v = scale * std::tan(u);
            continue;
        }
        double w = -std::log1p(-rng.uniform_open());
        double s = std::sin(alpha * u) / std::pow(std::cos(u), 1.0 / alpha);
        double t = std::pow(std::cos((1.0 - alpha) * u) / w, (1.0 - alpha) / alpha);
        v = scale * s * t;
    }
    return x;
}

std::vector<double> gen_bursty(std::size_t n, double variance_before, double variance_after,
                               std::size_t switch_at, RngStream& rng) {
    require(variance_before >= 0.0 && variance_after >= 0.0,
            "bursty variances must be >= 0");
    double sd_before = std::sqrt(variance_before);
    double sd_after = std::sqrt(variance_after);
    std::vector<double> x(n);
    for (std::size_t k = 0; k < n; ++k) {
        x[k] = (k < switch_at ? sd_before : sd_after) * rng.gaussian();
    }
    return x;
}

namespace {

std::vector<double> load_wav(const std::string& path, std::ifstream& in) {
    auto fail = [&](const std::string& why) -> void {
        throw IoError(path + ": " + why);
    };

    auto read_bytes = [&](void* dst, std::size_t n, const char* what) {
        in.read(static_cast<char*>(dst), static_cast<std::streamsize>(n));
        if (static_cast<std::size_t>(in.gcount()) != n)
            fail(std::string("truncated while reading ") + what);
    };
    auto read_u32 = [&](const char* what) {
        unsigned char b[4];
        read_bytes(b, 4, what);
        return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
               (static_cast<std::uint32_t>(b[2]) << 16) |
               (static_cast<std::uint32_t>(b[3]) << 24);
    };
    auto read_u16 = [&](const char* what) {
        unsigned char b[2];
        read_bytes(b, 2, what);
        return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
    };

    char tag[4];
    read_bytes(tag, 4, "RIFF header");
    if (std::memcmp(tag, "RIFF", 4) != 0) fail("not a RIFF file");
    read_u32("RIFF size");
    read_bytes(tag, 4, "WAVE tag");
    if (std::memcmp(tag, "WAVE", 4) != 0) fail("not a WAVE file");

    std::uint16_t format = 0, channels = 0, bits = 0;
    bool have_fmt = false;
    while (true) {
        if (!in.read(tag, 4)) fail("no data chunk found");
        std::uint32_t chunk_size = read_u32("chunk size");
        if (std::memcmp(tag, "fmt ", 4) == 0) {
            format = read_u16("format tag");
            channels = read_u16("channel count");
            read_u32("sample rate");
            read_u32("byte rate");
            read_u16("block align");
            bits = read_u16("bits per sample");
            if (chunk_size > 16) in.seekg(chunk_size - 16, std::ios::cur);
            have_fmt = true;
            continue;
        }
        if (std::memcmp(tag, "data", 4) == 0) {
            if (!have_fmt) fail("data chunk before fmt chunk");
            if (channels != 1)
                fail("expected mono audio, got channels=" + std::to_string(channels));
            std::vector<double> samples;
            if (format == 1 && bits == 16) {
                std::size_t n = chunk_size / 2;
                samples.resize(n);
                for (std::size_t k = 0; k < n; ++k) {
                    unsigned char b[2];
                    read_bytes(b, 2, "PCM16 sample");
                    auto raw = static_cast<std::int16_t>(b[0] | (b[1] << 8));
                    samples[k] = static_cast<double>(raw) / 32768.0;
                }
            } else if (format == 3 && bits == 32) {
                std::size_t n = chunk_size / 4;
                samples.resize(n);
                for (std::size_t k = 0; k < n; ++k) {
                    unsigned char b[4];
                    read_bytes(b, 4, "float32 sample");
                    std::uint32_t raw = static_cast<std::uint32_t>(b[0]) |
                                        (static_cast<std::uint32_t>(b[1]) << 8) |
                                        (static_cast<std::uint32_t>(b[2]) << 16) |
                                        (static_cast<std::uint32_t>(b[3]) << 24);
                    float f;
                    std::memcpy(&f, &raw, 4);
                    samples[k] = static_cast<double>(f);
                }
            } else {
                fail("unsupported WAV encoding (format=" + std::to_string(format) +
                     ", bits=" + std::to_string(bits) + "); use PCM16 or float32");
            }
            return samples;
        }
        // Skip unknown chunks, honoring RIFF's 2-byte alignment padding.
        in.seekg(chunk_size + (chunk_size & 1u), std::ios::cur);
        if (!in) fail("truncated chunk");
    }
}

std::vector<double> load_text(const std::string& path, std::ifstream& in) {
    std::vector<double> samples;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t a = line.find_first_not_of(" \t\r");
        if (a == std::string::npos) continue;
        std::size_t b = line.find_last_not_of(" \t\r");
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(line.data() + a, line.data() + b + 1, v);
        if (ec != std::errc() || ptr != line.data() + b + 1)
            throw IoError(path + ":" + std::to_string(line_no) + ": not a number: '" +
                          line.substr(a, b - a + 1) + "'");
        samples.push_back(v);
    }
    return samples;
}

bool has_wav_extension(const std::string& path) {
    if (path.size() < 4) return false;
    std::string ext = path.substr(path.size() - 4);
    for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return ext == ".wav";
}

} // namespace

std::vector<double> load_noise(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path + ": cannot open file");
    return has_wav_extension(path) ? load_wav(path, in) : load_text(path, in);
}

std::vector<double> make_noise(const NoiseSpec& spec, std::size_t n, RngStream& rng,
                               RngStream& aux_rng) {
    switch (spec.kind) {
        case NoiseKind::White:
            return gen_white(n, spec.mean, spec.variance, rng);
        case NoiseKind::Ar1: {
            auto x = gen_ar1(n, spec.pole, rng);
            if (spec.innovation_variance != 1.0) {
                require(spec.innovation_variance >= 0.0,
                        "ar1 innovation_variance must be >= 0");
                double s = std::sqrt(spec.innovation_variance);
                for (auto& v : x) v *= s;
            }
            return x;
        }
        case NoiseKind::AlphaStable:
            return gen_alpha_stable(n, spec.alpha, spec.gamma, rng);
        case NoiseKind::Bursty:
            return gen_bursty(n, spec.variance, spec.variance_after, spec.switch_at, rng);
        case NoiseKind::File: {
            auto x = load_noise(spec.path);
            if (x.size() < n)
                throw ConfigError("noise file " + spec.path + " has " +
                                  std::to_string(x.size()) + " samples, run needs " +
                                  std::to_string(n));
            x.resize(n);
            if (spec.add_white_variance > 0.0) {
                double s = std::sqrt(spec.add_white_variance);
                for (auto& v : x) v += s * aux_rng.gaussian();
            }
            return x;
        }
    }
    throw ConfigError("unhandled noise kind");
}

std::complex<double> empirical_cf(std::span<const double> samples, double t) {
    std::complex<double> acc{0.0, 0.0};
    for (double x : samples) acc += std::complex<double>{std::cos(t * x), std::sin(t * x)};
    return acc / static_cast<double>(samples.size());
}

} // namespace anclab
