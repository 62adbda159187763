#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace anclab {

// SplitMix64 step. Used to turn (seed, stream) pairs into well-spread
// engine seeds so that nearby stream indices give unrelated sequences.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Deterministic random stream addressed by (seed, stream). Every draw path
// is pinned down here rather than delegated to distribution classes, because
// std::normal_distribution and friends are implementation-defined and would
// break bit-reproducibility across standard libraries.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t s = seed;
        std::uint64_t a = splitmix64(s);
        s ^= stream * 0xD1B54A32D192ED03ULL;
        std::uint64_t b = splitmix64(s);
        engine_.seed(a ^ (b + 0x9E3779B97F4A7C15ULL));
    }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on the open interval (0, 1). Safe as a log() argument.
    double uniform_open() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller, one spare value cached per pair.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform_open();
        double u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 2.0 * pi_ * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

private:
    static constexpr double pi_ = 3.141592653589793238462643383279502884;
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace anclab
