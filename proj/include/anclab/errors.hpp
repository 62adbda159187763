#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace anclab {

// Bad scenario text, bad CLI arguments, or parameter values outside their
// documented domain. Message names the offending key or argument.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem and file-format problems (unreadable file, malformed WAV,
// non-numeric sample text, unwritable output directory).
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Raised mid-trial when the adaptive loop blows up: a non-finite weight,
// error sample, or trend value, or a weight norm past the runaway bound.
// The harness catches this and flags the trial rather than crashing.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(const std::string& what, std::size_t iteration)
        : std::runtime_error(what + " at iteration " + std::to_string(iteration)),
          iteration_(iteration) {}

    std::size_t iteration() const { return iteration_; }

private:
    std::size_t iteration_;
};

} // namespace anclab
