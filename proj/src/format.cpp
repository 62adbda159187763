#include "anclab/format.hpp"

#include <charconv>
#include <cstdio>

#include "anclab/errors.hpp"

namespace anclab {

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    (void)ec;
    return std::string(buf, ptr);
}

std::string format_significant(double value, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, value);
    return buf;
}

double parse_double_strict(const std::string& token, const std::string& what) {
    double v = 0.0;
    const char* begin = token.data();
    const char* end = begin + token.size();
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end)
        throw ConfigError(what + ": not a number: '" + token + "'");
    return v;
}

} // namespace anclab
