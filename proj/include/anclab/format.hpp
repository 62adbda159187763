#pragma once

#include <string>

namespace anclab {

// Shortest decimal text that parses back to exactly the same double. All
// emitted numbers go through this so output is bit-reproducible.
std::string format_double(double value);

// Fixed number of significant digits, for human-facing reports.
std::string format_significant(double value, int digits);

// Strict double parser: the whole token must be consumed.
double parse_double_strict(const std::string& token, const std::string& what);

} // namespace anclab
