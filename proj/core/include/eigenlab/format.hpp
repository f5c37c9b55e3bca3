#pragma once

#include <string>

namespace eigenlab {

/// Shortest decimal string that parses back to exactly `v` ("inf", "-inf",
/// "nan" for non-finite values). Locale independent.
std::string format_shortest(double v);

/// Parses a decimal number, "inf" or "-inf"; throws UsageError on junk.
double parse_double(const std::string& s);

}  // namespace eigenlab
