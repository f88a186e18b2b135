#pragma once

#include <string>

namespace fockdelay {

// Shortest decimal text that parses back to the same double. Non-finite
// values render as "inf", "-inf" and "nan".
std::string shortest(double value);

// strtod wrapper that accepts "inf"/"nan" and rejects trailing garbage.
bool parse_double(const std::string& text, double& out);

}  // namespace fockdelay
