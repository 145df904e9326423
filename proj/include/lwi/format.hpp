#ifndef LWI_FORMAT_HPP
#define LWI_FORMAT_HPP

#include <string>

namespace lwi {

/// Shortest decimal form that parses back to the identical double.
std::string format_double(double value);

/// Parses a complete decimal number; throws std::invalid_argument otherwise.
double parse_double(const std::string& text);

} // namespace lwi

#endif
