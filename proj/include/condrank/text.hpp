#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace condrank::text {

/// Decimal with 17 significant digits; round-trips every finite double.
std::string format_double(double value);

/// Strict parse of a finite decimal number (surrounding blanks allowed).
/// Throws InvalidInput otherwise.
double parse_double(std::string_view token);

/// Splits one CSV record on commas. Fields are not quoted.
std::vector<std::string> split_csv(std::string_view line);

std::string_view trim(std::string_view s);

}  // namespace condrank::text
