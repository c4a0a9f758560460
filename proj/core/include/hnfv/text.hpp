#pragma once

// Small text helpers shared by the config, fixture and CSV writers.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hnfv {

// Shortest of %.15g / %.17g that reads back to the same double.
std::string format_double(double value);

std::string_view trim(std::string_view text);
// Whitespace-separated tokens.
std::vector<std::string_view> split_ws(std::string_view text);
std::vector<std::string_view> split(std::string_view text, char sep);

std::optional<std::int64_t> parse_int(std::string_view text);
std::optional<std::uint64_t> parse_uint(std::string_view text);
std::optional<double> parse_double(std::string_view text);

}  // namespace hnfv
