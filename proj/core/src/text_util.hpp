#pragma once

// Internal text helpers shared by the CSV readers/writers. Doubles are
// formatted with std::to_chars shortest round-trip form, so written values
// parse back bit-exactly and output files are reproducible.

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ledet::detail {

std::string format_double(double value);

// Splits one CSV line on ','. No quoting: field values in this format may
// not contain commas (the validator enforces this for ids).
std::vector<std::string_view> split_csv(std::string_view line);

bool parse_double(std::string_view text, double& out);
bool parse_int64(std::string_view text, std::int64_t& out);

} // namespace ledet::detail
