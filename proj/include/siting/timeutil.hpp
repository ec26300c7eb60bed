#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace siting {

// Naive local time, seconds since 1970-01-01 00:00:00 of the same calendar
// (no timezone applied anywhere).
using Timestamp = std::int64_t;

// Parses "YYYYMMDD HH:MM:SS". Returns nullopt on any format or range error.
std::optional<Timestamp> parse_timestamp(std::string_view s);

// Throwing variant for trusted inputs (config files, round-trips).
Timestamp parse_timestamp_or_throw(std::string_view s);

std::string format_timestamp(Timestamp t);

// Seconds since local midnight, always in [0, 86400).
int seconds_of_day(Timestamp t);

}  // namespace siting
