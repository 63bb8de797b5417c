#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace tweetscape {

/// A UTC instant with millisecond precision.
using Instant = std::chrono::sys_time<std::chrono::milliseconds>;

/// Parses `YYYY-MM-DDTHH:MM:SS[.fraction]Z`. Calendar dates are checked
/// (month lengths, leap years); fractional digits beyond milliseconds are
/// truncated. Returns nullopt for anything else, including numeric offsets.
std::optional<Instant> parse_iso8601(std::string_view text);

/// Formats as `YYYY-MM-DDTHH:MM:SS.mmmZ`.
std::string format_iso8601(Instant t);

}  // namespace tweetscape
