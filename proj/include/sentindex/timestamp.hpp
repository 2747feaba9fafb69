#pragma once

#include <string>
#include <string_view>

#include <absl/time/civil_time.h>
#include <absl/time/time.h>

namespace sentindex {

using Date = absl::CivilDay;

// An instant together with the UTC offset it was originally written in, so
// that records round-trip through JSON unchanged.
struct Timestamp {
  absl::Time instant;
  int utc_offset_seconds = 0;

  friend bool operator==(const Timestamp& a, const Timestamp& b) {
    return a.instant == b.instant && a.utc_offset_seconds == b.utc_offset_seconds;
  }
  friend bool operator<(const Timestamp& a, const Timestamp& b) { return a.instant < b.instant; }
};

// Parses RFC 3339 / ISO-8601 with an explicit offset ("Z" or "+hh:mm").
// Throws std::invalid_argument on malformed input or a missing offset.
Timestamp parse_timestamp(std::string_view text);
std::string format_timestamp(const Timestamp& ts);

// "YYYY-MM-DD"; throws std::invalid_argument on malformed input.
Date parse_date(std::string_view text);
std::string format_date(Date d);

absl::TimeZone load_time_zone(const std::string& name);

}  // namespace sentindex
