#include "sentindex/timestamp.hpp"

#include <stdexcept>

#include <fmt/format.h>

namespace sentindex {

namespace {

// Offset suffix of an RFC 3339 string, in seconds. Returns false when absent.
bool parse_offset(std::string_view text, int& seconds) {
  if (text.empty()) return false;
  if (text.back() == 'Z' || text.back() == 'z') {
    seconds = 0;
    return true;
  }
  if (text.size() < 6) return false;
  const std::string_view tail = text.substr(text.size() - 6);
  if ((tail[0] != '+' && tail[0] != '-') || tail[3] != ':') return false;
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  if (!digit(tail[1]) || !digit(tail[2]) || !digit(tail[4]) || !digit(tail[5])) return false;
  const int hours = (tail[1] - '0') * 10 + (tail[2] - '0');
  const int minutes = (tail[4] - '0') * 10 + (tail[5] - '0');
  seconds = (hours * 3600 + minutes * 60) * (tail[0] == '-' ? -1 : 1);
  return true;
}

}  // namespace

Timestamp parse_timestamp(std::string_view text) {
  Timestamp ts;
  if (!parse_offset(text, ts.utc_offset_seconds)) {
    throw std::invalid_argument(fmt::format("timestamp '{}' has no UTC offset", text));
  }
  std::string err;
  if (!absl::ParseTime(absl::RFC3339_full, std::string(text), &ts.instant, &err)) {
    throw std::invalid_argument(fmt::format("invalid timestamp '{}': {}", text, err));
  }
  return ts;
}

std::string format_timestamp(const Timestamp& ts) {
  if (ts.utc_offset_seconds == 0) {
    return absl::FormatTime("%Y-%m-%dT%H:%M:%E*SZ", ts.instant, absl::UTCTimeZone());
  }
  return absl::FormatTime(absl::RFC3339_full, ts.instant,
                          absl::FixedTimeZone(ts.utc_offset_seconds));
}

Date parse_date(std::string_view text) {
  Date d;
  if (text.size() != 10 || !absl::ParseCivilTime(std::string(text), &d)) {
    throw std::invalid_argument(fmt::format("invalid date '{}'", text));
  }
  return d;
}

std::string format_date(Date d) {
  return fmt::format("{:04d}-{:02d}-{:02d}", d.year(), d.month(), d.day());
}

absl::TimeZone load_time_zone(const std::string& name) {
  absl::TimeZone tz;
  if (!absl::LoadTimeZone(name, &tz)) {
    throw std::invalid_argument(fmt::format("unknown time zone '{}'", name));
  }
  return tz;
}

}  // namespace sentindex
