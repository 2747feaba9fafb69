#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <absl/time/time.h>
#include <nlohmann/json.hpp>

#include "sentindex/sentiment.hpp"
#include "sentindex/timestamp.hpp"

namespace sentindex::aggregation {

// Which prior trading days enter the mean number of unique sources.
enum class AdjustmentHistory {
  nonzero_days,  // only days on which the company had articles
  all_days,      // every prior trading day, zero-article days included
};

struct AggregationConfig {
  std::string market_timezone = "Europe/Berlin";
  int cutoff_minutes = 17 * 60;  // local time of day, 0..1440
  AdjustmentHistory adjustment_history = AdjustmentHistory::nonzero_days;
};

AggregationConfig aggregation_config_from_json(const nlohmann::json& j);
AggregationConfig load_aggregation_config(const std::filesystem::path& path);
// "HH:MM" -> minutes after midnight; "24:00" is accepted.
int parse_cutoff(std::string_view hhmm);

class TradingCalendar {
 public:
  // Throws std::invalid_argument for empty or non-increasing dates, or a
  // cutoff outside 00:00-24:00.
  TradingCalendar(std::vector<Date> dates, absl::TimeZone tz, int cutoff_minutes = 17 * 60);

  const std::vector<Date>& dates() const { return dates_; }
  absl::TimeZone time_zone() const { return tz_; }
  int cutoff_minutes() const { return cutoff_minutes_; }

 private:
  std::vector<Date> dates_;
  absl::TimeZone tz_;
  int cutoff_minutes_;
};

struct DateAssignment {
  enum class Status {
    on_calendar,
    before_first,   // assigned to the first trading date
    after_horizon,  // dropped
  };
  Status status = Status::on_calendar;
  std::size_t index = 0;  // into calendar.dates(); meaningless when dropped
};

// Local time at or after the cutoff moves to the next calendar day; the
// result is the first trading date on or after that day.
DateAssignment effective_trading_date(const Timestamp& published_at, const TradingCalendar& calendar);

struct DatedScore {
  std::string company_id;
  std::string source;
  std::size_t date_index = 0;
  double score = 0.0;
};

struct RawCell {
  double raw_mean = 0.0;
  std::size_t article_count = 0;
  std::size_t unique_sources = 0;
};

// Dense company x date grid, zero-filled. cells[t * companies.size() + i].
struct RawGrid {
  std::vector<std::string> companies;
  std::vector<Date> dates;
  std::vector<RawCell> cells;
};

// Records whose company is outside the universe are skipped and reported.
RawGrid daily_raw_sentiment(const std::vector<DatedScore>& records,
                            const std::vector<std::string>& universe,
                            const TradingCalendar& calendar,
                            std::vector<std::string>* diagnostics = nullptr);

// u / mean(prior) when u is below the prior mean, otherwise 1. An empty
// history yields 1.
double source_adjustment(std::size_t u_today, std::span<const std::size_t> prior_counts);

struct DailySentiment {
  std::string company_id;
  Date date;
  double raw_mean = 0.0;
  double adjusted = 0.0;
  std::size_t article_count = 0;
  std::size_t unique_sources = 0;
  double adjustment = 1.0;
};

DailySentiment adjusted_daily_sentiment(const std::string& company_id, Date date,
                                        const RawCell& raw, double adjustment);

struct SentimentPanel {
  std::vector<std::string> companies;
  std::vector<Date> dates;
  std::vector<DailySentiment> cells;  // cells[t * companies.size() + i]

  const DailySentiment& at(std::size_t t, std::size_t i) const {
    return cells[t * companies.size() + i];
  }
};

struct AggregationResult {
  SentimentPanel panel;
  std::vector<std::string> diagnostics;
  std::size_t dropped_after_horizon = 0;
  std::size_t dropped_unknown_company = 0;
};

// Full stage: assign effective dates, average per company-day, apply the
// unique-source adjustment.
AggregationResult aggregate(const std::vector<sentiment::ScoredArticle>& scored,
                            const std::vector<std::string>& universe,
                            const TradingCalendar& calendar, const AggregationConfig& config);

// Columns: date, company, raw_mean, unique_sources, adjustment, adjusted.
void write_panel(const std::filesystem::path& path, const SentimentPanel& panel);

}  // namespace sentindex::aggregation
