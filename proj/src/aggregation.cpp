#include "sentindex/aggregation.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <stdexcept>

#include <absl/time/civil_time.h>
#include <fmt/format.h>

namespace sentindex::aggregation {

int parse_cutoff(std::string_view hhmm) {
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  if (hhmm.size() != 5 || hhmm[2] != ':' || !digit(hhmm[0]) || !digit(hhmm[1]) ||
      !digit(hhmm[3]) || !digit(hhmm[4])) {
    throw std::invalid_argument(fmt::format("cutoff '{}' is not HH:MM", hhmm));
  }
  const int h = (hhmm[0] - '0') * 10 + (hhmm[1] - '0');
  const int m = (hhmm[3] - '0') * 10 + (hhmm[4] - '0');
  if (m > 59 || h * 60 + m > 24 * 60) {
    throw std::invalid_argument(fmt::format("cutoff '{}' outside 00:00-24:00", hhmm));
  }
  return h * 60 + m;
}

AggregationConfig aggregation_config_from_json(const nlohmann::json& j) {
  AggregationConfig cfg;
  if (auto it = j.find("market_timezone"); it != j.end()) cfg.market_timezone = it->get<std::string>();
  if (auto it = j.find("cutoff_local_time"); it != j.end()) {
    cfg.cutoff_minutes = parse_cutoff(it->get<std::string>());
  }
  if (auto it = j.find("adjustment_history"); it != j.end()) {
    const auto mode = it->get<std::string>();
    if (mode == "nonzero_days") {
      cfg.adjustment_history = AdjustmentHistory::nonzero_days;
    } else if (mode == "all_days") {
      cfg.adjustment_history = AdjustmentHistory::all_days;
    } else {
      throw std::invalid_argument(fmt::format("unknown adjustment_history '{}'", mode));
    }
  }
  return cfg;
}

AggregationConfig load_aggregation_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open aggregation config '{}'", path.string()));
  return aggregation_config_from_json(nlohmann::json::parse(in));
}

TradingCalendar::TradingCalendar(std::vector<Date> dates, absl::TimeZone tz, int cutoff_minutes)
    : dates_(std::move(dates)), tz_(tz), cutoff_minutes_(cutoff_minutes) {
  if (dates_.empty()) throw std::invalid_argument("trading calendar is empty");
  for (std::size_t t = 1; t < dates_.size(); ++t) {
    if (!(dates_[t - 1] < dates_[t])) {
      throw std::invalid_argument("trading dates must be strictly increasing");
    }
  }
  if (cutoff_minutes_ < 0 || cutoff_minutes_ > 24 * 60) {
    throw std::invalid_argument("cutoff must lie within 00:00-24:00");
  }
}

DateAssignment effective_trading_date(const Timestamp& published_at,
                                      const TradingCalendar& calendar) {
  const absl::CivilSecond local = absl::ToCivilSecond(published_at.instant, calendar.time_zone());
  const long seconds_of_day = local.hour() * 3600L + local.minute() * 60L + local.second();
  Date day(local);
  if (seconds_of_day >= calendar.cutoff_minutes() * 60L) ++day;

  const auto& dates = calendar.dates();
  auto it = std::lower_bound(dates.begin(), dates.end(), day);
  if (it == dates.end()) return {DateAssignment::Status::after_horizon, dates.size()};
  const auto index = static_cast<std::size_t>(it - dates.begin());
  if (day < dates.front()) return {DateAssignment::Status::before_first, 0};
  return {DateAssignment::Status::on_calendar, index};
}

RawGrid daily_raw_sentiment(const std::vector<DatedScore>& records,
                            const std::vector<std::string>& universe,
                            const TradingCalendar& calendar,
                            std::vector<std::string>* diagnostics) {
  RawGrid grid;
  grid.companies = universe;
  std::sort(grid.companies.begin(), grid.companies.end());
  grid.dates = calendar.dates();
  const std::size_t n = grid.companies.size();
  grid.cells.assign(grid.dates.size() * n, RawCell{});

  std::vector<double> sums(grid.cells.size(), 0.0);
  std::vector<std::set<std::string>> sources(grid.cells.size());
  for (const auto& r : records) {
    auto it = std::lower_bound(grid.companies.begin(), grid.companies.end(), r.company_id);
    if (it == grid.companies.end() || *it != r.company_id) {
      if (diagnostics) {
        diagnostics->push_back(fmt::format("company '{}' not in universe; record skipped", r.company_id));
      }
      continue;
    }
    if (r.date_index >= grid.dates.size()) {
      throw std::out_of_range(fmt::format("date index {} outside calendar", r.date_index));
    }
    const std::size_t k = r.date_index * n + static_cast<std::size_t>(it - grid.companies.begin());
    sums[k] += r.score;
    grid.cells[k].article_count += 1;
    sources[k].insert(r.source);
  }
  for (std::size_t k = 0; k < grid.cells.size(); ++k) {
    auto& cell = grid.cells[k];
    if (cell.article_count == 0) continue;
    cell.raw_mean = sums[k] / static_cast<double>(cell.article_count);
    cell.unique_sources = sources[k].size();
  }
  return grid;
}

double source_adjustment(std::size_t u_today, std::span<const std::size_t> prior_counts) {
  if (prior_counts.empty()) return 1.0;
  const double total = std::accumulate(prior_counts.begin(), prior_counts.end(), 0.0);
  const double mean = total / static_cast<double>(prior_counts.size());
  const auto u = static_cast<double>(u_today);
  return u < mean ? u / mean : 1.0;
}

DailySentiment adjusted_daily_sentiment(const std::string& company_id, Date date,
                                        const RawCell& raw, double adjustment) {
  DailySentiment d;
  d.company_id = company_id;
  d.date = date;
  d.raw_mean = raw.raw_mean;
  d.article_count = raw.article_count;
  d.unique_sources = raw.unique_sources;
  d.adjustment = adjustment;
  d.adjusted = raw.raw_mean * adjustment;
  return d;
}

AggregationResult aggregate(const std::vector<sentiment::ScoredArticle>& scored,
                            const std::vector<std::string>& universe,
                            const TradingCalendar& calendar, const AggregationConfig& config) {
  AggregationResult result;
  std::vector<DatedScore> dated;
  dated.reserve(scored.size());
  for (const auto& s : scored) {
    const auto when = effective_trading_date(s.published_at, calendar);
    using Status = DateAssignment::Status;
    if (when.status == Status::after_horizon) {
      ++result.dropped_after_horizon;
      result.diagnostics.push_back(fmt::format("article '{}' ({}) falls after the last trading date; dropped",
                                               s.id, format_timestamp(s.published_at)));
      continue;
    }
    if (when.status == Status::before_first) {
      result.diagnostics.push_back(fmt::format("article '{}' ({}) precedes the first trading date; "
                                               "assigned to {}",
                                               s.id, format_timestamp(s.published_at),
                                               format_date(calendar.dates().front())));
    }
    dated.push_back({s.company_id, s.source, when.index, s.score});
  }

  std::vector<std::string> skipped;
  const RawGrid grid = daily_raw_sentiment(dated, universe, calendar, &skipped);
  result.dropped_unknown_company = skipped.size();
  result.diagnostics.insert(result.diagnostics.end(), skipped.begin(), skipped.end());

  const std::size_t n = grid.companies.size();
  auto& panel = result.panel;
  panel.companies = grid.companies;
  panel.dates = grid.dates;
  panel.cells.resize(grid.cells.size());
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> history;
    for (std::size_t t = 0; t < grid.dates.size(); ++t) {
      const RawCell& raw = grid.cells[t * n + i];
      double adj = 1.0;
      if (raw.article_count > 0) adj = source_adjustment(raw.unique_sources, history);
      if (raw.article_count > 0 || config.adjustment_history == AdjustmentHistory::all_days) {
        history.push_back(raw.unique_sources);
      }
      panel.cells[t * n + i] = adjusted_daily_sentiment(grid.companies[i], grid.dates[t], raw, adj);
    }
  }
  return result;
}

void write_panel(const std::filesystem::path& path, const SentimentPanel& panel) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
  out << "date,company,raw_mean,unique_sources,adjustment,adjusted\n";
  for (const auto& c : panel.cells) {
    out << fmt::format("{},{},{},{},{},{}\n", format_date(c.date), c.company_id, c.raw_mean,
                       c.unique_sources, c.adjustment, c.adjusted);
  }
}

}  // namespace sentindex::aggregation
