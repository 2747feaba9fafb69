#include "fixture.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "sentindex/csv.hpp"
#include "sentindex/sentiment.hpp"

namespace sentindex::testing {

std::filesystem::path golden_dir() { return SENTINDEX_GOLDEN_DIR; }

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("sentindex_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

GoldenInputs run_golden_inputs() {
  const auto dir = golden_dir();
  GoldenInputs g;
  g.loaded = corpus::load_articles(dir / "articles.jsonl");
  g.filtered = corpus::run_filters(g.loaded.articles, corpus::load_filter_config(dir / "filter.json"));
  const auto lexicon = sentiment::LexiconProvider::load(dir / "lexicon.json");
  g.scored = sentiment::score_articles(g.filtered.kept, lexicon);
  g.prices = load_prices(dir / "prices.csv");
  const auto acfg = aggregation::load_aggregation_config(dir / "aggregate.json");
  const aggregation::TradingCalendar calendar(g.prices.dates, load_time_zone(acfg.market_timezone),
                                              acfg.cutoff_minutes);
  g.aggregated = aggregation::aggregate(g.scored, g.prices.companies, calendar, acfg);
  g.sentiments = backtest::from_panel(g.aggregated.panel);
  g.config = backtest::load_backtest_config(dir / "backtest.json");
  return g;
}

ExpectedLevels read_expected_levels(const std::filesystem::path& path) {
  const auto t = csv::read(path);
  ExpectedLevels e;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    e.dates.push_back(t.rows[r][t.column("date")]);
    e.index.push_back(csv::to_double(t.rows[r][t.column("index_level")], t, r));
    e.benchmark.push_back(csv::to_double(t.rows[r][t.column("benchmark_level")], t, r));
  }
  return e;
}

std::vector<ExpectedTrade> read_expected_trades(const std::filesystem::path& path) {
  const auto t = csv::read(path);
  std::vector<ExpectedTrade> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    out.push_back({t.rows[r][t.column("date")], t.rows[r][t.column("company")],
                   csv::to_double(t.rows[r][t.column("delta_weight")], t, r),
                   csv::to_double(t.rows[r][t.column("cost")], t, r)});
  }
  return out;
}

std::vector<Date> weekdays(Date start, std::size_t count) {
  std::vector<Date> out;
  for (Date d = start; out.size() < count; ++d) {
    const auto wd = absl::GetWeekday(d);
    if (wd != absl::Weekday::saturday && wd != absl::Weekday::sunday) out.push_back(d);
  }
  return out;
}

PriceSeries random_prices(std::size_t n, std::size_t days, std::mt19937_64& rng, double vol) {
  std::normal_distribution<double> shock(0.0, vol);
  std::uniform_real_distribution<double> start(20.0, 200.0);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back(i < 10 ? "C0" + std::to_string(i) : "C" + std::to_string(i));
  std::vector<double> level(n);
  for (auto& x : level) x = start(rng);
  std::vector<double> close;
  for (std::size_t t = 0; t < days; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      if (t > 0) level[i] *= std::exp(shock(rng));
      close.push_back(level[i]);
    }
  }
  return make_price_series(weekdays(Date(2020, 1, 6), days), names, close);
}

backtest::SentimentMatrix random_sentiments(const PriceSeries& prices, std::mt19937_64& rng,
                                            double zero_share) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::bernoulli_distribution zero(zero_share);
  backtest::SentimentMatrix m{prices.dates, prices.companies, {}};
  m.values.resize(prices.dates.size() * prices.companies.size());
  for (auto& v : m.values) v = zero(rng) ? 0.0 : u(rng);
  return m;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace sentindex::testing
