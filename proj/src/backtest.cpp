#include "sentindex/backtest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "sentindex/csv.hpp"

namespace sentindex::backtest {

void BacktestConfig::validate() const {
  if (!(tc_rate >= 0.0 && tc_rate < 1.0)) {
    throw std::invalid_argument(fmt::format("tc_rate must lie in [0, 1), got {}", tc_rate));
  }
  if (!(initial_level > 0.0)) throw std::invalid_argument("initial_level must be positive");
}

BacktestConfig backtest_config_from_json(const nlohmann::json& j) {
  BacktestConfig cfg;
  cfg.tc_rate = j.value("tc_rate", cfg.tc_rate);
  if (auto it = j.find("signal_lag_days"); it != j.end()) {
    const auto lag = it->get<long long>();
    if (lag < 0) throw std::invalid_argument("signal_lag_days must be >= 0");
    cfg.signal_lag_days = static_cast<std::size_t>(lag);
  }
  cfg.initial_level = j.value("initial_level", cfg.initial_level);
  if (auto it = j.find("optimizer"); it != j.end()) {
    cfg.optimizer = optimizer::optimizer_config_from_json(*it);
  }
  cfg.validate();
  return cfg;
}

BacktestConfig load_backtest_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open backtest config '{}'", path.string()));
  return backtest_config_from_json(nlohmann::json::parse(in));
}

SentimentMatrix from_panel(const aggregation::SentimentPanel& panel) {
  SentimentMatrix m{panel.dates, panel.companies, {}};
  m.values.reserve(panel.cells.size());
  for (const auto& c : panel.cells) m.values.push_back(c.adjusted);
  return m;
}

SentimentMatrix load_sentiments(const std::filesystem::path& path, const PriceSeries& prices) {
  const auto table = csv::read(path);
  const auto c_date = table.column("date");
  const auto c_company = table.column("company");
  std::size_t c_value = 0;
  try {
    c_value = table.column("adjusted");
  } catch (const std::runtime_error&) {
    c_value = table.column("sentiment");
  }

  std::map<Date, std::size_t> date_index;
  for (std::size_t t = 0; t < prices.dates.size(); ++t) date_index.emplace(prices.dates[t], t);

  const std::size_t n = prices.companies.size();
  SentimentMatrix m{prices.dates, prices.companies, std::vector<double>(prices.dates.size() * n, 0.0)};
  std::vector<bool> seen(m.values.size(), false);
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const Date d = parse_date(row[c_date]);
    auto dt = date_index.find(d);
    if (dt == date_index.end()) {
      throw std::runtime_error(fmt::format("{}:{}: date {} is not a trading date of the price panel",
                                           path.string(), table.line_numbers[r], row[c_date]));
    }
    auto ci = std::lower_bound(prices.companies.begin(), prices.companies.end(), row[c_company]);
    if (ci == prices.companies.end() || *ci != row[c_company]) {
      throw std::runtime_error(fmt::format("{}:{}: company '{}' not in price universe",
                                           path.string(), table.line_numbers[r], row[c_company]));
    }
    const std::size_t k = dt->second * n + static_cast<std::size_t>(ci - prices.companies.begin());
    const double v = csv::to_double(row[c_value], table, r);
    if (!std::isfinite(v)) {
      throw std::runtime_error(fmt::format("{}:{}: sentiment is not finite", path.string(),
                                           table.line_numbers[r]));
    }
    m.values[k] = v;
    seen[k] = true;
  }
  for (std::size_t t = 0; t < prices.dates.size(); ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!seen[t * n + i]) {
        throw std::runtime_error(fmt::format("{}: missing sentiment for ({}, {})", path.string(),
                                             prices.companies[i], format_date(prices.dates[t])));
      }
    }
  }
  return m;
}

double simple_return(double price, double previous_price) {
  if (!(price > 0.0) || !(previous_price > 0.0)) {
    throw std::invalid_argument(fmt::format("nonpositive price ({}, {})", price, previous_price));
  }
  return (price - previous_price) / previous_price;
}

std::vector<double> drift_weights(std::span<const double> weights, std::span<const double> returns) {
  if (weights.size() != returns.size()) throw std::invalid_argument("drift_weights: length mismatch");
  double gross = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) gross += weights[i] * returns[i];
  const double denom = 1.0 + gross;
  if (!(denom > 0.0)) {
    throw std::runtime_error(fmt::format("portfolio wiped out (1 + gross return = {})", denom));
  }
  std::vector<double> drifted(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) {
    drifted[i] = weights[i] * (1.0 + returns[i]) / denom;
  }
  return drifted;
}

CostBreakdown transaction_costs(std::span<const double> target, std::span<const double> drifted,
                                double tc_rate) {
  if (target.size() != drifted.size()) throw std::invalid_argument("transaction_costs: length mismatch");
  CostBreakdown c;
  c.per_name.resize(target.size());
  for (std::size_t i = 0; i < target.size(); ++i) {
    const double traded = std::abs(target[i] - drifted[i]);
    c.turnover += traded;
    c.per_name[i] = tc_rate * traded;
    c.total += c.per_name[i];
  }
  return c;
}

StepResult step_day(const BacktestState& state, const PriceSeries& prices,
                    const SentimentMatrix& sentiments, const BacktestConfig& cfg) {
  const std::size_t t = state.day;
  const std::size_t n = prices.companies.size();
  if (t >= prices.dates.size()) throw std::out_of_range("step_day past the last trading date");
  if (sentiments.companies != prices.companies || sentiments.dates != prices.dates) {
    throw std::invalid_argument("sentiment matrix is not aligned with the price panel");
  }

  DayRecord rec;
  rec.date = prices.dates[t];
  rec.held = state.weights;
  rec.returns.assign(n, 0.0);
  if (t > 0) {
    for (std::size_t i = 0; i < n; ++i) rec.returns[i] = simple_return(prices.at(t, i), prices.at(t - 1, i));
  }
  for (std::size_t i = 0; i < n; ++i) rec.gross_return += rec.held[i] * rec.returns[i];

  try {
    rec.drifted = drift_weights(rec.held, rec.returns);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(fmt::format("{}: {}", format_date(rec.date), e.what()));
  }

  // Sentiment of trading day t + 1 - lag sets the weights held over day t + 1.
  std::vector<double> signal(n, 0.0);
  const long k = static_cast<long>(t) + 1 - static_cast<long>(cfg.signal_lag_days);
  if (k >= 0 && static_cast<std::size_t>(k) < sentiments.dates.size()) {
    for (std::size_t i = 0; i < n; ++i) signal[i] = sentiments.at(static_cast<std::size_t>(k), i);
  }

  rec.target = optimizer::optimize_weights(signal, rec.drifted, cfg.optimizer);
  const CostBreakdown costs = transaction_costs(rec.target, rec.drifted, cfg.tc_rate);
  rec.cost = costs.total;
  rec.turnover = costs.turnover;
  rec.net_return = rec.gross_return - rec.cost;
  rec.level = state.level * (1.0 + rec.net_return);
  if (!(rec.level > 0.0)) {
    throw std::runtime_error(fmt::format("{}: index level is no longer positive", format_date(rec.date)));
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double d = rec.target[i] - rec.drifted[i];
    if (std::abs(d) > cfg.optimizer.trade_epsilon) {
      rec.trades.push_back({prices.companies[i], d});
      rec.trade_costs.push_back(costs.per_name[i]);
    }
  }

  StepResult out;
  out.state.day = t + 1;
  out.state.weights = rec.target;
  out.state.level = rec.level;
  out.record = std::move(rec);
  return out;
}

TradeStatistics trade_statistics(std::span<const std::size_t> trades_per_day) {
  TradeStatistics s;
  for (std::size_t k : trades_per_day) {
    if (k == 0) continue;
    s.total_trades += k;
    s.days_with_trades += 1;
    s.histogram[k] += 1;
    s.max_trades_per_day = std::max(s.max_trades_per_day, k);
  }
  if (auto it = s.histogram.find(1); it != s.histogram.end()) s.single_trades = it->second;
  return s;
}

TradeStatistics trade_statistics(const BacktestResult& result) {
  std::vector<std::size_t> counts;
  for (std::size_t t = 1; t < result.days.size(); ++t) counts.push_back(result.days[t].trades.size());
  TradeStatistics s = trade_statistics(counts);
  if (!result.days.empty()) s.initial_investment_trades = result.days.front().trades.size();
  return s;
}

double annualized_return(std::span<const double> levels, std::span<const Date> dates) {
  if (levels.size() != dates.size() || levels.size() < 2) {
    throw std::invalid_argument("annualized_return needs at least two dated levels");
  }
  if (!(levels.front() > 0.0) || !(levels.back() > 0.0)) {
    throw std::invalid_argument("annualized_return needs positive levels");
  }
  const auto days = static_cast<double>(dates.back() - dates.front());
  if (!(days > 0.0)) throw std::invalid_argument("annualized_return needs a positive time span");
  return std::pow(levels.back() / levels.front(), 365.25 / days) - 1.0;
}

namespace {

std::vector<double> benchmark_path(const PriceSeries& prices, const BacktestConfig& cfg,
                                   const std::optional<BenchmarkSeries>& benchmark) {
  const std::size_t T = prices.dates.size();
  const std::size_t n = prices.companies.size();
  std::vector<double> path(T, cfg.initial_level);
  if (benchmark) {
    std::map<Date, double> by_date;
    for (std::size_t k = 0; k < benchmark->dates.size(); ++k) by_date[benchmark->dates[k]] = benchmark->level[k];
    double base = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
      auto it = by_date.find(prices.dates[t]);
      if (it == by_date.end()) {
        throw std::runtime_error(fmt::format("benchmark has no level for {}", format_date(prices.dates[t])));
      }
      if (t == 0) base = it->second;
      path[t] = cfg.initial_level * it->second / base;
    }
    return path;
  }
  for (std::size_t t = 1; t < T; ++t) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += simple_return(prices.at(t, i), prices.at(t - 1, i));
    path[t] = path[t - 1] * (1.0 + mean / static_cast<double>(n));
  }
  return path;
}

}  // namespace

BacktestResult run_backtest(const PriceSeries& prices, const SentimentMatrix& sentiments,
                            const BacktestConfig& cfg, const std::optional<BenchmarkSeries>& benchmark) {
  cfg.validate();
  if (prices.dates.empty()) throw std::invalid_argument("run_backtest: empty date range");
  if (prices.companies.empty()) throw std::invalid_argument("run_backtest: empty universe");
  cfg.optimizer.validate(prices.companies.size());

  BacktestResult result;
  result.companies = prices.companies;
  result.dates = prices.dates;
  result.benchmark_levels = benchmark_path(prices, cfg, benchmark);

  BacktestState state{0, std::vector<double>(prices.companies.size(), 0.0), cfg.initial_level};
  result.days.reserve(prices.dates.size());
  for (std::size_t t = 0; t < prices.dates.size(); ++t) {
    StepResult step = step_day(state, prices, sentiments, cfg);
    result.levels.push_back(step.record.level);
    result.days.push_back(std::move(step.record));
    state = std::move(step.state);
  }

  Summary& s = result.summary;
  s.start_date = result.dates.front();
  s.end_date = result.dates.back();
  s.trading_days = result.dates.size();
  s.initial_level = cfg.initial_level;
  s.final_index_level = result.levels.back();
  s.final_benchmark_level = result.benchmark_levels.back();
  if (result.dates.size() >= 2) {
    s.annualized_return_index = annualized_return(result.levels, result.dates);
    s.annualized_return_benchmark = annualized_return(result.benchmark_levels, result.dates);
  }
  for (const auto& d : result.days) s.total_costs += d.cost;
  s.trades = trade_statistics(result);
  return result;
}

nlohmann::ordered_json summary_to_json(const Summary& s) {
  nlohmann::ordered_json j;
  j["start_date"] = format_date(s.start_date);
  j["end_date"] = format_date(s.end_date);
  j["trading_days"] = s.trading_days;
  j["initial_level"] = s.initial_level;
  j["final_index_level"] = s.final_index_level;
  j["final_benchmark_level"] = s.final_benchmark_level;
  j["annualized_return_index"] = s.annualized_return_index;
  j["annualized_return_benchmark"] = s.annualized_return_benchmark;
  j["total_costs"] = s.total_costs;
  nlohmann::ordered_json hist = nlohmann::ordered_json::object();
  for (const auto& [k, days] : s.trades.histogram) hist[std::to_string(k)] = days;
  j["trade_statistics"] = {
      {"total_trades", s.trades.total_trades},
      {"single_trades", s.trades.single_trades},
      {"max_trades_per_day", s.trades.max_trades_per_day},
      {"days_with_trades", s.trades.days_with_trades},
      {"initial_investment_trades", s.trades.initial_investment_trades},
      {"histogram", hist},
  };
  return j;
}

void write_result(const std::filesystem::path& dir, const BacktestResult& result) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", (dir / name).string()));
    return out;
  };
  {
    auto out = open("levels.csv");
    out << "date,index_level,benchmark_level\n";
    for (std::size_t t = 0; t < result.dates.size(); ++t) {
      out << fmt::format("{},{:.12f},{:.12f}\n", format_date(result.dates[t]), result.levels[t],
                         result.benchmark_levels[t]);
    }
  }
  {
    auto out = open("trades.csv");
    out << "date,company,delta_weight,cost\n";
    for (const auto& d : result.days) {
      for (std::size_t k = 0; k < d.trades.size(); ++k) {
        out << fmt::format("{},{},{:.12f},{:.12f}\n", format_date(d.date), d.trades[k].company,
                           d.trades[k].delta_weight, d.trade_costs[k]);
      }
    }
  }
  {
    auto out = open("summary.json");
    out << summary_to_json(result.summary).dump(2) << '\n';
  }
}

}  // namespace sentindex::backtest
