#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sentindex/aggregation.hpp"
#include "sentindex/market.hpp"
#include "sentindex/optimizer.hpp"

namespace sentindex::backtest {

struct BacktestConfig {
  double tc_rate = 0.0005;
  // Trading days between a sentiment's effective date and the first return
  // its weights earn. 1: close-of-day rebalance on same-day sentiment.
  // 0: the literal same-day reading, which looks ahead one day.
  std::size_t signal_lag_days = 1;
  double initial_level = 100.0;
  optimizer::OptimizerConfig optimizer;

  void validate() const;
};

BacktestConfig backtest_config_from_json(const nlohmann::json& j);
BacktestConfig load_backtest_config(const std::filesystem::path& path);

// Adjusted sentiment aligned to a price panel: values[t * companies.size() + i].
struct SentimentMatrix {
  std::vector<Date> dates;
  std::vector<std::string> companies;
  std::vector<double> values;

  double at(std::size_t t, std::size_t i) const { return values[t * companies.size() + i]; }
  double& at(std::size_t t, std::size_t i) { return values[t * companies.size() + i]; }
};

SentimentMatrix from_panel(const aggregation::SentimentPanel& panel);
// Reads the aggregate CSV (date, company, adjusted) or a plain
// (date, company, sentiment) CSV. Every (company, date) of the price panel
// must be present; a gap is fatal and names the pair.
SentimentMatrix load_sentiments(const std::filesystem::path& path, const PriceSeries& prices);

double simple_return(double price, double previous_price);

// w_i (1 + r_i) / (1 + sum_j w_j r_j). Cash earns nothing.
std::vector<double> drift_weights(std::span<const double> weights, std::span<const double> returns);

struct CostBreakdown {
  double total = 0.0;
  double turnover = 0.0;
  std::vector<double> per_name;
};

CostBreakdown transaction_costs(std::span<const double> target, std::span<const double> drifted,
                                double tc_rate);

struct DayRecord {
  Date date;
  std::vector<double> held;     // weights earning this day's return
  std::vector<double> returns;  // per name, zero on the first day
  double gross_return = 0.0;
  std::vector<double> drifted;
  std::vector<double> target;
  double cost = 0.0;
  double turnover = 0.0;
  double net_return = 0.0;
  double level = 0.0;
  std::vector<optimizer::Trade> trades;
  std::vector<double> trade_costs;  // aligned with trades
};

struct BacktestState {
  std::size_t day = 0;  // index of the next date to process
  std::vector<double> weights;
  double level = 100.0;
};

struct StepResult {
  BacktestState state;
  DayRecord record;
};

// Processes date index state.day: returns, gross return, drift, re-solve on
// the lagged sentiment, costs on |target - drifted|, new level.
StepResult step_day(const BacktestState& state, const PriceSeries& prices,
                    const SentimentMatrix& sentiments, const BacktestConfig& cfg);

struct TradeStatistics {
  std::size_t total_trades = 0;
  std::size_t single_trades = 0;  // days with exactly one trade
  std::size_t max_trades_per_day = 0;
  std::size_t days_with_trades = 0;
  std::size_t initial_investment_trades = 0;
  std::map<std::size_t, std::size_t> histogram;  // k -> days with exactly k trades
};

TradeStatistics trade_statistics(std::span<const std::size_t> trades_per_day);

struct Summary {
  Date start_date;
  Date end_date;
  std::size_t trading_days = 0;
  double initial_level = 100.0;
  double final_index_level = 0.0;
  double final_benchmark_level = 0.0;
  double annualized_return_index = 0.0;
  double annualized_return_benchmark = 0.0;
  double total_costs = 0.0;
  TradeStatistics trades;
};

struct BacktestResult {
  std::vector<std::string> companies;
  std::vector<Date> dates;
  std::vector<double> levels;
  std::vector<double> benchmark_levels;
  std::vector<DayRecord> days;
  Summary summary;
};

// Statistics exclude the first day, which is the initial investment.
TradeStatistics trade_statistics(const BacktestResult& result);

// (L_end / L_start)^(365.25 / calendar days) - 1.
double annualized_return(std::span<const double> levels, std::span<const Date> dates);

// Starts from all-zero weights on the first date. Without a benchmark
// series the benchmark is an equal-weight basket rebalanced daily.
BacktestResult run_backtest(const PriceSeries& prices, const SentimentMatrix& sentiments,
                            const BacktestConfig& cfg,
                            const std::optional<BenchmarkSeries>& benchmark = std::nullopt);

nlohmann::ordered_json summary_to_json(const Summary& summary);

// Writes levels.csv, trades.csv and summary.json into dir (created if needed).
void write_result(const std::filesystem::path& dir, const BacktestResult& result);

}  // namespace sentindex::backtest
