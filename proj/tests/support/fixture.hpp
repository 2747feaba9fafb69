#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "sentindex/aggregation.hpp"
#include "sentindex/backtest.hpp"
#include "sentindex/corpus.hpp"
#include "sentindex/market.hpp"

namespace sentindex::testing {

std::filesystem::path golden_dir();

// Fresh, empty directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string& name);

// articles -> filter -> lexicon score -> aggregate, on the committed corpus.
struct GoldenInputs {
  corpus::LoadResult loaded;
  corpus::PipelineResult filtered;
  std::vector<sentiment::ScoredArticle> scored;
  aggregation::AggregationResult aggregated;
  PriceSeries prices;
  backtest::SentimentMatrix sentiments;
  backtest::BacktestConfig config;
};

GoldenInputs run_golden_inputs();

struct ExpectedTrade {
  std::string date;
  std::string company;
  double delta_weight;
  double cost;
};

struct ExpectedLevels {
  std::vector<std::string> dates;
  std::vector<double> index;
  std::vector<double> benchmark;
};

ExpectedLevels read_expected_levels(const std::filesystem::path& path);
std::vector<ExpectedTrade> read_expected_trades(const std::filesystem::path& path);

// Weekday calendar starting on the given date.
std::vector<Date> weekdays(Date start, std::size_t count);

// Geometric random walk prices for n names ("C00", "C01", ...).
PriceSeries random_prices(std::size_t n, std::size_t days, std::mt19937_64& rng, double vol = 0.02);

// Sentiments uniform in [-1, 1], with a share of exact zeros (no-news days).
backtest::SentimentMatrix random_sentiments(const PriceSeries& prices, std::mt19937_64& rng,
                                            double zero_share = 0.5);

std::string read_file(const std::filesystem::path& path);

}  // namespace sentindex::testing
