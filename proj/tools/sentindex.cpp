// Command-line front end: one subcommand per pipeline stage.

#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "sentindex/aggregation.hpp"
#include "sentindex/backtest.hpp"
#include "sentindex/corpus.hpp"
#include "sentindex/csv.hpp"
#include "sentindex/market.hpp"
#include "sentindex/optimizer.hpp"
#include "sentindex/report.hpp"
#include "sentindex/sentiment.hpp"

namespace si = sentindex;

namespace {

int run_filter(const std::string& articles_path, const std::string& config_path,
               const std::string& out_path, const std::string& removed_path) {
  const auto loaded = si::corpus::load_articles(articles_path);
  for (const auto& d : loaded.diagnostics) {
    fmt::print(stderr, "{}:{}: skipped malformed record: {}\n", articles_path, d.line, d.message);
  }
  const auto config = si::corpus::load_filter_config(config_path);
  const auto result = si::corpus::run_filters(loaded.articles, config);
  si::corpus::write_articles(out_path, result.kept);

  std::map<std::string, std::size_t> by_stage;
  for (const auto& [a, stage] : result.removed) by_stage[stage] += 1;
  if (!removed_path.empty()) {
    std::ofstream out(removed_path, std::ios::binary);
    if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", removed_path));
    for (const auto& [a, stage] : result.removed) {
      auto j = si::corpus::article_to_json(a);
      j["removed_by"] = stage;
      out << j.dump() << '\n';
    }
  }
  fmt::print(stderr, "filter: {} loaded, {} malformed, {} kept", loaded.articles.size(),
             loaded.diagnostics.size(), result.kept.size());
  for (const auto& [stage, n] : by_stage) fmt::print(stderr, ", {} {}", n, stage);
  fmt::print(stderr, "\n");
  return 0;
}

int run_score(const std::string& articles_path, const std::string& provider_kind,
              const std::string& provider_file, const std::string& mode_name,
              const std::string& out_path) {
  const auto loaded = si::corpus::load_articles(articles_path);
  for (const auto& d : loaded.diagnostics) {
    fmt::print(stderr, "{}:{}: skipped malformed record: {}\n", articles_path, d.line, d.message);
  }
  const auto mode = mode_name == "expectation" ? si::sentiment::PolarityMode::expectation
                                               : si::sentiment::PolarityMode::winning_class;
  std::vector<si::sentiment::ScoredArticle> scored;
  if (provider_kind == "prescored") {
    const auto provider = si::sentiment::PrescoredProvider::load(provider_file);
    scored = si::sentiment::score_articles(loaded.articles, provider, mode);
  } else {
    const auto provider = si::sentiment::LexiconProvider::load(provider_file);
    scored = si::sentiment::score_articles(loaded.articles, provider, mode);
  }
  si::sentiment::write_scored(out_path, scored);
  fmt::print(stderr, "score: {} records written\n", scored.size());
  return 0;
}

int run_aggregate(const std::string& scored_path, const std::string& prices_path,
                  const std::string& config_path, const std::string& out_path) {
  const auto config = si::aggregation::load_aggregation_config(config_path);
  const auto prices = si::load_prices(prices_path);
  const si::aggregation::TradingCalendar calendar(
      prices.dates, si::load_time_zone(config.market_timezone), config.cutoff_minutes);
  const auto scored = si::sentiment::load_scored(scored_path);
  const auto result = si::aggregation::aggregate(scored, prices.companies, calendar, config);
  for (const auto& d : result.diagnostics) fmt::print(stderr, "aggregate: {}\n", d);
  si::aggregation::write_panel(out_path, result.panel);
  fmt::print(stderr, "aggregate: {} company-days written\n", result.panel.cells.size());
  return 0;
}

std::map<std::string, double> read_keyed(const std::string& path, const char* value_column) {
  const auto table = si::csv::read(path);
  const auto c_company = table.column("company");
  const auto c_value = table.column(value_column);
  std::map<std::string, double> out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    if (!out.emplace(table.rows[r][c_company], si::csv::to_double(table.rows[r][c_value], table, r)).second) {
      throw std::runtime_error(fmt::format("{}: duplicate company '{}'", path, table.rows[r][c_company]));
    }
  }
  return out;
}

int run_optimize(const std::string& sentiments_path, const std::string& prior_path,
                 const std::string& config_path, const std::string& out_path) {
  const auto cfg = si::optimizer::load_optimizer_config(config_path);
  const auto sentiments = read_keyed(sentiments_path, "sentiment");
  const auto prior = read_keyed(prior_path, "weight");
  const auto weights = si::optimizer::optimize_weights(sentiments, prior, cfg);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", out_path));
  out << "company,weight\n";
  for (const auto& [company, w] : weights) out << fmt::format("{},{:.12f}\n", company, w);
  const auto trades = si::optimizer::extract_trades(weights, prior, cfg.trade_epsilon);
  fmt::print(stderr, "optimize: objective {:.9f}, {} trades\n",
             si::optimizer::objective_value(weights, sentiments, prior, cfg.delta), trades.size());
  return 0;
}

int run_backtest(const std::string& prices_path, const std::string& sentiments_path,
                 const std::string& config_path, const std::string& benchmark_path,
                 const std::string& out_dir) {
  const auto cfg = si::backtest::load_backtest_config(config_path);
  const auto prices = si::load_prices(prices_path);
  const auto sentiments = si::backtest::load_sentiments(sentiments_path, prices);
  std::optional<si::BenchmarkSeries> benchmark;
  if (!benchmark_path.empty()) benchmark = si::load_benchmark(benchmark_path);
  const auto result = si::backtest::run_backtest(prices, sentiments, cfg, benchmark);
  si::backtest::write_result(out_dir, result);
  const auto& s = result.summary;
  fmt::print(stderr,
             "backtest: {} days, final level {:.4f} (benchmark {:.4f}), annualized {:.2f}% vs {:.2f}%, "
             "{} trades\n",
             s.trading_days, s.final_index_level, s.final_benchmark_level,
             100.0 * s.annualized_return_index, 100.0 * s.annualized_return_benchmark,
             s.trades.total_trades);
  return 0;
}

int run_report(const std::string& in_dir, const std::string& out_dir, const std::string& formats,
               const std::string& from, const std::string& to, const std::string& title) {
  si::report::ReportSpec spec;
  spec.input_dir = in_dir;
  spec.output_dir = out_dir;
  spec.svg = formats.find("svg") != std::string::npos;
  spec.csv = formats.find("csv") != std::string::npos;
  if (!spec.svg && !spec.csv) throw std::invalid_argument("--format must name svg and/or csv");
  if (!from.empty()) spec.from = si::parse_date(from);
  if (!to.empty()) spec.to = si::parse_date(to);
  if (!title.empty()) spec.title = title;
  for (const auto& p : si::report::render_report(spec)) fmt::print(stderr, "report: wrote {}\n", p.string());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sentiment index construction and backtesting"};
  app.require_subcommand(1);

  std::string articles, config, out, removed, provider = "lexicon", provider_file, mode = "winning";
  std::string scored, prices, sentiments, prior, benchmark, in_dir, formats = "svg,csv", from, to, title;

  auto* filter = app.add_subcommand("filter", "Apply relevance and hygiene filters to an article file");
  filter->add_option("--articles", articles, "Articles JSON-lines file")->required()->check(CLI::ExistingFile);
  filter->add_option("--config", config, "Filter configuration JSON")->required()->check(CLI::ExistingFile);
  filter->add_option("--out", out, "Kept (normalized) articles JSON-lines")->required();
  filter->add_option("--removed", removed, "Removed articles JSON-lines, tagged with the stage");

  auto* score = app.add_subcommand("score", "Score articles into polarity values");
  score->add_option("--articles", articles)->required()->check(CLI::ExistingFile);
  score->add_option("--provider", provider)->check(CLI::IsMember({"prescored", "lexicon"}));
  score->add_option("--provider-file", provider_file)->required()->check(CLI::ExistingFile);
  score->add_option("--mode", mode, "winning (default) or expectation")
      ->check(CLI::IsMember({"winning", "expectation"}));
  score->add_option("--out", out)->required();

  auto* aggregate = app.add_subcommand("aggregate", "Aggregate scores into daily adjusted sentiment");
  aggregate->add_option("--scored", scored)->required()->check(CLI::ExistingFile);
  aggregate->add_option("--prices", prices)->required()->check(CLI::ExistingFile);
  aggregate->add_option("--config", config)->required()->check(CLI::ExistingFile);
  aggregate->add_option("--out", out)->required();

  auto* optimize = app.add_subcommand("optimize", "Solve one day's weight problem");
  optimize->add_option("--sentiments", sentiments, "CSV: company, sentiment")->required()->check(CLI::ExistingFile);
  optimize->add_option("--prior", prior, "CSV: company, weight")->required()->check(CLI::ExistingFile);
  optimize->add_option("--config", config)->required()->check(CLI::ExistingFile);
  optimize->add_option("--out", out)->required();

  auto* backtest = app.add_subcommand("backtest", "Simulate the index over the price history");
  backtest->add_option("--prices", prices)->required()->check(CLI::ExistingFile);
  backtest->add_option("--sentiments", sentiments)->required()->check(CLI::ExistingFile);
  backtest->add_option("--config", config)->required()->check(CLI::ExistingFile);
  backtest->add_option("--benchmark", benchmark, "CSV: date, level")->check(CLI::ExistingFile);
  backtest->add_option("--out", out, "Output directory")->required();

  auto* report = app.add_subcommand("report", "Render chart and summary table from backtest output");
  report->add_option("--in", in_dir)->required()->check(CLI::ExistingDirectory);
  report->add_option("--out", out)->required();
  report->add_option("--format", formats, "Comma-separated: svg,csv");
  report->add_option("--from", from, "First date (YYYY-MM-DD)");
  report->add_option("--to", to, "Last date (YYYY-MM-DD)");
  report->add_option("--title", title);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*filter) return run_filter(articles, config, out, removed);
    if (*score) return run_score(articles, provider, provider_file, mode, out);
    if (*aggregate) return run_aggregate(scored, prices, config, out);
    if (*optimize) return run_optimize(sentiments, prior, config, out);
    if (*backtest) return run_backtest(prices, sentiments, config, benchmark, out);
    if (*report) return run_report(in_dir, out, formats, from, to, title);
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return 2;
}
