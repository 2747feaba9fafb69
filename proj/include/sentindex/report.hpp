#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sentindex/timestamp.hpp"

namespace sentindex::report {

struct ReportSpec {
  std::filesystem::path input_dir;   // levels.csv, trades.csv, summary.json
  std::filesystem::path output_dir;
  bool svg = true;
  bool csv = true;
  std::string title = "Sentiment index vs. benchmark";
  std::optional<Date> from;
  std::optional<Date> to;
};

struct ReportData {
  std::vector<Date> dates;
  std::vector<double> index_levels;
  std::vector<double> benchmark_levels;
  std::vector<std::size_t> trades_per_day;  // initial investment day counted as 0
};

struct ReportTable {
  std::optional<double> annualized_index;  // absent with fewer than two dates
  std::optional<double> annualized_benchmark;
  std::size_t total_trades = 0;
  std::size_t single_trades = 0;
  std::size_t max_trades_per_day = 0;
  std::map<std::size_t, std::size_t> histogram;
};

// Loads and date-filters a backtest output directory. Missing or malformed
// files, and a filter that leaves no rows, throw std::runtime_error.
ReportData load_report_data(const ReportSpec& spec);
ReportTable summarize(const ReportData& data);

std::string render_svg(const ReportData& data, const std::string& title);
std::string render_summary_csv(const ReportTable& table);

// Writes chart.svg and/or summary.csv into spec.output_dir; returns the paths.
std::vector<std::filesystem::path> render_report(const ReportSpec& spec);

}  // namespace sentindex::report
