#include "sentindex/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "sentindex/backtest.hpp"
#include "sentindex/csv.hpp"

namespace sentindex::report {
namespace {

constexpr double kWidth = 900;
constexpr double kHeight = 420;
constexpr double kLeft = 70;
constexpr double kRight = 60;
constexpr double kTop = 44;
constexpr double kBottom = 50;

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

csv::Table read_required(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw std::runtime_error(fmt::format("report input '{}' is missing", path.string()));
  }
  return csv::read(path);
}

}  // namespace

ReportData load_report_data(const ReportSpec& spec) {
  const auto summary_path = spec.input_dir / "summary.json";
  if (!std::filesystem::exists(summary_path)) {
    throw std::runtime_error(fmt::format("report input '{}' is missing", summary_path.string()));
  }
  {
    std::ifstream in(summary_path);
    const auto j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("trade_statistics")) {
      throw std::runtime_error(fmt::format("report input '{}' is not a valid summary", summary_path.string()));
    }
  }

  const auto levels = read_required(spec.input_dir / "levels.csv");
  const auto trades = read_required(spec.input_dir / "trades.csv");
  const auto l_date = levels.column("date");
  const auto l_index = levels.column("index_level");
  const auto l_bench = levels.column("benchmark_level");
  const auto t_date = trades.column("date");

  if (levels.rows.empty()) throw std::runtime_error("levels.csv has no rows");
  const Date initial_day = parse_date(levels.rows.front()[l_date]);

  std::map<Date, std::size_t> counts;
  for (const auto& row : trades.rows) counts[parse_date(row[t_date])] += 1;

  ReportData data;
  for (std::size_t r = 0; r < levels.rows.size(); ++r) {
    const Date d = parse_date(levels.rows[r][l_date]);
    if (spec.from && d < *spec.from) continue;
    if (spec.to && *spec.to < d) continue;
    data.dates.push_back(d);
    data.index_levels.push_back(csv::to_double(levels.rows[r][l_index], levels, r));
    data.benchmark_levels.push_back(csv::to_double(levels.rows[r][l_bench], levels, r));
    auto it = counts.find(d);
    data.trades_per_day.push_back(d == initial_day || it == counts.end() ? 0 : it->second);
  }
  if (data.dates.empty()) throw std::runtime_error("date filter leaves no rows to report");
  return data;
}

ReportTable summarize(const ReportData& data) {
  ReportTable table;
  if (data.dates.size() >= 2) {
    table.annualized_index = backtest::annualized_return(data.index_levels, data.dates);
    table.annualized_benchmark = backtest::annualized_return(data.benchmark_levels, data.dates);
  }
  const auto stats = backtest::trade_statistics(data.trades_per_day);
  table.total_trades = stats.total_trades;
  table.single_trades = stats.single_trades;
  table.max_trades_per_day = stats.max_trades_per_day;
  table.histogram = stats.histogram;
  return table;
}

std::string render_summary_csv(const ReportTable& table) {
  auto pct = [](const std::optional<double>& v) {
    return v ? fmt::format("{:.2f}", *v * 100.0) : std::string("n/a");
  };
  std::string out = "metric,value\n";
  out += fmt::format("annualized_return_index_pct,{}\n", pct(table.annualized_index));
  out += fmt::format("annualized_return_benchmark_pct,{}\n", pct(table.annualized_benchmark));
  out += fmt::format("total_trades,{}\n", table.total_trades);
  out += fmt::format("single_trades,{}\n", table.single_trades);
  out += fmt::format("max_trades_per_day,{}\n", table.max_trades_per_day);
  for (const auto& [k, days] : table.histogram) out += fmt::format("days_with_{}_trades,{}\n", k, days);
  return out;
}

std::string render_svg(const ReportData& data, const std::string& title) {
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  const std::size_t T = data.dates.size();

  double lo = std::min(*std::min_element(data.index_levels.begin(), data.index_levels.end()),
                       *std::min_element(data.benchmark_levels.begin(), data.benchmark_levels.end()));
  double hi = std::max(*std::max_element(data.index_levels.begin(), data.index_levels.end()),
                       *std::max_element(data.benchmark_levels.begin(), data.benchmark_levels.end()));
  if (hi - lo < 1e-9) {
    lo -= 1.0;
    hi += 1.0;
  }
  const double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;
  const std::size_t max_trades =
      std::max<std::size_t>(1, *std::max_element(data.trades_per_day.begin(), data.trades_per_day.end()));

  auto x_of = [&](std::size_t t) {
    return kLeft + (T == 1 ? plot_w / 2 : plot_w * static_cast<double>(t) / static_cast<double>(T - 1));
  };
  auto y_of = [&](double level) { return kTop + plot_h * (hi - level) / (hi - lo); };
  auto y_trades = [&](std::size_t k) {
    return kTop + plot_h * (1.0 - static_cast<double>(k) / static_cast<double>(max_trades));
  };

  std::string s;
  s += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0:.0f}\" height=\"{1:.0f}\" "
      "viewBox=\"0 0 {0:.0f} {1:.0f}\" font-family=\"sans-serif\" font-size=\"11\">\n",
      kWidth, kHeight);
  s += fmt::format("<rect x=\"0\" y=\"0\" width=\"{:.0f}\" height=\"{:.0f}\" fill=\"white\"/>\n", kWidth, kHeight);
  s += fmt::format("<text x=\"{:.2f}\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
                   kWidth / 2, escape_xml(title));

  // Grid and left axis.
  constexpr int kTicks = 5;
  for (int k = 0; k <= kTicks; ++k) {
    const double v = lo + (hi - lo) * k / kTicks;
    const double y = y_of(v);
    s += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"#e0e0e0\"/>\n",
                     kLeft, y, kLeft + plot_w, y);
    s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">{:.1f}</text>\n", kLeft - 6, y + 4, v);
  }
  // Right axis: trade counts.
  const std::size_t right_step = std::max<std::size_t>(1, (max_trades + 4) / 5);
  for (std::size_t k = 0; k <= max_trades; k += right_step) {
    const double y = y_trades(k);
    s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"start\" fill=\"#555555\">{}</text>\n",
                     kLeft + plot_w + 6, y + 4, k);
  }
  // X labels.
  const std::size_t labels = std::min<std::size_t>(6, T);
  for (std::size_t k = 0; k < labels; ++k) {
    const std::size_t t = labels == 1 ? 0 : k * (T - 1) / (labels - 1);
    s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n", x_of(t),
                     kTop + plot_h + 18, format_date(data.dates[t]));
  }
  s += fmt::format(
      "<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"none\" stroke=\"#333333\"/>\n",
      kLeft, kTop, plot_w, plot_h);

  // Trade impulses.
  for (std::size_t t = 0; t < T; ++t) {
    if (data.trades_per_day[t] == 0) continue;
    s += fmt::format(
        "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"#9e9e9e\" stroke-width=\"2\"/>\n",
        x_of(t), kTop + plot_h, y_trades(data.trades_per_day[t]));
  }

  auto polyline = [&](const std::vector<double>& series, const char* color) {
    std::string pts;
    for (std::size_t t = 0; t < T; ++t) {
      if (t) pts += ' ';
      pts += fmt::format("{:.2f},{:.2f}", x_of(t), y_of(series[t]));
    }
    return fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n", color, pts);
  };
  s += polyline(data.benchmark_levels, "#d62728");
  s += polyline(data.index_levels, "#1f77b4");

  // Legend.
  const double lx = kLeft + 10;
  const double ly = kTop + 14;
  s += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"#1f77b4\" stroke-width=\"2\"/>\n",
                   lx, ly, lx + 20, ly);
  s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\">Sentiment index</text>\n", lx + 26, ly + 4);
  s += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"#d62728\" stroke-width=\"2\"/>\n",
                   lx, ly + 16, lx + 20, ly + 16);
  s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\">Benchmark</text>\n", lx + 26, ly + 20);
  s += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"#9e9e9e\" stroke-width=\"2\"/>\n",
                   lx, ly + 32, lx + 20, ly + 32);
  s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\">Number of transactions (right axis)</text>\n", lx + 26, ly + 36);
  s += "</svg>\n";
  return s;
}

std::vector<std::filesystem::path> render_report(const ReportSpec& spec) {
  const ReportData data = load_report_data(spec);
  std::filesystem::create_directories(spec.output_dir);
  std::vector<std::filesystem::path> written;
  auto write = [&](const char* name, const std::string& content) {
    const auto path = spec.output_dir / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
    out << content;
    written.push_back(path);
  };
  if (spec.svg) write("chart.svg", render_svg(data, spec.title));
  if (spec.csv) write("summary.csv", render_summary_csv(summarize(data)));
  return written;
}

}  // namespace sentindex::report
