#include "sentindex/market.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include <fmt/format.h>

#include "sentindex/csv.hpp"

namespace sentindex {

std::size_t PriceSeries::company_index(const std::string& company) const {
  auto it = std::lower_bound(companies.begin(), companies.end(), company);
  if (it == companies.end() || *it != company) {
    throw std::out_of_range(fmt::format("company '{}' not in price universe", company));
  }
  return static_cast<std::size_t>(it - companies.begin());
}

PriceSeries make_price_series(std::vector<Date> dates, std::vector<std::string> companies,
                              std::vector<double> close) {
  if (!std::is_sorted(companies.begin(), companies.end()) ||
      std::adjacent_find(companies.begin(), companies.end()) != companies.end()) {
    throw std::invalid_argument("companies must be sorted and unique");
  }
  for (std::size_t t = 1; t < dates.size(); ++t) {
    if (!(dates[t - 1] < dates[t])) throw std::invalid_argument("dates must be strictly increasing");
  }
  if (close.size() != dates.size() * companies.size()) {
    throw std::invalid_argument("price panel size does not match dates x companies");
  }
  for (double p : close) {
    if (!(p > 0.0)) throw std::invalid_argument(fmt::format("nonpositive price {}", p));
  }
  return {std::move(dates), std::move(companies), std::move(close)};
}

PriceSeries load_prices(const std::filesystem::path& path) {
  const auto table = csv::read(path);
  const auto c_date = table.column("date");
  const auto c_company = table.column("company");
  const auto c_close = table.column("close");

  std::set<Date> dates;
  std::set<std::string> companies;
  std::map<std::pair<std::string, Date>, double> values;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const Date d = parse_date(row[c_date]);
    const double p = csv::to_double(row[c_close], table, r);
    if (!(p > 0.0)) {
      throw std::runtime_error(fmt::format("{}:{}: nonpositive price for {} on {}", path.string(),
                                           table.line_numbers[r], row[c_company], row[c_date]));
    }
    if (!values.emplace(std::make_pair(row[c_company], d), p).second) {
      throw std::runtime_error(fmt::format("{}:{}: duplicate price for {} on {}", path.string(),
                                           table.line_numbers[r], row[c_company], row[c_date]));
    }
    dates.insert(d);
    companies.insert(row[c_company]);
  }

  PriceSeries ps;
  ps.dates.assign(dates.begin(), dates.end());
  ps.companies.assign(companies.begin(), companies.end());
  ps.close.reserve(ps.dates.size() * ps.companies.size());
  for (const auto& d : ps.dates) {
    for (const auto& c : ps.companies) {
      auto it = values.find({c, d});
      if (it == values.end()) {
        throw std::runtime_error(
            fmt::format("{}: missing price for {} on {}", path.string(), c, format_date(d)));
      }
      ps.close.push_back(it->second);
    }
  }
  return ps;
}

BenchmarkSeries load_benchmark(const std::filesystem::path& path) {
  const auto table = csv::read(path);
  const auto c_date = table.column("date");
  const auto c_level = table.column("level");
  BenchmarkSeries b;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    b.dates.push_back(parse_date(table.rows[r][c_date]));
    b.level.push_back(csv::to_double(table.rows[r][c_level], table, r));
    if (!(b.level.back() > 0.0)) {
      throw std::runtime_error(fmt::format("{}:{}: nonpositive benchmark level", path.string(),
                                           table.line_numbers[r]));
    }
    if (b.dates.size() > 1 && !(b.dates[b.dates.size() - 2] < b.dates.back())) {
      throw std::runtime_error(fmt::format("{}:{}: benchmark dates not increasing", path.string(),
                                           table.line_numbers[r]));
    }
  }
  return b;
}

}  // namespace sentindex
