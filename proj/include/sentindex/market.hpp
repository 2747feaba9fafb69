#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sentindex/timestamp.hpp"

namespace sentindex {

// Dense (date x company) panel of end-of-day closes. Companies are sorted
// ascending, which is also the optimizer's tie-break order.
struct PriceSeries {
  std::vector<Date> dates;
  std::vector<std::string> companies;
  std::vector<double> close;  // close[t * companies.size() + i]

  double at(std::size_t t, std::size_t i) const { return close[t * companies.size() + i]; }
  std::size_t company_index(const std::string& company) const;  // throws if unknown
};

// CSV with columns date, company, close. Rejects nonpositive prices,
// duplicate rows and any (company, date) gap.
PriceSeries load_prices(const std::filesystem::path& path);
PriceSeries make_price_series(std::vector<Date> dates, std::vector<std::string> companies,
                              std::vector<double> close);

struct BenchmarkSeries {
  std::vector<Date> dates;
  std::vector<double> level;
};

// CSV with columns date, level.
BenchmarkSeries load_benchmark(const std::filesystem::path& path);

}  // namespace sentindex
