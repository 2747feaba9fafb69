#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace sentindex::csv {

// Minimal comma-separated table: header row plus data rows, no quoting.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;  // 1-based source line per row

  // Index of a required column; throws std::runtime_error naming the file.
  std::size_t column(std::string_view name) const;
  std::filesystem::path source;
};

Table read(const std::filesystem::path& path);
Table parse(std::string_view content, std::filesystem::path source = {});

double to_double(std::string_view field, const Table& table, std::size_t row);

}  // namespace sentindex::csv
