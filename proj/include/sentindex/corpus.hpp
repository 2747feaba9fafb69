#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sentindex/timestamp.hpp"

namespace sentindex::corpus {

struct NewsArticle {
  std::string id;
  std::string company_id;
  std::string source;
  Timestamp published_at;
  std::string headline;
  std::optional<std::string> body;
  std::string language;

  friend bool operator==(const NewsArticle&, const NewsArticle&) = default;
};

struct FilterConfig {
  // company_id -> lowercase keywords matched in headline or body
  std::map<std::string, std::vector<std::string>> exclusions;
  std::vector<std::string> auto_generated_phrases;
  std::size_t max_headline_tokens = 1000;

  void validate() const;
};

struct Diagnostic {
  std::size_t line = 0;
  std::string message;
};

struct LoadResult {
  std::vector<NewsArticle> articles;
  std::vector<Diagnostic> diagnostics;
};

// Every filter partitions its input: kept and removed keep input order.
struct Partition {
  std::vector<NewsArticle> kept;
  std::vector<NewsArticle> removed;
};

NewsArticle article_from_json(const nlohmann::json& j);
nlohmann::ordered_json article_to_json(const NewsArticle& a);

// Reads a JSON-lines file. Malformed lines become diagnostics; an unreadable
// file throws std::runtime_error.
LoadResult load_articles(const std::filesystem::path& path);
LoadResult parse_articles(std::istream& in);
void write_articles(const std::filesystem::path& path, const std::vector<NewsArticle>& articles);

FilterConfig load_filter_config(const std::filesystem::path& path);
FilterConfig filter_config_from_json(const nlohmann::json& j);

Partition filter_exclusion_keywords(const std::vector<NewsArticle>& articles,
                                    const FilterConfig& config);
Partition remove_auto_generated(const std::vector<NewsArticle>& articles,
                                const FilterConfig& config);
// Keeps the earliest article per (company_id, lowercased headline); equal
// timestamps fall back to the lexicographically smallest id.
Partition deduplicate(const std::vector<NewsArticle>& articles);
// Lowercases the headline and drops the body. Returns nothing when the
// headline is empty or has more than max_headline_tokens tokens.
std::optional<NewsArticle> normalize_and_gate(const NewsArticle& article,
                                              const FilterConfig& config);

struct PipelineResult {
  std::vector<NewsArticle> kept;  // normalized
  std::vector<std::pair<NewsArticle, std::string>> removed;  // article, stage name
};

// keyword exclusion -> auto-generated phrases -> dedup -> normalize/gate
PipelineResult run_filters(const std::vector<NewsArticle>& articles, const FilterConfig& config);

}  // namespace sentindex::corpus
