#include "sentindex/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include <fmt/format.h>

#include "sentindex/text.hpp"

namespace sentindex::corpus {
namespace {

const std::string& required_string(const nlohmann::json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw std::invalid_argument(fmt::format("missing field '{}'", key));
  if (!it->is_string()) throw std::invalid_argument(fmt::format("field '{}' is not a string", key));
  return it->get_ref<const std::string&>();
}

bool any_occurs(const std::vector<std::string>& needles, const std::string& headline,
                const std::string& body) {
  for (const auto& n : needles) {
    if (n.empty()) continue;
    if (text::contains(headline, n) || text::contains(body, n)) return true;
  }
  return false;
}

template <class Pred>
Partition partition_by(const std::vector<NewsArticle>& articles, Pred remove) {
  Partition p;
  for (const auto& a : articles) {
    (remove(a) ? p.removed : p.kept).push_back(a);
  }
  return p;
}

std::vector<std::string> lowercase_all(const std::vector<std::string>& v) {
  std::vector<std::string> out;
  out.reserve(v.size());
  for (const auto& s : v) out.push_back(text::to_lower(s));
  return out;
}

}  // namespace

void FilterConfig::validate() const {
  if (max_headline_tokens < 1) throw std::invalid_argument("max_headline_tokens must be >= 1");
}

NewsArticle article_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("record is not a JSON object");
  NewsArticle a;
  a.id = required_string(j, "id");
  a.company_id = required_string(j, "company_id");
  a.source = required_string(j, "source");
  a.published_at = parse_timestamp(required_string(j, "published_at"));
  a.headline = required_string(j, "headline");
  a.language = required_string(j, "language");
  if (auto it = j.find("body"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) throw std::invalid_argument("field 'body' is not a string");
    a.body = it->get<std::string>();
  }
  if (a.id.empty()) throw std::invalid_argument("empty id");
  return a;
}

nlohmann::ordered_json article_to_json(const NewsArticle& a) {
  nlohmann::ordered_json j;
  j["id"] = a.id;
  j["company_id"] = a.company_id;
  j["source"] = a.source;
  j["published_at"] = format_timestamp(a.published_at);
  j["headline"] = a.headline;
  if (a.body) {
    j["body"] = *a.body;
  } else {
    j["body"] = nullptr;
  }
  j["language"] = a.language;
  return j;
}

LoadResult parse_articles(std::istream& in) {
  LoadResult result;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      NewsArticle a = article_from_json(nlohmann::json::parse(line));
      if (!seen.insert(a.id).second) {
        result.diagnostics.push_back({line_no, fmt::format("duplicate id '{}'", a.id)});
        continue;
      }
      result.articles.push_back(std::move(a));
    } catch (const std::exception& e) {
      result.diagnostics.push_back({line_no, e.what()});
    }
  }
  return result;
}

LoadResult load_articles(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open articles file '{}'", path.string()));
  return parse_articles(in);
}

void write_articles(const std::filesystem::path& path, const std::vector<NewsArticle>& articles) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
  for (const auto& a : articles) out << article_to_json(a).dump() << '\n';
}

FilterConfig filter_config_from_json(const nlohmann::json& j) {
  FilterConfig cfg;
  if (auto it = j.find("exclusions"); it != j.end()) {
    for (const auto& [company, words] : it->items()) {
      cfg.exclusions[company] = lowercase_all(words.get<std::vector<std::string>>());
    }
  }
  if (auto it = j.find("auto_generated_phrases"); it != j.end()) {
    cfg.auto_generated_phrases = lowercase_all(it->get<std::vector<std::string>>());
  }
  if (auto it = j.find("max_headline_tokens"); it != j.end()) {
    const auto n = it->get<long long>();
    if (n < 1) throw std::invalid_argument("max_headline_tokens must be >= 1");
    cfg.max_headline_tokens = static_cast<std::size_t>(n);
  }
  return cfg;
}

FilterConfig load_filter_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open filter config '{}'", path.string()));
  return filter_config_from_json(nlohmann::json::parse(in));
}

Partition filter_exclusion_keywords(const std::vector<NewsArticle>& articles,
                                    const FilterConfig& config) {
  return partition_by(articles, [&](const NewsArticle& a) {
    auto rule = config.exclusions.find(a.company_id);
    if (rule == config.exclusions.end() || rule->second.empty()) return false;
    return any_occurs(rule->second, text::to_lower(a.headline), text::to_lower(a.body.value_or("")));
  });
}

Partition remove_auto_generated(const std::vector<NewsArticle>& articles,
                                const FilterConfig& config) {
  if (config.auto_generated_phrases.empty()) return {articles, {}};
  return partition_by(articles, [&](const NewsArticle& a) {
    return any_occurs(config.auto_generated_phrases, text::to_lower(a.headline),
                      text::to_lower(a.body.value_or("")));
  });
}

Partition deduplicate(const std::vector<NewsArticle>& articles) {
  struct KeyHash {
    std::size_t operator()(const std::pair<std::string, std::string>& k) const {
      return std::hash<std::string>{}(k.first) * 31 + std::hash<std::string>{}(k.second);
    }
  };
  std::unordered_map<std::pair<std::string, std::string>, std::size_t, KeyHash> winner;
  for (std::size_t i = 0; i < articles.size(); ++i) {
    const auto& a = articles[i];
    auto key = std::make_pair(a.company_id, text::to_lower(a.headline));
    auto [it, inserted] = winner.emplace(std::move(key), i);
    if (inserted) continue;
    const auto& best = articles[it->second];
    if (std::tie(a.published_at.instant, a.id) < std::tie(best.published_at.instant, best.id)) {
      it->second = i;
    }
  }
  std::vector<bool> keep(articles.size(), false);
  for (const auto& [key, idx] : winner) keep[idx] = true;
  Partition p;
  for (std::size_t i = 0; i < articles.size(); ++i) {
    (keep[i] ? p.kept : p.removed).push_back(articles[i]);
  }
  return p;
}

std::optional<NewsArticle> normalize_and_gate(const NewsArticle& article,
                                              const FilterConfig& config) {
  NewsArticle out = article;
  out.headline = text::to_lower(article.headline);
  out.body.reset();
  const std::size_t tokens = text::count_tokens(out.headline);
  if (tokens == 0 || tokens > config.max_headline_tokens) return std::nullopt;
  return out;
}

PipelineResult run_filters(const std::vector<NewsArticle>& articles, const FilterConfig& config) {
  config.validate();
  PipelineResult result;
  auto record = [&](Partition p, const char* stage) {
    for (auto& a : p.removed) result.removed.emplace_back(std::move(a), stage);
    return std::move(p.kept);
  };
  auto kept = record(filter_exclusion_keywords(articles, config), "exclusion_keyword");
  kept = record(remove_auto_generated(kept, config), "auto_generated");
  kept = record(deduplicate(kept), "duplicate");
  for (auto& a : kept) {
    if (auto n = normalize_and_gate(a, config)) {
      result.kept.push_back(std::move(*n));
    } else {
      result.removed.emplace_back(std::move(a), "headline_length");
    }
  }
  return result;
}

}  // namespace sentindex::corpus
