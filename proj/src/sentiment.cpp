#include "sentindex/sentiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "sentindex/text.hpp"

namespace sentindex::sentiment {

void ClassProbabilities::validate() const {
  auto in_unit = [](double p) { return std::isfinite(p) && p >= 0.0 && p <= 1.0; };
  if (!in_unit(negative) || !in_unit(neutral) || !in_unit(positive) ||
      std::abs(negative + neutral + positive - 1.0) > kSumTolerance) {
    throw InvalidProbabilities(*this);
  }
}

InvalidProbabilities::InvalidProbabilities(const ClassProbabilities& p)
    : std::invalid_argument(fmt::format("invalid class probabilities (negative={}, neutral={}, "
                                        "positive={})",
                                        p.negative, p.neutral, p.positive)) {}

SentimentScore::SentimentScore(double value) : value_(value) {
  if (!(value >= -1.0 && value <= 1.0)) {
    throw std::invalid_argument(fmt::format("sentiment score {} outside [-1, 1]", value));
  }
}

SentimentScore polarity_score(const ClassProbabilities& probs, PolarityMode mode) {
  probs.validate();
  if (mode == PolarityMode::expectation) {
    return SentimentScore(std::clamp(probs.positive - probs.negative, -1.0, 1.0));
  }
  if (probs.positive >= probs.neutral && probs.positive >= probs.negative) {
    return SentimentScore(probs.positive);
  }
  if (probs.neutral >= probs.negative) return SentimentScore(0.0);
  return SentimentScore(-probs.negative);
}

ClassProbabilities lexicon_score(std::string_view headline, const Lexicon& lexicon) {
  double sum = 0.0;
  std::size_t hits = 0;
  for (auto token : text::whitespace_tokens(headline)) {
    auto it = lexicon.find(text::strip_punctuation(token));
    if (it == lexicon.end()) continue;
    sum += it->second;
    ++hits;
  }
  const double s = hits == 0 ? 0.0 : sum / static_cast<double>(hits);
  return {std::max(-s, 0.0), 1.0 - std::abs(s), std::max(s, 0.0)};
}

MissingScore::MissingScore(const std::string& article_id)
    : std::runtime_error(fmt::format("no pre-scored probabilities for article '{}'", article_id)) {}

PrescoredProvider::PrescoredProvider(std::unordered_map<std::string, ClassProbabilities> table)
    : table_(std::move(table)) {
  for (const auto& [id, p] : table_) p.validate();
}

PrescoredProvider PrescoredProvider::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open pre-scored file '{}'", path.string()));
  std::unordered_map<std::string, ClassProbabilities> table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      ClassProbabilities p{j.at("p_negative").get<double>(), j.at("p_neutral").get<double>(),
                           j.at("p_positive").get<double>()};
      p.validate();
      table[j.at("id").get<std::string>()] = p;
    } catch (const std::exception& e) {
      throw std::runtime_error(fmt::format("{}:{}: {}", path.string(), line_no, e.what()));
    }
  }
  return PrescoredProvider(std::move(table));
}

ClassProbabilities PrescoredProvider::classify(const corpus::NewsArticle& article) const {
  auto it = table_.find(article.id);
  if (it == table_.end()) throw MissingScore(article.id);
  return it->second;
}

LexiconProvider::LexiconProvider(Lexicon lexicon) {
  for (auto& [token, v] : lexicon) {
    if (!(v >= -1.0 && v <= 1.0)) {
      throw std::invalid_argument(fmt::format("lexicon value for '{}' outside [-1, 1]: {}", token, v));
    }
    lexicon_[text::to_lower(token)] = v;
  }
}

LexiconProvider LexiconProvider::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open lexicon '{}'", path.string()));
  const auto j = nlohmann::json::parse(in);
  Lexicon lexicon;
  for (const auto& [token, v] : j.items()) lexicon[token] = v.get<double>();
  return LexiconProvider(std::move(lexicon));
}

ClassProbabilities LexiconProvider::classify(const corpus::NewsArticle& article) const {
  return lexicon_score(text::to_lower(article.headline), lexicon_);
}

std::vector<ScoredArticle> score_articles(const std::vector<corpus::NewsArticle>& articles,
                                          const ScoringProvider& provider, PolarityMode mode) {
  std::vector<ScoredArticle> out;
  out.reserve(articles.size());
  for (const auto& a : articles) {
    const auto score = polarity_score(provider.classify(a), mode);
    out.push_back({a.id, a.company_id, a.source, a.published_at, score.value()});
  }
  return out;
}

void write_scored(const std::filesystem::path& path, const std::vector<ScoredArticle>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
  for (const auto& r : records) {
    nlohmann::ordered_json j;
    j["id"] = r.id;
    j["company_id"] = r.company_id;
    j["source"] = r.source;
    j["published_at"] = format_timestamp(r.published_at);
    j["score"] = r.score;
    out << j.dump() << '\n';
  }
}

std::vector<ScoredArticle> load_scored(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open scored file '{}'", path.string()));
  std::vector<ScoredArticle> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      ScoredArticle r;
      r.id = j.at("id").get<std::string>();
      r.company_id = j.at("company_id").get<std::string>();
      r.source = j.at("source").get<std::string>();
      r.published_at = parse_timestamp(j.at("published_at").get<std::string>());
      r.score = SentimentScore(j.at("score").get<double>()).value();
      out.push_back(std::move(r));
    } catch (const std::exception& e) {
      throw std::runtime_error(fmt::format("{}:{}: {}", path.string(), line_no, e.what()));
    }
  }
  return out;
}

}  // namespace sentindex::sentiment
