#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sentindex/corpus.hpp"
#include "sentindex/timestamp.hpp"

namespace sentindex::sentiment {

struct ClassProbabilities {
  double negative = 0.0;
  double neutral = 1.0;
  double positive = 0.0;

  static constexpr double kSumTolerance = 1e-6;

  // Throws InvalidProbabilities when a component leaves [0, 1] or the sum is
  // off by more than kSumTolerance.
  void validate() const;
};

class InvalidProbabilities : public std::invalid_argument {
 public:
  explicit InvalidProbabilities(const ClassProbabilities& p);
};

class SentimentScore {
 public:
  SentimentScore() = default;
  explicit SentimentScore(double value);  // throws outside [-1, 1]
  double value() const { return value_; }

 private:
  double value_ = 0.0;
};

enum class PolarityMode {
  winning_class,  // probability of the argmax class, signed by the class
  expectation,    // p_positive - p_negative
};

// Argmax ties resolve towards the later class: positive, then neutral.
SentimentScore polarity_score(const ClassProbabilities& probs,
                              PolarityMode mode = PolarityMode::winning_class);

using Lexicon = std::map<std::string, double, std::less<>>;

// Mean lexicon value s over matched tokens (0 without matches), spread as
// (max(-s,0), 1-|s|, max(s,0)).
ClassProbabilities lexicon_score(std::string_view headline, const Lexicon& lexicon);

class ScoringProvider {
 public:
  virtual ~ScoringProvider() = default;
  virtual ClassProbabilities classify(const corpus::NewsArticle& article) const = 0;
};

class MissingScore : public std::runtime_error {
 public:
  explicit MissingScore(const std::string& article_id);
};

// Lookup of externally computed probabilities by article id.
class PrescoredProvider final : public ScoringProvider {
 public:
  explicit PrescoredProvider(std::unordered_map<std::string, ClassProbabilities> table);
  static PrescoredProvider load(const std::filesystem::path& path);

  ClassProbabilities classify(const corpus::NewsArticle& article) const override;
  std::size_t size() const { return table_.size(); }

 private:
  std::unordered_map<std::string, ClassProbabilities> table_;
};

class LexiconProvider final : public ScoringProvider {
 public:
  // Keys are lowercased; values outside [-1, 1] throw.
  explicit LexiconProvider(Lexicon lexicon);
  static LexiconProvider load(const std::filesystem::path& path);

  ClassProbabilities classify(const corpus::NewsArticle& article) const override;

 private:
  Lexicon lexicon_;
};

struct ScoredArticle {
  std::string id;
  std::string company_id;
  std::string source;
  Timestamp published_at;
  double score = 0.0;
};

std::vector<ScoredArticle> score_articles(const std::vector<corpus::NewsArticle>& articles,
                                          const ScoringProvider& provider,
                                          PolarityMode mode = PolarityMode::winning_class);

void write_scored(const std::filesystem::path& path, const std::vector<ScoredArticle>& records);
std::vector<ScoredArticle> load_scored(const std::filesystem::path& path);

}  // namespace sentindex::sentiment
