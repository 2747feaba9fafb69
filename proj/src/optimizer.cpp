#include "sentindex/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <fmt/format.h>

namespace sentindex::optimizer {
namespace {

// Rounding allowance on the running total: a piece that overshoots the
// remaining budget by no more than this is taken whole, and a remaining
// budget below it counts as exhausted.
constexpr double kFillSlack = 1e-13;

void require_same_keys(const std::map<std::string, double>& a, const std::map<std::string, double>& b,
                       const char* what) {
  const bool same = a.size() == b.size() &&
                    std::equal(a.begin(), a.end(), b.begin(),
                               [](const auto& x, const auto& y) { return x.first == y.first; });
  if (!same) throw std::invalid_argument(fmt::format("{}: company key sets differ", what));
}

std::vector<double> values_of(const std::map<std::string, double>& m) {
  std::vector<double> v;
  v.reserve(m.size());
  for (const auto& [k, x] : m) v.push_back(x);
  return v;
}

}  // namespace

InfeasibleProblem::InfeasibleProblem(std::size_t universe_size, std::size_t required_size,
                                     double cap, double budget_lo)
    : std::invalid_argument(fmt::format(
          "infeasible: {} names x cap {} cannot reach budget_lo {}; need at least {} names",
          universe_size, cap, budget_lo, required_size)),
      required_(required_size) {}

void OptimizerConfig::validate(std::size_t universe_size) const {
  if (!(std::isfinite(delta) && delta >= 0.0)) {
    throw std::invalid_argument(fmt::format("delta must be finite and >= 0, got {}", delta));
  }
  if (!(cap > 0.0 && cap <= 1.0)) throw std::invalid_argument(fmt::format("cap must lie in (0, 1], got {}", cap));
  if (!(budget_lo >= 0.0 && budget_lo <= budget_hi && budget_hi <= 1.0)) {
    throw std::invalid_argument(
        fmt::format("need 0 <= budget_lo <= budget_hi <= 1, got [{}, {}]", budget_lo, budget_hi));
  }
  if (!(trade_epsilon >= 0.0)) throw std::invalid_argument("trade_epsilon must be >= 0");
  if (static_cast<double>(universe_size) * cap < budget_lo) {
    const auto required = static_cast<std::size_t>(std::ceil(budget_lo / cap - 1e-12));
    throw InfeasibleProblem(universe_size, required, cap, budget_lo);
  }
}

OptimizerConfig optimizer_config_from_json(const nlohmann::json& j) {
  OptimizerConfig cfg;
  cfg.delta = j.value("delta", cfg.delta);
  cfg.cap = j.value("cap", cfg.cap);
  cfg.budget_lo = j.value("budget_lo", cfg.budget_lo);
  cfg.budget_hi = j.value("budget_hi", cfg.budget_hi);
  cfg.trade_epsilon = j.value("trade_epsilon", cfg.trade_epsilon);
  return cfg;
}

OptimizerConfig load_optimizer_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open optimizer config '{}'", path.string()));
  return optimizer_config_from_json(nlohmann::json::parse(in));
}

std::vector<Segment> build_segments(std::span<const double> sentiments,
                                    std::span<const double> prior, const OptimizerConfig& cfg) {
  if (sentiments.size() != prior.size()) {
    throw std::invalid_argument("sentiments and prior differ in length");
  }
  std::vector<Segment> segments;
  segments.reserve(2 * sentiments.size());
  for (std::size_t i = 0; i < sentiments.size(); ++i) {
    const double kink = std::min(prior[i], cfg.cap);
    if (kink > 0.0) segments.push_back({i, 0.0, kink, sentiments[i] + cfg.delta});
    if (cfg.cap > kink) segments.push_back({i, kink, cfg.cap, sentiments[i] - cfg.delta});
  }
  std::sort(segments.begin(), segments.end(), [](const Segment& a, const Segment& b) {
    if (a.slope != b.slope) return a.slope > b.slope;
    if (a.company != b.company) return a.company < b.company;
    return a.lower < b.lower;
  });
  return segments;
}

std::vector<double> optimize_weights(std::span<const double> sentiments,
                                     std::span<const double> prior, const OptimizerConfig& cfg) {
  cfg.validate(sentiments.size());
  if (sentiments.size() != prior.size()) {
    throw std::invalid_argument("sentiments and prior differ in length");
  }
  for (std::size_t i = 0; i < sentiments.size(); ++i) {
    if (!std::isfinite(sentiments[i])) {
      throw std::invalid_argument(fmt::format("sentiment {} is not finite", i));
    }
    if (!(prior[i] >= 0.0) || !std::isfinite(prior[i])) {
      throw std::invalid_argument(fmt::format("prior weight {} is negative or not finite: {}", i, prior[i]));
    }
  }

  std::vector<double> weights(sentiments.size(), 0.0);
  double total = 0.0;
  for (const Segment& seg : build_segments(sentiments, prior, cfg)) {
    const double limit = seg.slope > 0.0 ? cfg.budget_hi : cfg.budget_lo;
    const double room = limit - total;
    if (room <= kFillSlack) break;
    const double length = seg.upper - seg.lower;
    if (length <= room + kFillSlack) {
      weights[seg.company] = seg.upper;
      total += length;
    } else {
      weights[seg.company] = seg.lower + room;
      break;
    }
  }
  return weights;
}

double objective_value(std::span<const double> weights, std::span<const double> sentiments,
                       std::span<const double> prior, double delta) {
  if (weights.size() != sentiments.size() || weights.size() != prior.size()) {
    throw std::invalid_argument("objective_value: inputs differ in length");
  }
  double value = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    value += weights[i] * sentiments[i] - delta * std::abs(prior[i] - weights[i]);
  }
  return value;
}

WeightVector optimize_weights(const SentimentVector& sentiments, const WeightVector& prior,
                              const OptimizerConfig& cfg) {
  require_same_keys(sentiments, prior, "optimize_weights");
  const auto s = values_of(sentiments);
  const auto p = values_of(prior);
  const auto w = optimize_weights(s, p, cfg);
  WeightVector out;
  std::size_t i = 0;
  for (const auto& [company, unused] : sentiments) out.emplace_hint(out.end(), company, w[i++]);
  return out;
}

double objective_value(const WeightVector& weights, const SentimentVector& sentiments,
                       const WeightVector& prior, double delta) {
  require_same_keys(weights, sentiments, "objective_value");
  require_same_keys(weights, prior, "objective_value");
  return objective_value(values_of(weights), values_of(sentiments), values_of(prior), delta);
}

std::vector<Trade> extract_trades(std::span<const double> target, std::span<const double> prior,
                                  std::span<const std::string> companies, double epsilon) {
  if (target.size() != prior.size() || target.size() != companies.size()) {
    throw std::invalid_argument("extract_trades: inputs differ in length");
  }
  std::vector<Trade> trades;
  for (std::size_t i = 0; i < target.size(); ++i) {
    const double d = target[i] - prior[i];
    if (std::abs(d) > epsilon) trades.push_back({companies[i], d});
  }
  return trades;
}

std::vector<Trade> extract_trades(const WeightVector& target, const WeightVector& prior,
                                  double epsilon) {
  require_same_keys(target, prior, "extract_trades");
  std::vector<std::string> names;
  for (const auto& [k, v] : target) names.push_back(k);
  return extract_trades(values_of(target), values_of(prior), names, epsilon);
}

}  // namespace sentindex::optimizer
