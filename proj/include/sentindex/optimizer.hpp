#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace sentindex::optimizer {

/// Daily weight problem
///
///   maximize   sum_i  w_i s_i - delta |p_i - w_i|
///   subject to 0 <= w_i <= cap,  budget_lo <= sum_i w_i <= budget_hi
///
/// where p is the (possibly drifted, possibly infeasible) prior. Each term is
/// concave and piecewise linear in w_i with a single kink at p_i: slope
/// s_i + delta on [0, p_i] and s_i - delta on [p_i, cap]. When p_i > cap the
/// whole box lies left of the kink, so the term is (s_i + delta) w_i plus a
/// constant and clipping p_i to cap leaves the maximizer unchanged.
///
/// The problem is therefore a separable concave resource allocation with one
/// budget interval. Sorting all pieces by slope and filling them in that
/// order yields, for every budget B, a maximizer of the objective restricted
/// to sum w = B; the best B is reached by filling up to budget_lo
/// unconditionally and then only while the current slope is positive, up to
/// budget_hi. Concavity makes the lower piece of a company precede its upper
/// piece in the global order, so the fill never leaves a gap.
struct OptimizerConfig {
  double delta = 1.0;
  double cap = 0.10;
  double budget_lo = 0.99;
  double budget_hi = 0.999;
  double trade_epsilon = 1e-6;

  // Throws std::invalid_argument for out-of-range parameters and
  // InfeasibleProblem when universe_size * cap < budget_lo.
  void validate(std::size_t universe_size) const;
};

OptimizerConfig optimizer_config_from_json(const nlohmann::json& j);
OptimizerConfig load_optimizer_config(const std::filesystem::path& path);

class InfeasibleProblem : public std::invalid_argument {
 public:
  InfeasibleProblem(std::size_t universe_size, std::size_t required_size, double cap,
                    double budget_lo);
  std::size_t required_universe_size() const { return required_; }

 private:
  std::size_t required_;
};

struct Segment {
  std::size_t company = 0;  // index into the input spans
  double lower = 0.0;
  double upper = 0.0;
  double slope = 0.0;
};

// Pieces of every company's objective term, in fill order: slope descending,
// then company index, then lower bound. Zero-length pieces are omitted.
std::vector<Segment> build_segments(std::span<const double> sentiments,
                                    std::span<const double> prior, const OptimizerConfig& cfg);

// Index i of each span refers to the same company; ties resolve towards the
// smaller index. Rejects non-finite sentiments and negative priors.
std::vector<double> optimize_weights(std::span<const double> sentiments,
                                     std::span<const double> prior, const OptimizerConfig& cfg);

double objective_value(std::span<const double> weights, std::span<const double> sentiments,
                       std::span<const double> prior, double delta);

using WeightVector = std::map<std::string, double>;
using SentimentVector = std::map<std::string, double>;

// Keyed forms; the key sets of all arguments must match.
WeightVector optimize_weights(const SentimentVector& sentiments, const WeightVector& prior,
                              const OptimizerConfig& cfg);
double objective_value(const WeightVector& weights, const SentimentVector& sentiments,
                       const WeightVector& prior, double delta);

struct Trade {
  std::string company;
  double delta_weight = 0.0;
};

// One trade per company whose weight moves by more than epsilon.
std::vector<Trade> extract_trades(std::span<const double> target, std::span<const double> prior,
                                  std::span<const std::string> companies, double epsilon);
std::vector<Trade> extract_trades(const WeightVector& target, const WeightVector& prior,
                                  double epsilon);

}  // namespace sentindex::optimizer
