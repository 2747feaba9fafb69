#pragma once

// Test-only reference solvers for the daily weight problem. Neither shares
// code with the greedy solver they check.

#include <span>
#include <vector>

#include "sentindex/optimizer.hpp"

namespace sentindex::testing {

struct OracleSolution {
  std::vector<double> weights;
  double objective = 0.0;
};

// Exhaustive search over the weight grid {0, step, 2 step, ..., cap}^n
// restricted to the budget band. Refuses n > 4; step must divide cap.
OracleSolution brute_force_oracle(std::span<const double> sentiments, std::span<const double> prior,
                                  const optimizer::OptimizerConfig& cfg, double grid_step);

// maximize c.x  s.t.  A x <= b, x >= 0  (b may be negative). Two-phase dense
// tableau simplex with Bland's rule. Throws std::runtime_error when
// infeasible or unbounded.
std::vector<double> simplex_maximize(const std::vector<std::vector<double>>& A,
                                     const std::vector<double>& b, const std::vector<double>& c);

// The weight problem as an LP in (w, t) with t_i >= |p_i - w_i|.
OracleSolution lp_oracle(std::span<const double> sentiments, std::span<const double> prior,
                         const optimizer::OptimizerConfig& cfg);

}  // namespace sentindex::testing
