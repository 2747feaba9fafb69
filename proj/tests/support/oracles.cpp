#include "oracles.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sentindex::testing {
namespace {

double direct_objective(std::span<const double> w, std::span<const double> s,
                        std::span<const double> p, double delta) {
  double v = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) v += w[i] * s[i] - delta * std::fabs(p[i] - w[i]);
  return v;
}

}  // namespace

OracleSolution brute_force_oracle(std::span<const double> s, std::span<const double> p,
                                  const optimizer::OptimizerConfig& cfg, double step) {
  const std::size_t n = s.size();
  if (n == 0 || n > 4) throw std::invalid_argument("grid oracle supports 1..4 names");
  const double ratio = cfg.cap / step;
  const long points = std::lround(ratio);
  if (std::fabs(ratio - static_cast<double>(points)) > 1e-9) {
    throw std::invalid_argument("grid step must divide cap");
  }
  constexpr double kTol = 1e-9;

  OracleSolution best;
  best.objective = -std::numeric_limits<double>::infinity();
  std::vector<long> idx(n, 0);
  std::vector<double> w(n, 0.0);
  // Odometer over the first n-1 coordinates; the last one only takes grid
  // values that keep the sum inside the band.
  while (true) {
    double partial = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      w[i] = static_cast<double>(idx[i]) * step;
      partial += w[i];
    }
    const long k_lo = std::max(0L, static_cast<long>(std::ceil((cfg.budget_lo - partial) / step - kTol)));
    const long k_hi = std::min(points, static_cast<long>(std::floor((cfg.budget_hi - partial) / step + kTol)));
    for (long k = k_lo; k <= k_hi; ++k) {
      w[n - 1] = static_cast<double>(k) * step;
      const double total = partial + w[n - 1];
      if (total < cfg.budget_lo - kTol || total > cfg.budget_hi + kTol) continue;
      const double v = direct_objective(w, s, p, cfg.delta);
      if (v > best.objective) {
        best.objective = v;
        best.weights = w;
      }
    }
    std::size_t d = 0;
    while (d + 1 < n && idx[d] == points) idx[d++] = 0;
    if (d + 1 >= n) break;
    ++idx[d];
  }
  if (best.weights.empty()) throw std::runtime_error("grid oracle found no feasible grid point");
  return best;
}

std::vector<double> simplex_maximize(const std::vector<std::vector<double>>& A,
                                     const std::vector<double>& b, const std::vector<double>& c) {
  constexpr double eps = 1e-11;
  const std::size_t m = A.size();
  const std::size_t nv = c.size();
  std::size_t n_art = 0;
  for (double bi : b) n_art += bi < 0 ? 1 : 0;
  const std::size_t art0 = nv + m;
  const std::size_t cols = nv + m + n_art;  // + RHS column at index cols

  std::vector<std::vector<double>> T(m + 1, std::vector<double>(cols + 1, 0.0));
  std::vector<std::size_t> basis(m);
  std::size_t next_art = art0;
  for (std::size_t i = 0; i < m; ++i) {
    const double sign = b[i] < 0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < nv; ++j) T[i][j] = sign * A[i][j];
    T[i][nv + i] = sign;  // slack (+1) or surplus (-1)
    T[i][cols] = sign * b[i];
    if (b[i] < 0) {
      T[i][next_art] = 1.0;
      basis[i] = next_art++;
    } else {
      basis[i] = nv + i;
    }
  }

  auto pivot = [&](std::size_t r, std::size_t col) {
    const double pv = T[r][col];
    for (double& x : T[r]) x /= pv;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == r || T[i][col] == 0.0) continue;
      const double f = T[i][col];
      for (std::size_t j = 0; j <= cols; ++j) T[i][j] -= f * T[r][j];
    }
    basis[r] = col;
  };
  // Objective row holds reduced costs of "z - c.x"; optimal when none < 0.
  auto iterate = [&](std::size_t allowed_cols) {
    for (int guard = 0; guard < 100000; ++guard) {
      std::size_t enter = allowed_cols;
      for (std::size_t j = 0; j < allowed_cols; ++j) {
        if (T[m][j] < -eps) {
          enter = j;
          break;
        }
      }
      if (enter == allowed_cols) return;
      std::size_t leave = m;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m; ++i) {
        if (T[i][enter] > eps) {
          const double ratio = T[i][cols] / T[i][enter];
          if (ratio < best_ratio - eps || (std::fabs(ratio - best_ratio) <= eps && leave < m && basis[i] < basis[leave])) {
            best_ratio = ratio;
            leave = i;
          }
        }
      }
      if (leave == m) throw std::runtime_error("LP is unbounded");
      pivot(leave, enter);
    }
    throw std::runtime_error("simplex iteration limit");
  };

  if (n_art > 0) {
    for (std::size_t j = art0; j < cols; ++j) T[m][j] = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (basis[i] >= art0) {
        for (std::size_t j = 0; j <= cols; ++j) T[m][j] -= T[i][j];
      }
    }
    iterate(cols);
    if (T[m][cols] < -1e-9) throw std::runtime_error("LP is infeasible");
    for (std::size_t i = 0; i < m; ++i) {
      if (basis[i] < art0) continue;
      for (std::size_t j = 0; j < art0; ++j) {
        if (std::fabs(T[i][j]) > eps) {
          pivot(i, j);
          break;
        }
      }
    }
  }

  std::fill(T[m].begin(), T[m].end(), 0.0);
  for (std::size_t j = 0; j < nv; ++j) T[m][j] = -c[j];
  for (std::size_t i = 0; i < m; ++i) {
    const double f = T[m][basis[i]];
    if (f == 0.0) continue;
    for (std::size_t j = 0; j <= cols; ++j) T[m][j] -= f * T[i][j];
  }
  iterate(art0);

  std::vector<double> x(nv, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] < nv) x[basis[i]] = T[i][cols];
  }
  return x;
}

OracleSolution lp_oracle(std::span<const double> s, std::span<const double> p,
                         const optimizer::OptimizerConfig& cfg) {
  const std::size_t n = s.size();
  const std::size_t nv = 2 * n;
  std::vector<std::vector<double>> A;
  std::vector<double> b;
  auto row = [&] { return std::vector<double>(nv, 0.0); };
  for (std::size_t i = 0; i < n; ++i) {
    auto r = row();
    r[i] = 1.0;
    A.push_back(r);
    b.push_back(cfg.cap);
    r = row();
    r[i] = -1.0;
    r[n + i] = -1.0;
    A.push_back(r);
    b.push_back(-p[i]);
    r = row();
    r[i] = 1.0;
    r[n + i] = -1.0;
    A.push_back(r);
    b.push_back(p[i]);
  }
  auto sum = row();
  for (std::size_t i = 0; i < n; ++i) sum[i] = 1.0;
  A.push_back(sum);
  b.push_back(cfg.budget_hi);
  for (auto& x : sum) x = -x;
  A.push_back(sum);
  b.push_back(-cfg.budget_lo);

  std::vector<double> c(nv, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    c[i] = s[i];
    c[n + i] = -cfg.delta;
  }
  const auto x = simplex_maximize(A, b, c);
  OracleSolution sol;
  sol.weights.assign(x.begin(), x.begin() + static_cast<long>(n));
  sol.objective = direct_objective(sol.weights, s, p, cfg.delta);
  return sol;
}

}  // namespace sentindex::testing
