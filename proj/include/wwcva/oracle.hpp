#pragma once

// Brute-force verifiers for the worst-case engine. Small instances only:
//  - lp_max solves max sum p_j v_j s.t. 0 <= p_j <= w_j, sum p_j = q both by a
//    fractional-knapsack fill and by a generic dense two-phase simplex;
//  - best_permutation enumerates every DP-to-scenario pairing.
// Nothing here calls into the engine's own tail or sorting routines.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "wwcva/errors.hpp"

namespace wwcva::oracle {

struct SmallInstance {
  std::vector<double> values;
  std::vector<double> weights;
  double q = 0.0;
  std::vector<double> dp_levels;  // optional, one per scenario
};

struct LpResult {
  double objective = 0.0;
  std::vector<double> assignment;
};

// maximize c.x subject to A x = b, x >= 0, with b >= 0. Two-phase tableau
// simplex with Bland's rule.
inline LpResult simplex_maximize(const std::vector<std::vector<double>>& A,
                                 const std::vector<double>& b, const std::vector<double>& c) {
  const std::size_t m = A.size();
  const std::size_t n = c.size();
  const std::size_t cols = n + m + 1;  // structural | artificial | rhs
  const std::size_t rhs = n + m;
  constexpr double eps = 1e-13;
  std::vector<std::vector<double>> t(m, std::vector<double>(cols, 0.0));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (b[i] < 0.0) throw DomainError("simplex expects a non-negative right-hand side");
    for (std::size_t j = 0; j < n; ++j) t[i][j] = A[i][j];
    t[i][n + i] = 1.0;
    t[i][rhs] = b[i];
    basis[i] = n + i;
  }

  auto pivot = [&](std::size_t row, std::size_t col) {
    const double pv = t[row][col];
    for (double& x : t[row]) x /= pv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == row || t[i][col] == 0.0) continue;
      const double f = t[i][col];
      for (std::size_t j = 0; j < cols; ++j) t[i][j] -= f * t[row][j];
    }
    basis[row] = col;
  };

  // Reduced cost z_j - d_j for objective d; returns false when optimal.
  auto run = [&](const std::vector<double>& d, std::size_t allowed_cols) {
    for (int iter = 0; iter < 10000; ++iter) {
      std::size_t enter = cols;
      for (std::size_t j = 0; j < allowed_cols && enter == cols; ++j) {
        double r = -d[j];
        for (std::size_t i = 0; i < m; ++i) r += d[basis[i]] * t[i][j];
        if (r < -eps) enter = j;
      }
      if (enter == cols) return;
      std::size_t leave = m;
      double best = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        if (t[i][enter] <= eps) continue;
        const double ratio = t[i][rhs] / t[i][enter];
        if (leave == m || ratio < best - eps ||
            (std::abs(ratio - best) <= eps && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == m) throw DomainError("linear program is unbounded");
      pivot(leave, enter);
    }
    throw DomainError("simplex iteration limit reached");
  };

  std::vector<double> phase1(n + m, 0.0);
  for (std::size_t i = 0; i < m; ++i) phase1[n + i] = -1.0;
  run(phase1, n + m);
  double infeasibility = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] >= n) infeasibility += t[i][rhs];
  if (infeasibility > 1e-12) throw InfeasibleError("linear program is infeasible");
  // Drive zero-level artificials out of the basis where possible.
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] < n) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(t[i][j]) > eps) {
        pivot(i, j);
        break;
      }
    }
  }

  std::vector<double> phase2(n + m, 0.0);
  std::copy(c.begin(), c.end(), phase2.begin());
  run(phase2, n);

  LpResult out;
  out.assignment.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) out.assignment[basis[i]] = t[i][rhs];
  for (std::size_t j = 0; j < n; ++j) out.objective += c[j] * out.assignment[j];
  return out;
}

namespace detail {

inline void check_instance(std::span<const double> values, std::span<const double> weights,
                           double q) {
  if (values.size() != weights.size() || values.empty())
    throw DomainError("values and weights must be non-empty and of equal length");
  if (!(q > 0.0)) throw DomainError("tail mass must be positive");
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw DomainError("weights must be non-negative");
    total += w;
  }
  if (q > total + 1e-15) throw InfeasibleError("tail mass exceeds total scenario weight");
}

}  // namespace detail

// Fractional knapsack: take scenarios in order of value until q is used up.
inline LpResult lp_greedy(std::span<const double> values, std::span<const double> weights, double q) {
  detail::check_instance(values, weights, q);
  std::vector<std::size_t> idx(values.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  LpResult r;
  r.assignment.assign(values.size(), 0.0);
  double left = q;
  for (std::size_t i : idx) {
    const double take = std::min(left, weights[i]);
    r.assignment[i] = take;
    r.objective += take * values[i];
    left -= take;
    if (left <= 0.0) break;
  }
  return r;
}

inline LpResult lp_simplex(std::span<const double> values, std::span<const double> weights, double q) {
  detail::check_instance(values, weights, q);
  const std::size_t n = values.size();
  // Variables: p_0..p_{n-1}, slack_0..slack_{n-1}.
  std::vector<std::vector<double>> A(n + 1, std::vector<double>(2 * n, 0.0));
  std::vector<double> b(n + 1);
  for (std::size_t j = 0; j < n; ++j) {
    A[j][j] = 1.0;
    A[j][n + j] = 1.0;
    b[j] = weights[j];
    A[n][j] = 1.0;
  }
  b[n] = q;
  std::vector<double> c(2 * n, 0.0);
  for (std::size_t j = 0; j < n; ++j) c[j] = values[j];
  LpResult full = simplex_maximize(A, b, c);
  full.assignment.resize(n);
  return full;
}

struct LpComparison {
  double greedy = 0.0;
  double simplex = 0.0;
  std::vector<double> assignment;  // greedy solution
};

inline LpComparison lp_max(std::span<const double> values, std::span<const double> weights, double q) {
  const LpResult g = lp_greedy(values, weights, q);
  const LpResult s = lp_simplex(values, weights, q);
  return {g.objective, s.objective, g.assignment};
}

struct PermutationResult {
  double objective = 0.0;
  std::vector<std::size_t> pairing;  // pairing[j]: DP level given to scenario j
};

// Exhaustive search over assignments of DP levels to scenarios maximizing
// sum_j w_j * dp[pairing[j]] * v_j.
inline PermutationResult best_permutation(std::span<const double> values,
                                          std::span<const double> dp_levels,
                                          std::span<const double> weights) {
  const std::size_t n = values.size();
  if (n == 0 || dp_levels.size() != n || weights.size() != n)
    throw DomainError("values, DP levels and weights must have equal non-zero length");
  if (n > 7) throw DomainError("exhaustive permutation search is limited to 7 scenarios");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  PermutationResult best{-1.0, perm};
  do {
    double obj = 0.0;
    for (std::size_t j = 0; j < n; ++j) obj += weights[j] * dp_levels[perm[j]] * values[j];
    if (obj > best.objective) best = {obj, perm};
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

inline double pairing_objective(std::span<const double> values, std::span<const double> dp_levels,
                                std::span<const double> weights,
                                std::span<const std::size_t> pairing) {
  double obj = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j) obj += weights[j] * dp_levels[pairing[j]] * values[j];
  return obj;
}

// Lognormal values, Dirichlet(1,...,1) weights, q ~ U(0, 1], DP levels ~ U(0, 1).
inline std::vector<SmallInstance> random_instances(std::uint64_t seed, std::size_t count,
                                                   std::size_t max_n) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> size_dist(2, max_n);
  std::lognormal_distribution<double> value_dist(0.0, 1.0);
  std::exponential_distribution<double> gamma1(1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<SmallInstance> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    SmallInstance inst;
    const std::size_t n = size_dist(rng);
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      inst.values.push_back(value_dist(rng));
      inst.weights.push_back(gamma1(rng));
      total += inst.weights.back();
      inst.dp_levels.push_back(unit(rng));
    }
    for (double& w : inst.weights) w /= total;
    inst.q = 1.0 - unit(rng);  // (0, 1]
    out.push_back(std::move(inst));
  }
  return out;
}

// FNV-1a over the raw bytes of every instance field.
inline std::string digest(const std::vector<SmallInstance>& instances) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&](double x) {
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &x, sizeof(double));
    for (unsigned char c : bytes) {
      h ^= c;
      h *= 1099511628211ULL;
    }
  };
  for (const auto& inst : instances) {
    for (double v : inst.values) mix(v);
    for (double w : inst.weights) mix(w);
    for (double d : inst.dp_levels) mix(d);
    mix(inst.q);
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace wwcva::oracle
