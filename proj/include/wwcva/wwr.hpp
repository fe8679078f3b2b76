#pragma once

// Worst-case (wrong-way-risk) CVA.
//
// Per stopping interval s the worst case places the marginal default
// probability q_s on the highest-exposure scenarios, so its value is
// q_s * ES(v_s, q_s), with ES the expected shortfall of the top-q_s tail.
// Defaults can happen on any of D_s days in the interval, which moves the
// relevant quantile to q_s / D_s. A finite default-probability volatility
// (fraction nu of the maximum) is handled by pairing a two-level conditional DP
// with the exposure distribution sorted largest to largest. A Bermudan payer
// at strike K caps exposure at K; the hedged cost is capped CVA + B(K),
// minimized over K.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "wwcva/credit.hpp"
#include "wwcva/errors.hpp"
#include "wwcva/exposure.hpp"
#include "wwcva/golden.hpp"
#include "wwcva/market.hpp"

namespace wwcva {

namespace detail {

// Scenario indices by descending value; ties keep index order.
inline std::vector<std::size_t> descending_order(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  return order;
}

inline void check_distribution(std::span<const double> values, std::span<const double> weights) {
  if (values.size() != weights.size() || values.empty())
    throw DomainError("values and weights must be non-empty and of equal length");
}

}  // namespace detail

// Joint default/scenario probabilities of the worst case: fill the top of the
// distribution with mass q, splitting the boundary scenario. Satisfies
// 0 <= p_j <= w_j and sum p_j = min(q, sum w).
inline std::vector<double> tail_assignment(std::span<const double> values,
                                           std::span<const double> weights, double q) {
  detail::check_distribution(values, weights);
  if (!(q > 0.0)) throw DomainError("tail mass must be positive");
  std::vector<double> p(values.size(), 0.0);
  double remaining = q;
  for (std::size_t i : detail::descending_order(values)) {
    if (remaining <= 0.0) break;
    const double take = std::min(weights[i], remaining);
    p[i] = take;
    remaining -= take;
  }
  return p;
}

inline double expected_shortfall(std::span<const double> values, std::span<const double> weights,
                                 double q) {
  const std::vector<double> p = tail_assignment(values, weights, q);
  double mass = 0.0, sum = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    mass += p[j];
    sum += p[j] * values[j];
  }
  // q beyond the total mass clamps to the full mean.
  return sum / std::min(q, mass);
}

inline double distribution_mean(std::span<const double> values, std::span<const double> weights) {
  detail::check_distribution(values, weights);
  double m = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j) m += weights[j] * values[j];
  return m;
}

// Naive worst case over one interval at daily granularity (pre-recovery).
inline double wc_interval(std::span<const double> values, std::span<const double> weights,
                          double q, int days) {
  if (days < 1) throw DomainError("granularity divisor must be at least 1");
  if (q < 0.0) throw DomainError("marginal default probability must be non-negative");
  if (q == 0.0) return 0.0;
  return q * expected_shortfall(values, weights, q / days);
}

// Finite-volatility worst case over one interval (pre-recovery): on each day
// the high DP level sits on the top q/D exposure tail, the low level on the
// rest. nu = 1 recovers wc_interval, nu = 0 the independent (no-WWR) value.
inline double fv_interval(std::span<const double> values, std::span<const double> weights,
                          double q, double nu, int days) {
  if (days < 1) throw DomainError("granularity divisor must be at least 1");
  if (!(nu >= 0.0) || !(nu <= 1.0)) throw DomainError("nu must lie in [0, 1]");
  if (q < 0.0) throw DomainError("marginal default probability must be non-negative");
  if (q == 0.0) return 0.0;
  const double q_day = q / days;
  const DPVolParam dp = two_point_dp(q_day, nu);
  const double es = expected_shortfall(values, weights, q_day);
  const double mean = distribution_mean(values, weights);
  // Sum over `days` identical days of p_hi * tail + p_lo * (mean - tail).
  return q * (dp.p_hi * es) + dp.p_lo * (days * mean - q * es);
}

// Joint default/scenario probabilities for one day of the finite-volatility
// worst case: p_hi on the top-q tail, p_lo elsewhere. Sums to q and stays in
// [0, w_j] whenever the weights sum to one.
inline std::vector<double> implied_day_assignment(std::span<const double> values,
                                                  std::span<const double> weights, double q,
                                                  double nu) {
  const DPVolParam dp = two_point_dp(q, nu);
  std::vector<double> p = tail_assignment(values, weights, q);
  for (std::size_t j = 0; j < p.size(); ++j) p[j] = dp.p_hi * p[j] + dp.p_lo * (weights[j] - p[j]);
  return p;
}

// Sorted assignment for arbitrary per-scenario default probabilities: the
// scenario with the largest weighted exposure w_j v_j receives the largest DP
// level, and so on down. pairing[j] is the DP index given to scenario j.
struct Assignment {
  double objective = 0.0;
  std::vector<std::size_t> pairing;
};

inline Assignment sorted_assignment(std::span<const double> values, std::span<const double> weights,
                                    std::span<const double> dp_levels) {
  detail::check_distribution(values, weights);
  if (dp_levels.size() != values.size())
    throw DomainError("one default probability level per scenario is required");
  std::vector<double> score(values.size());
  for (std::size_t j = 0; j < values.size(); ++j) score[j] = weights[j] * values[j];
  const auto by_score = detail::descending_order(score);
  const auto by_dp = detail::descending_order(dp_levels);
  Assignment a;
  a.pairing.resize(values.size());
  for (std::size_t r = 0; r < values.size(); ++r) {
    a.pairing[by_score[r]] = by_dp[r];
    a.objective += score[by_score[r]] * dp_levels[by_dp[r]];
  }
  return a;
}

struct WwrProblem {
  ExposureProfile profile;
  DefaultMarginals marginals;
  double recovery = 0.4;
  double cds_spread = 0.0;
  double fixed_rate = 0.0;
  double atm_rate = 0.0;     // par swap rate today
  double strike_upper = 0.0;  // top of the strike search range

  bool exposure_is_zero() const {
    for (const auto& d : profile.dates)
      for (double v : d.values)
        if (v > 0.0) return false;
    return true;
  }
};

inline WwrProblem make_problem(const RatesMarket& mkt, const SwapSpec& swap,
                               const CreditSpec& credit, const DensityOptions& density = {},
                               int days_per_quarter = kDefaultDaysPerQuarter) {
  swap.validate();
  credit.validate();
  WwrProblem p;
  p.profile = build_exposure_profile(mkt, swap, density);
  const auto grid = stopping_grid(swap);
  p.marginals = marginals(hazard_from_cds(credit), grid, days_per_quarter);
  p.recovery = credit.recovery;
  p.cds_spread = credit.cds_spread;
  p.fixed_rate = swap.fixed_rate;
  p.atm_rate = forward_swap_rate(mkt.curve, 0.0, swap.maturity, swap.frequency);
  p.strike_upper = p.atm_rate + density.range_sd * mkt.normal_vol * std::sqrt(swap.maturity);
  return p;
}

// (1 - R) * sum_s fv_interval(exposure at s capped at K, q_s, nu, D_s).
inline double cva_total(const ExposureProfile& profile, const DefaultMarginals& marginals,
                        double nu, double recovery, std::optional<double> cap = std::nullopt) {
  if (profile.dates.size() != marginals.size())
    throw ConfigError("exposure dates and default intervals differ in number");
  if (!(recovery >= 0.0) || !(recovery <= 1.0)) throw DomainError("recovery must lie in [0, 1]");
  double total = 0.0;
  for (std::size_t s = 0; s < marginals.size(); ++s) {
    const auto& dist = profile.dates[s];
    if (std::abs(dist.time - marginals.times[s]) > 1e-9)
      throw ConfigError("exposure date and default interval end do not align");
    const std::vector<double> values = dist.capped_values(cap);
    total += fv_interval(values, dist.weights, marginals.q[s], nu, marginals.days[s]);
  }
  return (1.0 - recovery) * total;
}

inline double cva_total(const WwrProblem& p, double nu, std::optional<double> cap = std::nullopt) {
  return cva_total(p.profile, p.marginals, nu, p.recovery, cap);
}

struct StrikeSearch {
  int grid_points = 25;
  double tolerance = 1e-4;  // 1bp
};

struct StrikePoint {
  double strike = 0.0;
  double capped_cva = 0.0;
  double hedge_cost = 0.0;
  double total = 0.0;
  bool refined = false;  // from the local refinement rather than the coarse grid
};

struct CvaReport {
  double cds_spread = 0.0;
  double nu = 0.0;
  double unhedged = 0.0;  // K -> infinity: no option bought
  double no_wwr = 0.0;
  std::vector<StrikePoint> curve;  // every evaluated strike, ascending
  double optimal_strike = std::numeric_limits<double>::quiet_NaN();
  double optimal_total = 0.0;  // min(best hedged total, unhedged)
  bool hedge_beats_unhedged = false;
};

using HedgeCostFn = std::function<double(double)>;

// Neighbours of the best grid point; the bracket collapses onto an end
// interval when the best point is an endpoint.
inline std::pair<std::size_t, std::size_t> refinement_bracket(std::span<const double> strikes,
                                                              std::span<const double> totals) {
  if (strikes.size() != totals.size() || strikes.size() < 2)
    throw DomainError("refinement needs at least two grid evaluations");
  const auto best = static_cast<std::size_t>(
      std::min_element(totals.begin(), totals.end()) - totals.begin());
  const std::size_t lo = best == 0 ? 0 : best - 1;
  const std::size_t hi = std::min(best + 1, strikes.size() - 1);
  return {lo, hi};
}

inline std::vector<double> strike_grid(double lower, double upper, int points) {
  if (points < 2) throw DomainError("strike grid needs at least two points");
  if (!(upper > lower)) throw DomainError("strike grid upper bound must exceed the lower bound");
  std::vector<double> k(points);
  for (int i = 0; i < points; ++i) k[i] = lower + (upper - lower) * i / (points - 1);
  return k;
}

inline CvaReport optimize_strike(const WwrProblem& p, double nu, const HedgeCostFn& hedge_cost,
                                 const StrikeSearch& search = {}) {
  CvaReport r;
  r.cds_spread = p.cds_spread;
  r.nu = nu;
  const auto grid = strike_grid(p.fixed_rate, p.strike_upper, search.grid_points);
  if (p.exposure_is_zero()) {
    r.optimal_strike = grid.back();
    return r;
  }
  r.unhedged = cva_total(p, nu);
  r.no_wwr = cva_total(p, 0.0);

  auto evaluate = [&](double k, bool refined) {
    StrikePoint pt{k, cva_total(p, nu, k), hedge_cost(k), 0.0, refined};
    pt.total = pt.capped_cva + pt.hedge_cost;
    r.curve.push_back(pt);
    return pt.total;
  };

  std::vector<double> totals;
  for (double k : grid) totals.push_back(evaluate(k, false));
  const auto [lo, hi] = refinement_bracket(grid, totals);
  if (hi > lo)
    golden_section_minimize([&](double k) { return evaluate(k, true); }, grid[lo], grid[hi],
                            search.tolerance);

  std::stable_sort(r.curve.begin(), r.curve.end(),
                   [](const StrikePoint& a, const StrikePoint& b) { return a.strike < b.strike; });
  const auto best = std::min_element(
      r.curve.begin(), r.curve.end(),
      [](const StrikePoint& a, const StrikePoint& b) { return a.total < b.total; });
  r.optimal_strike = best->strike;
  r.hedge_beats_unhedged = best->total < r.unhedged;
  r.optimal_total = std::min(best->total, r.unhedged);
  return r;
}

struct Savings {
  double fraction = 0.0;
  bool defined = false;
};

inline Savings savings(const CvaReport& r) {
  if (!(r.unhedged > 0.0)) return {0.0, false};
  return {std::clamp(1.0 - r.optimal_total / r.unhedged, 0.0, 1.0), true};
}

}  // namespace wwcva
