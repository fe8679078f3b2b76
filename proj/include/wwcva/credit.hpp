#pragma once

// Flat-hazard counterparty credit: marginal default probabilities per stopping
// interval, the daily sub-granularity divisor, and the two-level conditional
// default-probability (DP) parametrization.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "wwcva/errors.hpp"

namespace wwcva {

struct CreditSpec {
  double cds_spread = 0.0;  // decimal, e.g. 0.01 for 100bp
  double recovery = 0.4;

  void validate() const {
    if (cds_spread < 0.0) throw DomainError("CDS spread must be non-negative");
    if (!(recovery >= 0.0) || !(recovery < 1.0)) throw DomainError("recovery must lie in [0, 1)");
  }
};

// Credit triangle.
inline double hazard_from_cds(const CreditSpec& spec) {
  spec.validate();
  return spec.cds_spread / (1.0 - spec.recovery);
}

inline constexpr int kDefaultDaysPerQuarter = 63;

struct DefaultMarginals {
  std::vector<double> times;  // interval ends t_1..t_m; t_0 = 0
  std::vector<double> q;      // P[tau in (t_{s-1}, t_s]]
  std::vector<int> days;      // default granularity divisor per interval

  std::size_t size() const { return q.size(); }
  double start(std::size_t s) const { return s == 0 ? 0.0 : times[s - 1]; }

  double total() const {
    double sum = 0.0;
    for (double v : q) sum += v;
    return sum;
  }
};

inline DefaultMarginals marginals(double hazard, std::span<const double> grid,
                                  int days_per_quarter = kDefaultDaysPerQuarter) {
  if (hazard < 0.0) throw DomainError("hazard rate must be non-negative");
  if (days_per_quarter < 1) throw DomainError("days per quarter must be at least 1");
  DefaultMarginals m;
  m.times.assign(grid.begin(), grid.end());
  m.q.reserve(grid.size());
  m.days.reserve(grid.size());
  double prev = 0.0;
  double prev_survival = 1.0;
  for (double t : grid) {
    if (!(t > prev)) throw DomainError("stopping grid must be strictly increasing from 0");
    const double survival = std::exp(-hazard * t);
    m.q.push_back(prev_survival - survival);
    const long d = std::lround(days_per_quarter * (t - prev) / 0.25);
    m.days.push_back(static_cast<int>(std::max(d, 1L)));
    prev = t;
    prev_survival = survival;
  }
  return m;
}

// Two-point conditional DP distribution: level p_hi on scenario mass q, p_lo on
// the remaining 1 - q. Mean is q and standard deviation nu * sqrt(q (1 - q)).
struct DPVolParam {
  double nu = 0.0;
  double p_hi = 0.0;
  double p_lo = 0.0;
  double hi_mass = 0.0;

  double mean() const { return hi_mass * p_hi + (1.0 - hi_mass) * p_lo; }
  double stdev() const { return (p_hi - p_lo) * std::sqrt(hi_mass * (1.0 - hi_mass)); }
};

inline DPVolParam two_point_dp(double q, double nu) {
  if (!(q > 0.0) || !(q < 1.0)) throw DomainError("marginal default probability must lie in (0, 1)");
  if (!(nu >= 0.0) || !(nu <= 1.0)) throw DomainError("nu must lie in [0, 1]");
  return {nu, q + (1.0 - q) * nu, q * (1.0 - nu), q};
}

}  // namespace wwcva
