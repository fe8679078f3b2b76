#pragma once

// Property checks behind the `verify` command: the brute-force oracles
// against the engine, feasibility of the implied worst-case assignments, and
// the limit and monotonicity identities of the WW-CVA figures.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include <boost/math/distributions/lognormal.hpp>
#include <boost/math/distributions/normal.hpp>

#include "wwcva/bermudan.hpp"
#include "wwcva/config.hpp"
#include "wwcva/oracle.hpp"
#include "wwcva/wwr.hpp"

namespace wwcva {

struct PropertyResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

enum class InjectedFault { None, MarginalMismatch };

struct TestDistribution {
  std::vector<double> values;
  std::vector<double> weights;
};

// Equal-width bucketing of a continuous law between two of its quantiles;
// midpoints as values, CDF differences (renormalized) as weights.
template <typename Dist>
TestDistribution bucketed(const Dist& law, double lo_prob, double hi_prob, int buckets) {
  const double lo = boost::math::quantile(law, lo_prob);
  const double hi = boost::math::quantile(boost::math::complement(law, hi_prob));
  const double h = (hi - lo) / buckets;
  TestDistribution d;
  double total = 0.0;
  for (int j = 0; j < buckets; ++j) {
    const double a = lo + j * h;
    d.values.push_back(a + 0.5 * h);
    d.weights.push_back(boost::math::cdf(law, a + h) - boost::math::cdf(law, a));
    total += d.weights.back();
  }
  for (double& w : d.weights) w /= total;
  return d;
}

namespace detail {

inline std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

}  // namespace detail

inline PropertyResult check_lp_equivalence(std::uint64_t seed, std::size_t count = 200) {
  const auto instances = oracle::random_instances(seed, count, 8);
  double worst = 0.0;
  for (const auto& inst : instances) {
    const auto lp = oracle::lp_max(inst.values, inst.weights, inst.q);
    const double es = inst.q * expected_shortfall(inst.values, inst.weights, inst.q);
    worst = std::max({worst, std::abs(lp.greedy - lp.simplex), std::abs(lp.greedy - es)});
  }
  return {"lp_oracle_equivalence", worst <= 1e-12,
          "max |simplex-greedy|,|greedy-q*ES| = " + detail::fmt("%.3g", worst) +
              " digest=" + oracle::digest(instances)};
}

inline PropertyResult check_sorted_assignment(std::uint64_t seed, std::size_t count = 200) {
  const auto instances = oracle::random_instances(seed ^ 0x9e3779b97f4a7c15ULL, count, 7);
  double worst = 0.0;
  for (const auto& inst : instances) {
    const auto sorted = sorted_assignment(inst.values, inst.weights, inst.dp_levels);
    const auto best = oracle::best_permutation(inst.values, inst.dp_levels, inst.weights);
    worst = std::max(worst, std::abs(sorted.objective - best.objective));
  }
  return {"sorted_assignment_optimality", worst <= 1e-12,
          "max |sorted-best permutation| = " + detail::fmt("%.3g", worst) +
              " digest=" + oracle::digest(instances)};
}

// [MM] and [NN] for every daily slot of every interval of the configured runs.
inline std::vector<PropertyResult> check_assignments(const RunConfig& cfg, InjectedFault fault) {
  double mm = 0.0, nn = 0.0;
  bool injected = false;
  for (double spread : cfg.spreads_bps) {
    const WwrProblem p = cfg.problem(spread);
    for (double nu : cfg.nu) {
      for (std::size_t s = 0; s < p.marginals.size(); ++s) {
        const double q = p.marginals.q[s];
        if (q == 0.0) continue;
        const auto& dist = p.profile.dates[s];
        const double q_day = q / p.marginals.days[s];
        std::vector<double> assign = implied_day_assignment(dist.values, dist.weights, q_day, nu);
        if (fault == InjectedFault::MarginalMismatch && !injected) {
          assign.front() += 1e-6;
          injected = true;
        }
        double sum = 0.0;
        for (std::size_t j = 0; j < assign.size(); ++j) {
          sum += assign[j];
          nn = std::max({nn, -assign[j], assign[j] - dist.weights[j]});
        }
        mm = std::max(mm, std::abs(sum - q_day));
      }
    }
  }
  return {{"marginal_matching[MM]", mm <= 1e-12, "max |sum p - q| = " + detail::fmt("%.3g", mm)},
          {"non_negativity[NN]", nn <= 1e-12,
           "max bound violation = " + detail::fmt("%.3g", nn)}};
}

// wc_interval(q, D) is nondecreasing in D and bounded below by q * x(D) with
// x(D) the (1 - q/D)-quantile.
inline PropertyResult check_granularity(double q = 0.01) {
  const int days[] = {1, 5, 21, 63, 252};
  const boost::math::normal_distribution<double> normal(1.0, 1.0);
  const boost::math::lognormal_distribution<double> lognormal(0.0, 0.5);
  const TestDistribution nd = bucketed(normal, 1e-12, 1e-12, 20000);
  const TestDistribution ld = bucketed(lognormal, 1e-12, 1e-12, 20000);
  bool ok = true;
  std::string detail;
  auto run = [&](const TestDistribution& d, auto quantile, const char* label) {
    double prev = 0.0;
    for (int D : days) {
      const double v = wc_interval(d.values, d.weights, q, D);
      const double bound = q * quantile(1.0 - q / D);
      if (v < prev || !(v > bound)) ok = false;
      prev = v;
    }
    detail += std::string(label) + " D=252: " + detail::fmt("%.6g", prev) + " ";
  };
  run(nd, [&](double p) { return boost::math::quantile(normal, p); }, "normal");
  run(ld, [&](double p) { return boost::math::quantile(lognormal, p); }, "lognormal");
  return {"granularity_monotonicity", ok, detail};
}

inline PropertyResult check_limits(const RunConfig& cfg) {
  const WwrProblem p = cfg.problem(cfg.spreads_bps.front());
  // Independent baselines: naive worst case per interval, and the
  // independent-default expected loss.
  double naive = 0.0, independent = 0.0;
  for (std::size_t s = 0; s < p.marginals.size(); ++s) {
    const auto& d = p.profile.dates[s];
    naive += wc_interval(d.values, d.weights, p.marginals.q[s], p.marginals.days[s]);
    independent += p.marginals.q[s] * distribution_mean(d.values, d.weights);
  }
  naive *= 1.0 - p.recovery;
  independent *= 1.0 - p.recovery;
  const double e1 = std::abs(cva_total(p, 1.0) - naive);
  const double e0 = std::abs(cva_total(p, 0.0) - independent);
  const double full_recovery = cva_total(p.profile, p.marginals, 0.5, 1.0);
  const WwrProblem riskless = cfg.problem(0.0);
  const double no_spread = cva_total(riskless, 1.0);
  const bool ok = e1 <= 1e-10 && e0 <= 1e-10 && full_recovery == 0.0 && no_spread == 0.0;
  return {"limit_identities", ok,
          "|nu=1 - naive| = " + detail::fmt("%.3g", e1) + " |nu=0 - no-WWR| = " +
              detail::fmt("%.3g", e0) + " R=1: " + detail::fmt("%g", full_recovery) +
              " spread=0: " + detail::fmt("%g", no_spread)};
}

inline PropertyResult check_density(const RunConfig& cfg) {
  const RatesMarket mkt = cfg.market();
  const SwapSpec swap = cfg.swap();
  double worst = 0.0;
  for (double t : {0.25, 1.0, 5.0, swap.maturity - swap.accrual()}) {
    const RateDensity d = swap_rate_density(mkt, t, swap.maturity, swap.frequency, cfg.density());
    const double f = mkt.coterminal_forward(t, swap.maturity, swap.frequency);
    const double sd = mkt.normal_vol * std::sqrt(t);
    for (std::size_t j = 0; j < d.weights.size(); ++j) {
      const double exact = normal_cdf((d.edge(j + 1) - f) / sd) - normal_cdf((d.edge(j) - f) / sd);
      worst = std::max(worst, std::abs(d.weights[j] - exact));
    }
  }
  return {"density_cross_check", worst <= 1e-6,
          "max |w - normal bucket mass| = " + detail::fmt("%.3g", worst)};
}

inline PropertyResult check_bermudan_monotone(const RunConfig& cfg) {
  const RatesMarket mkt = cfg.market();
  const SwapSpec swap = cfg.swap();
  const BermudanHedgeCost hedge(mkt, swap, cfg.lattice());
  const double strikes[] = {swap.fixed_rate, swap.fixed_rate + 0.01, swap.fixed_rate + 0.02};
  double prev = hedge(strikes[0]);
  bool ok = true;
  std::string detail = "B = " + detail::fmt("%.6g", prev);
  for (int i = 1; i < 3; ++i) {
    const double b = hedge(strikes[i]);
    ok = ok && b <= prev;
    detail += ", " + detail::fmt("%.6g", b);
    prev = b;
  }
  return {"bermudan_monotone_in_strike", ok, detail};
}

inline std::vector<PropertyResult> run_verification(const RunConfig& cfg, std::uint64_t seed,
                                                    InjectedFault fault = InjectedFault::None) {
  std::vector<PropertyResult> out;
  out.push_back(check_lp_equivalence(seed));
  out.push_back(check_sorted_assignment(seed));
  for (auto& r : check_assignments(cfg, fault)) out.push_back(std::move(r));
  out.push_back(check_granularity());
  out.push_back(check_limits(cfg));
  out.push_back(check_density(cfg));
  out.push_back(check_bermudan_monotone(cfg));
  return out;
}

inline bool print_verification(std::ostream& os, const std::vector<PropertyResult>& results) {
  bool all = true;
  for (const auto& r : results) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%-30s %s  ", r.name.c_str(), r.passed ? "PASS" : "FAIL");
    os << buf << r.detail << '\n';
    all = all && r.passed;
  }
  return all;
}

}  // namespace wwcva
