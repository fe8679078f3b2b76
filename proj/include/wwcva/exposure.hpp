#pragma once

// Discrete positive-exposure distributions of the remaining swap at each
// stopping date, implied from co-terminal payer swaption prices over equal
// strike buckets.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "wwcva/errors.hpp"
#include "wwcva/market.hpp"

namespace wwcva {

struct DensityOptions {
  int buckets = 400;
  double range_sd = 6.0;
};

// Swap-rate law on equal-width buckets; rates are bucket midpoints.
struct RateDensity {
  double lower = 0.0;
  double width = 0.0;
  std::vector<double> rates;
  std::vector<double> weights;

  double edge(std::size_t i) const { return lower + static_cast<double>(i) * width; }
};

namespace detail {

// Risk-neutral P[S > strike] from a tight call spread around the strike,
// normalized by the annuity.
inline double digital_from_call_spread(const RatesMarket& mkt, double expiry, double maturity,
                                       int freq, double strike, double half_gap) {
  const double a = mkt.coterminal_annuity(expiry, maturity, freq);
  const double lo = mkt.payer_swaption(expiry, maturity, freq, strike - half_gap);
  const double hi = mkt.payer_swaption(expiry, maturity, freq, strike + half_gap);
  return (lo - hi) / (2.0 * half_gap * a);
}

}  // namespace detail

// Bucket probabilities over [lower, upper]: each bucket's mass is the
// difference of the two call spreads struck at its edges, i.e. a normalized
// second difference of payer prices. Renormalized over the truncated range.
inline RateDensity swap_rate_density(const RatesMarket& mkt, double expiry, double maturity,
                                     int freq, int buckets, double lower, double upper) {
  if (buckets < 10) throw DomainError("at least 10 strike buckets are required");
  if (!(upper > lower)) throw DomainError("strike range must be non-empty");
  RateDensity d;
  d.lower = lower;
  d.width = (upper - lower) / buckets;
  d.rates.resize(buckets);
  d.weights.resize(buckets);
  const double gap = 1e-3 * d.width;

  double prev = detail::digital_from_call_spread(mkt, expiry, maturity, freq, lower, gap);
  double total = 0.0;
  for (int j = 0; j < buckets; ++j) {
    const double next =
        detail::digital_from_call_spread(mkt, expiry, maturity, freq, d.edge(j + 1), gap);
    double w = prev - next;
    if (w < -1e-10)
      throw DataError("negative implied bucket probability " + std::to_string(w) +
                      " at strike " + std::to_string(d.edge(j)) + " (non-convex prices)");
    w = std::max(w, 0.0);
    d.rates[j] = d.edge(j) + 0.5 * d.width;
    d.weights[j] = w;
    total += w;
    prev = next;
  }
  if (!(total > 0.0)) throw DataError("no implied probability mass inside the strike range");
  for (double& w : d.weights) w /= total;
  return d;
}

// Default range: forward +/- range_sd normal standard deviations.
inline RateDensity swap_rate_density(const RatesMarket& mkt, double expiry, double maturity,
                                     int freq, const DensityOptions& opts = {}) {
  if (!(opts.range_sd > 0.0)) throw DomainError("density range must be positive");
  const double sd = mkt.normal_vol * std::sqrt(expiry);
  if (!(sd > 0.0)) throw DomainError("density needs positive normal vol and expiry");
  const double f = mkt.coterminal_forward(expiry, maturity, freq);
  return swap_rate_density(mkt, expiry, maturity, freq, opts.buckets, f - opts.range_sd * sd,
                           f + opts.range_sd * sd);
}

// Exposure of the remaining pay-fixed swap at time t when the co-terminal swap
// rate is `rate`, discounted to today, optionally capped at strike `cap`.
inline double exposure_from_rate(const SwapSpec& swap, const DiscountCurve& curve, double t,
                                 double rate, std::optional<double> cap = std::nullopt) {
  if (t >= swap.maturity - 1e-12) return 0.0;
  const double scale = swap.notional * annuity(curve, t, swap.maturity, swap.frequency);
  const double capped = cap ? std::min(rate, *cap) : rate;
  return scale * std::max(capped - swap.fixed_rate, 0.0);
}

struct ExposureDistribution {
  double time = 0.0;
  double fixed_rate = 0.0;
  double scale = 0.0;  // notional * annuity of the remaining swap, seen today
  std::vector<double> rates;
  std::vector<double> weights;
  std::vector<double> values;

  std::size_t size() const { return rates.size(); }

  double mean() const {
    double m = 0.0;
    for (std::size_t j = 0; j < values.size(); ++j) m += weights[j] * values[j];
    return m;
  }

  std::vector<double> capped_values(std::optional<double> cap) const {
    if (!cap) return values;
    std::vector<double> out(rates.size());
    for (std::size_t j = 0; j < rates.size(); ++j)
      out[j] = scale * std::max(std::min(rates[j], *cap) - fixed_rate, 0.0);
    return out;
  }
};

inline ExposureDistribution exposure_distribution(const RatesMarket& mkt, const SwapSpec& swap,
                                                  double t, const DensityOptions& opts = {}) {
  ExposureDistribution dist;
  dist.time = t;
  dist.fixed_rate = swap.fixed_rate;
  if (t >= swap.maturity - 1e-12) {
    // Nothing left to lose after the final payment.
    dist.rates = {swap.fixed_rate};
    dist.weights = {1.0};
    dist.values = {0.0};
    return dist;
  }
  RateDensity density = swap_rate_density(mkt, t, swap.maturity, swap.frequency, opts);
  dist.scale = swap.notional * mkt.coterminal_annuity(t, swap.maturity, swap.frequency);
  dist.rates = std::move(density.rates);
  dist.weights = std::move(density.weights);
  dist.values.resize(dist.rates.size());
  for (std::size_t j = 0; j < dist.rates.size(); ++j)
    dist.values[j] = dist.scale * std::max(dist.rates[j] - swap.fixed_rate, 0.0);
  return dist;
}

// One distribution per stopping date t_s = s / frequency, s = 1..periods.
struct ExposureProfile {
  std::vector<ExposureDistribution> dates;

  std::vector<double> times() const {
    std::vector<double> t;
    t.reserve(dates.size());
    for (const auto& d : dates) t.push_back(d.time);
    return t;
  }
};

inline std::vector<double> stopping_grid(const SwapSpec& swap) {
  std::vector<double> grid;
  for (int s = 1; s <= swap.periods(); ++s) grid.push_back(swap.payment_time(s));
  return grid;
}

inline ExposureProfile build_exposure_profile(const RatesMarket& mkt, const SwapSpec& swap,
                                              const DensityOptions& opts = {}) {
  swap.validate();
  ExposureProfile p;
  for (double t : stopping_grid(swap)) p.dates.push_back(exposure_distribution(mkt, swap, t, opts));
  return p;
}

}  // namespace wwcva
