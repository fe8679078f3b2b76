#pragma once

// Synthetic single-curve rates market: flat continuously-compounded discount
// curve, annuities, par swap rates and normal-model (Bachelier) swaptions.
// Times are year fractions on an ACT/365F basis; all functions are pure.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "wwcva/errors.hpp"

namespace wwcva {

inline double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) * (0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2);
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x * std::numbers::sqrt2 * 0.5); }

struct DiscountCurve {
  double flat_rate = 0.0;

  double df(double t) const { return std::exp(-flat_rate * t); }
};

// Pay-fixed (receive-float) swap on a regular schedule starting today. The
// float leg resets on the fixed-leg grid.
struct SwapSpec {
  double notional = 1.0;
  double fixed_rate = 0.0;
  double maturity = 10.0;
  int frequency = 4;

  int periods() const { return static_cast<int>(std::lround(maturity * frequency)); }
  double accrual() const { return 1.0 / frequency; }
  double payment_time(int i) const { return static_cast<double>(i) / frequency; }

  void validate() const {
    if (!(maturity > 0.0)) throw DomainError("swap maturity must be positive");
    if (frequency <= 0) throw DomainError("swap frequency must be positive");
    if (std::abs(periods() - maturity * frequency) > 1e-9)
      throw DomainError("swap frequency must divide the maturity");
    if (fixed_rate < 0.0) throw DomainError("swap fixed rate must be non-negative");
  }
};

struct SwaptionQuote {
  double expiry = 0.0;
  double strike = 0.0;
  double tenor = 0.0;
  double normal_vol = 0.0;
  double price = 0.0;
};

namespace detail {

inline int period_count(double start, double end, int freq) {
  if (freq <= 0) throw DomainError("payment frequency must be positive");
  if (!(start >= 0.0) || !(end > start))
    throw DomainError("annuity interval must satisfy 0 <= start < end");
  const double n = (end - start) * freq;
  const long rounded = std::lround(n);
  if (rounded < 1 || std::abs(n - rounded) > 1e-9)
    throw DomainError("payment frequency must divide the annuity interval");
  return static_cast<int>(rounded);
}

}  // namespace detail

// Sum over payment dates start+1/freq, ..., end of (1/freq) * df(t_j).
inline double annuity(const DiscountCurve& curve, double start, double end, int freq) {
  const int n = detail::period_count(start, end, freq);
  const double tau = 1.0 / freq;
  double sum = 0.0;
  for (int j = 1; j <= n; ++j) sum += tau * curve.df(start + j * tau);
  return sum;
}

inline double forward_swap_rate(const DiscountCurve& curve, double start, double end, int freq) {
  const double a = annuity(curve, start, end, freq);
  return (curve.df(start) - curve.df(end)) / a;
}

inline double bachelier_payer(double forward, double strike, double normal_vol, double expiry,
                              double annuity_value) {
  if (normal_vol < 0.0) throw DomainError("normal vol must be non-negative");
  if (expiry < 0.0) throw DomainError("expiry must be non-negative");
  if (!(annuity_value > 0.0)) throw DomainError("annuity must be positive");
  const double sd = normal_vol * std::sqrt(expiry);
  const double m = forward - strike;
  if (sd == 0.0) return annuity_value * std::max(m, 0.0);
  const double d = m / sd;
  return annuity_value * (m * normal_cdf(d) + sd * normal_pdf(d));
}

inline double bachelier_receiver(double forward, double strike, double normal_vol, double expiry,
                                 double annuity_value) {
  if (normal_vol < 0.0) throw DomainError("normal vol must be non-negative");
  if (expiry < 0.0) throw DomainError("expiry must be non-negative");
  if (!(annuity_value > 0.0)) throw DomainError("annuity must be positive");
  const double sd = normal_vol * std::sqrt(expiry);
  const double m = strike - forward;
  if (sd == 0.0) return annuity_value * std::max(m, 0.0);
  const double d = m / sd;
  return annuity_value * (m * normal_cdf(d) + sd * normal_pdf(d));
}

// Flat-curve, flat-normal-vol market. Prices co-terminal payer swaptions into
// the remainder of a swap with the given frequency and final maturity.
struct RatesMarket {
  DiscountCurve curve;
  double normal_vol = 0.0;

  double coterminal_annuity(double expiry, double maturity, int freq) const {
    return annuity(curve, expiry, maturity, freq);
  }

  double coterminal_forward(double expiry, double maturity, int freq) const {
    return forward_swap_rate(curve, expiry, maturity, freq);
  }

  // Time-0 value of a payer swaption per unit notional.
  double payer_swaption(double expiry, double maturity, int freq, double strike) const {
    const double a = coterminal_annuity(expiry, maturity, freq);
    const double f = coterminal_forward(expiry, maturity, freq);
    return bachelier_payer(f, strike, normal_vol, expiry, a);
  }

  SwaptionQuote quote(double expiry, double maturity, int freq, double strike) const {
    return {expiry, strike, maturity - expiry, normal_vol,
            payer_swaption(expiry, maturity, freq, strike)};
  }
};

}  // namespace wwcva
