#pragma once

// Bermudan payer swaption pricing on a one-factor Gaussian (Hull-White)
// trinomial lattice. Short-rate vols are piecewise constant between exercise
// dates and bootstrapped, per strike, so that every co-terminal European payer
// at that strike reprices the Bachelier market.
//
// The lattice state is x(t) with dx = -a x dt + sigma(t) dW and r = x + alpha(t);
// alpha is fitted step by step so the tree reprices the discount curve. Bond
// prices at exercise nodes are exponential-affine in x,
//   P(t, T | x) = P(0, T) / P(0, t) * exp(-G(t, T) x) / E_t[exp(-G(t, T) x)],
// with the expectation taken under the tree's own t-forward measure.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <mutex>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/tools/toms748_solve.hpp>

#include "wwcva/errors.hpp"
#include "wwcva/market.hpp"

namespace wwcva {

struct LatticeOptions {
  double mean_reversion = 0.03;
  int steps_per_period = 13;
  // Calibration target: relative price error, floored by an absolute error per
  // unit notional for prices that are numerically zero.
  double calibration_rel_tol = 1e-4;
  double calibration_abs_tol = 1e-12;
};

struct CalibrationPoint {
  double expiry = 0.0;
  double sigma = 0.0;
  double target = 0.0;
  double model = 0.0;
  bool solved = false;  // false when the target was negligible and sigma was carried over
};

struct HedgeSpec {
  double strike = 0.0;
  std::vector<double> exercise_times;
  double price = 0.0;
};

class LatticeModel {
 public:
  struct Slice {
    double dx = 0.0;
    int jmin = 0;
    int jmax = 0;
    double alpha = 0.0;
    std::vector<int> next;  // centre node index at the following step
    std::vector<double> pu, pm, pd;

    int width() const { return jmax - jmin + 1; }
    double x(int j) const { return j * dx; }
  };

  LatticeModel(DiscountCurve curve, const SwapSpec& swap, const LatticeOptions& opts)
      : curve_(curve), swap_(swap), opts_(opts) {
    swap_.validate();
    if (opts.steps_per_period < 1) throw DomainError("steps per period must be at least 1");
    if (opts.mean_reversion < 0.0) throw DomainError("mean reversion must be non-negative");
    dt_ = 1.0 / (swap_.frequency * opts.steps_per_period);
    state_ = {0.0, 0, 0, {1.0}};
    exercise_ad_.push_back(state_);
  }

  const DiscountCurve& curve() const { return curve_; }
  const SwapSpec& swap() const { return swap_; }
  const LatticeOptions& options() const { return opts_; }
  double dt() const { return dt_; }
  int steps() const { return static_cast<int>(slices_.size()); }
  int periods_built() const { return steps() / opts_.steps_per_period; }
  const std::vector<Slice>& slices() const { return slices_; }
  const std::vector<CalibrationPoint>& calibration() const { return calibration_; }
  double max_discount_error() const { return max_df_error_; }

  std::vector<double> sigmas() const {
    std::vector<double> s;
    for (const auto& c : calibration_) s.push_back(c.sigma);
    return s;
  }

  // Time-0 value of the payer swaption at `strike` exercisable into the
  // remaining swap at each time in `exercise_times` (multiples of the period).
  double price(const HedgeSpec& hedge) const {
    if (hedge.exercise_times.empty()) return 0.0;
    std::vector<int> exercise_periods;
    for (double t : hedge.exercise_times) {
      const long p = std::lround(t * swap_.frequency);
      if (std::abs(p - t * swap_.frequency) > 1e-9 || p < 1 || p > periods_built())
        throw DomainError("exercise time " + std::to_string(t) + " is not on the calibrated grid");
      exercise_periods.push_back(static_cast<int>(p));
    }
    std::sort(exercise_periods.begin(), exercise_periods.end());
    exercise_periods.erase(std::unique(exercise_periods.begin(), exercise_periods.end()),
                           exercise_periods.end());
    const int last = exercise_periods.back();
    const int nsp = opts_.steps_per_period;

    std::vector<double> value = exercise_values(last, hedge.strike);
    for (double& v : value) v = std::max(v, 0.0);
    auto ex = exercise_periods.rbegin() + 1;
    for (int i = last * nsp - 1; i >= 0; --i) {
      const Slice& s = slices_[i];
      const int next_jmin = (i + 1 < steps()) ? slices_[i + 1].jmin : state_.jmin;
      std::vector<double> prev(s.width());
      for (int j = s.jmin; j <= s.jmax; ++j) {
        const int idx = j - s.jmin;
        const int c = s.next[idx] - next_jmin;
        double cont = s.pm[idx] * value[c];
        if (s.pu[idx] != 0.0) cont += s.pu[idx] * value[c + 1];
        if (s.pd[idx] != 0.0) cont += s.pd[idx] * value[c - 1];
        prev[idx] = std::exp(-(s.x(j) + s.alpha) * dt_) * cont;
      }
      value = std::move(prev);
      if (ex != exercise_periods.rend() && i == *ex * nsp) {
        const std::vector<double> exercise = exercise_values(*ex, hedge.strike);
        for (std::size_t k = 0; k < value.size(); ++k) value[k] = std::max(value[k], exercise[k]);
        ++ex;
      }
    }
    return swap_.notional * value.front();
  }

  double price_european(double strike, double expiry) const {
    return price(HedgeSpec{strike, {expiry}, 0.0});
  }

  // Extends the lattice by one exercise period with short-rate vol `sigma`.
  void append_period(double sigma) { commit(build_period(state_, sigma)); }

  // Bootstraps the vol for the next period so the co-terminal European at
  // `strike` matches `target` (per unit notional).
  CalibrationPoint calibrate_next_period(double strike, double target, double guess) {
    const int period = periods_built() + 1;
    const double expiry = swap_.payment_time(period);
    const double tol = std::max(opts_.calibration_rel_tol * target, opts_.calibration_abs_tol);
    CalibrationPoint point{expiry, guess, target, 0.0, false};

    auto model_price = [&](double sigma) {
      const Period trial = build_period(state_, sigma);
      return european_from_state(trial.end, period, strike);
    };

    if (target <= opts_.calibration_abs_tol) {
      point.model = model_price(guess);
      append_period(guess);
      calibration_.push_back(point);
      return point;
    }

    auto f = [&](double sigma) { return model_price(sigma) - target; };
    double lo = guess, hi = guess;
    double flo = f(guess);
    double fhi = flo;
    double best = guess, fbest = flo;
    if (std::abs(flo) > tol) {
      if (flo < 0.0) {
        hi = guess > 0.0 ? 2.0 * guess : 1e-4;
        fhi = f(hi);
        for (int n = 0; fhi < 0.0; ++n) {
          if (n > 40) throw CalibrationError(fail_message(expiry, "vol bracket exhausted"), expiry);
          lo = hi;
          flo = fhi;
          hi *= 2.0;
          fhi = f(hi);
        }
      } else {
        lo = 0.0;
        flo = f(0.0);
        if (flo > tol)
          throw CalibrationError(fail_message(expiry, "target below zero-vol price"), expiry);
      }
      if (std::abs(flo) <= tol) {
        best = lo;
        fbest = flo;
      } else if (std::abs(fhi) <= tol) {
        best = hi;
        fbest = fhi;
      } else {
        std::uintmax_t iters = 100;
        auto done = [&](double a, double b) { return std::abs(b - a) <= 1e-10 * std::max(b, 1e-8); };
        auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, done, iters);
        const double fa = f(a), fb = f(b);
        if (std::abs(fa) < std::abs(fb)) {
          best = a;
          fbest = fa;
        } else {
          best = b;
          fbest = fb;
        }
      }
    }
    if (std::abs(fbest) > std::max(1e-3 * target, opts_.calibration_abs_tol))
      throw CalibrationError(fail_message(expiry, "residual " + std::to_string(fbest)), expiry);
    point.sigma = best;
    point.model = target + fbest;
    point.solved = true;
    append_period(best);
    calibration_.push_back(point);
    return point;
  }

 private:
  struct State {
    double dx = 0.0;
    int jmin = 0;
    int jmax = 0;
    std::vector<double> ad;  // Arrow-Debreu prices per node

    double x(int j) const { return j * dx; }
  };

  struct Period {
    std::vector<Slice> slices;
    State end;
    double max_df_error = 0.0;
  };

  std::string fail_message(double expiry, const std::string& why) const {
    return "lattice calibration failed at expiry " + std::to_string(expiry) + ": " + why;
  }

  Period build_period(const State& start, double sigma) const {
    const double a = opts_.mean_reversion;
    const double variance = sigma <= 0.0   ? 0.0
                            : a < 1e-12    ? sigma * sigma * dt_
                                           : sigma * sigma * -std::expm1(-2.0 * a * dt_) / (2.0 * a);
    const double decay = std::exp(-a * dt_);
    const double sqrt3 = std::sqrt(3.0);
    Period out;
    State cur = start;
    const int first_step = steps();
    for (int step = 0; step < opts_.steps_per_period; ++step) {
      const double dx_next = variance > 0.0 ? std::sqrt(3.0 * variance) : cur.dx * decay;
      Slice s;
      s.dx = cur.dx;
      s.jmin = cur.jmin;
      s.jmax = cur.jmax;
      const int w = s.width();
      s.next.resize(w);
      s.pu.assign(w, 0.0);
      s.pm.assign(w, 1.0);
      s.pd.assign(w, 0.0);
      int kmin = 0, kmax = 0;
      double sum = 0.0;
      for (int j = cur.jmin; j <= cur.jmax; ++j) {
        const int idx = j - cur.jmin;
        const double m = cur.x(j) * decay;
        const int k = dx_next > 0.0 ? static_cast<int>(std::lround(m / dx_next)) : 0;
        s.next[idx] = k;
        if (variance > 0.0) {
          const double e = m - k * dx_next;
          const double e2v = e * e / variance;
          const double e3 = e * sqrt3 / std::sqrt(variance);
          s.pu[idx] = (1.0 + e2v + e3) / 6.0;
          s.pd[idx] = (1.0 + e2v - e3) / 6.0;
          s.pm[idx] = 2.0 / 3.0 - e2v / 3.0;
        }
        if (idx == 0 || k < kmin) kmin = k;
        if (idx == 0 || k > kmax) kmax = k;
        sum += cur.ad[idx] * std::exp(-cur.x(j) * dt_);
      }
      const double t_next = (first_step + step + 1) * dt_;
      const double df_next = curve_.df(t_next);
      s.alpha = std::log(sum / df_next) / dt_;

      State nxt;
      nxt.dx = dx_next;
      const int spread = variance > 0.0 ? 1 : 0;
      nxt.jmin = kmin - spread;
      nxt.jmax = kmax + spread;
      nxt.ad.assign(nxt.jmax - nxt.jmin + 1, 0.0);
      for (int j = cur.jmin; j <= cur.jmax; ++j) {
        const int idx = j - cur.jmin;
        const double flow = cur.ad[idx] * std::exp(-(cur.x(j) + s.alpha) * dt_);
        const int c = s.next[idx] - nxt.jmin;
        nxt.ad[c] += flow * s.pm[idx];
        if (spread) {
          nxt.ad[c + 1] += flow * s.pu[idx];
          nxt.ad[c - 1] += flow * s.pd[idx];
        }
      }
      const double total = std::accumulate(nxt.ad.begin(), nxt.ad.end(), 0.0);
      out.max_df_error = std::max(out.max_df_error, std::abs(total - df_next));
      out.slices.push_back(std::move(s));
      cur = std::move(nxt);
    }
    out.end = std::move(cur);
    return out;
  }

  void commit(Period p) {
    for (auto& s : p.slices) slices_.push_back(std::move(s));
    max_df_error_ = std::max(max_df_error_, p.max_df_error);
    state_ = std::move(p.end);
    exercise_ad_.push_back(state_);
  }

  // Value at the exercise date (per unit notional, at that date) of entering
  // the remaining pay-fixed swap at `strike`, for every node of `st`.
  std::vector<double> swap_values(const State& st, int period, double strike) const {
    const double t = swap_.payment_time(period);
    const int width = st.jmax - st.jmin + 1;
    const double a = opts_.mean_reversion;
    const double tau = swap_.accrual();
    std::vector<double> fixed_leg(width, 0.0);
    std::vector<double> bond(width);
    std::vector<double> last_bond(width);
    for (int l = period + 1; l <= swap_.periods(); ++l) {
      const double tl = swap_.payment_time(l);
      const double g = a < 1e-12 ? (tl - t) : -std::expm1(-a * (tl - t)) / a;
      const double step = std::exp(-g * st.dx);
      double r = std::exp(-g * st.x(st.jmin));
      double expectation = 0.0;
      for (int k = 0; k < width; ++k) {
        bond[k] = r;
        expectation += st.ad[k] * r;
        r *= step;
      }
      const double scale = curve_.df(tl) / expectation;  // P(0,T)/P(0,t) / E^t[...]
      for (int k = 0; k < width; ++k) {
        bond[k] *= scale;
        fixed_leg[k] += tau * bond[k];
      }
      if (l == swap_.periods()) last_bond = bond;
    }
    std::vector<double> out(width);
    for (int k = 0; k < width; ++k) out[k] = 1.0 - last_bond[k] - strike * fixed_leg[k];
    return out;
  }

  std::vector<double> exercise_values(int period, double strike) const {
    return swap_values(exercise_ad_.at(period), period, strike);
  }

  double european_from_state(const State& st, int period, double strike) const {
    const std::vector<double> v = swap_values(st, period, strike);
    double price = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) price += st.ad[k] * std::max(v[k], 0.0);
    return price;
  }

  DiscountCurve curve_;
  SwapSpec swap_;
  LatticeOptions opts_;
  double dt_ = 0.0;
  State state_;
  std::vector<State> exercise_ad_;  // lattice state at each period boundary
  std::vector<Slice> slices_;
  std::vector<CalibrationPoint> calibration_;
  double max_df_error_ = 0.0;
};

// Exercise dates of the hedge: every stopping date strictly before maturity.
inline std::vector<double> exercise_schedule(const SwapSpec& swap) {
  std::vector<double> t;
  for (int s = 1; s < swap.periods(); ++s) t.push_back(swap.payment_time(s));
  return t;
}

// Builds a lattice whose co-terminal Europeans at `strike` match the market,
// expiry by expiry, over the exercise dates.
inline LatticeModel calibrate(const RatesMarket& mkt, const SwapSpec& swap, double strike,
                              const LatticeOptions& opts = {}) {
  LatticeModel model(mkt.curve, swap, opts);
  const auto dates = exercise_schedule(swap);
  if (dates.empty()) throw DomainError("swap has no exercise dates before maturity");
  double guess = mkt.normal_vol;
  for (double t : dates) {
    const double target = mkt.payer_swaption(t, swap.maturity, swap.frequency, strike);
    guess = model.calibrate_next_period(strike, target, guess).sigma;
  }
  return model;
}

inline double price_bermudan(const LatticeModel& model, HedgeSpec& hedge) {
  hedge.price = model.price(hedge);
  return hedge.price;
}

// B(K): Bermudan payer on the remaining swap, exercisable on every stopping
// date, with the lattice recalibrated to each strike. Thread-safe; results are
// cached by strike.
class BermudanHedgeCost {
 public:
  BermudanHedgeCost(RatesMarket mkt, SwapSpec swap, LatticeOptions opts = {})
      : mkt_(mkt), swap_(swap), opts_(opts) {}

  double operator()(double strike) const {
    {
      std::lock_guard lock(mutex_);
      if (auto it = cache_.find(strike); it != cache_.end()) return it->second;
    }
    const LatticeModel model = calibrate(mkt_, swap_, strike, opts_);
    const double value = model.price(HedgeSpec{strike, exercise_schedule(swap_), 0.0});
    std::lock_guard lock(mutex_);
    cache_.emplace(strike, value);
    return value;
  }

  std::size_t cached() const {
    std::lock_guard lock(mutex_);
    return cache_.size();
  }

 private:
  RatesMarket mkt_;
  SwapSpec swap_;
  LatticeOptions opts_;
  mutable std::mutex mutex_;
  mutable std::map<double, double> cache_;
};

}  // namespace wwcva
