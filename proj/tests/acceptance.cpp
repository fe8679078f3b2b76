// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "wwcva/wwcva.hpp"

using namespace wwcva;

namespace {

int failures = 0;

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void report(int id, const char* title, bool ok, const std::string& detail) {
  std::printf("[%s] %d. %s: %s\n", ok ? "PASS" : "FAIL", id, title, detail.c_str());
  std::fflush(stdout);
  failures += ok ? 0 : 1;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

constexpr std::uint64_t kSeed = 20150731;

}  // namespace

int main() {
  const RunConfig cfg;
  const RatesMarket mkt = cfg.market();
  const SwapSpec swap = cfg.swap();

  {
    const auto t0 = std::chrono::steady_clock::now();
    const PropertyResult r = check_lp_equivalence(kSeed, 200);
    const double secs = seconds_since(t0);
    report(1, "oracle equivalence (200 instances, n<=8, 1e-12, <5s)", r.passed && secs < 5.0,
           r.detail + fmt(" time=%.3fs", secs));
  }
  {
    const auto t0 = std::chrono::steady_clock::now();
    const PropertyResult r = check_sorted_assignment(kSeed, 200);
    const double secs = seconds_since(t0);
    report(2, "assignment optimality (200 instances, n<=7, 1e-12, <10s)", r.passed && secs < 10.0,
           r.detail + fmt(" time=%.3fs", secs));
  }
  {
    const PropertyResult r = check_granularity(0.01);
    report(3, "granularity monotonicity and quantile bound", r.passed, r.detail);
  }
  {
    const PropertyResult r = check_limits(cfg);
    report(4, "limit identities", r.passed, r.detail);
  }
  {
    const PropertyResult density = check_density(cfg);
    RunConfig doubled = cfg;
    doubled.buckets *= 2;
    const double base = cva_total(cfg.problem(100), 1.0);
    const double fine = cva_total(doubled.problem(100), 1.0);
    const double change = std::abs(fine / base - 1.0);
    report(5, "density cross-check (1e-6 per bucket, doubling < 0.2%)",
           density.passed && change < 2e-3,
           density.detail + fmt(" bucket doubling change=%.3e", change));
  }
  {
    const LatticeModel model = calibrate(mkt, swap, swap.fixed_rate);
    double worst_single = 0.0;
    for (double t : {1.0, 5.0, 9.0}) {
      HedgeSpec h{swap.fixed_rate, {t}, 0.0};
      const double euro = swap.notional * mkt.payer_swaption(t, swap.maturity, swap.frequency, swap.fixed_rate);
      worst_single = std::max(worst_single, std::abs(price_bermudan(model, h) / euro - 1.0));
    }
    const BermudanHedgeCost hedge(mkt, swap, cfg.lattice());
    bool monotone = true;
    double prev = hedge(swap.fixed_rate);
    for (double k : strike_grid(swap.fixed_rate, cfg.problem(100).strike_upper, cfg.strike_grid)) {
      const double b = hedge(k);
      monotone = monotone && b <= prev;
      prev = b;
    }
    LatticeOptions twice = cfg.lattice();
    twice.steps_per_period *= 2;
    double worst_doubling = 0.0;
    for (double k : {swap.fixed_rate, swap.fixed_rate + 0.01, swap.fixed_rate + 0.025}) {
      const double coarse = hedge(k);
      const double fine = BermudanHedgeCost(mkt, swap, twice)(k);
      worst_doubling = std::max(worst_doubling, std::abs(fine / coarse - 1.0));
    }
    report(6, "Bermudan sanity (single date 0.5%, monotone, step doubling < 0.2%)",
           worst_single < 5e-3 && monotone && worst_doubling < 2e-3,
           fmt("single-date rel err=%.3e", worst_single) + (monotone ? " monotone=yes" : " monotone=no") +
               fmt(" step doubling change=%.3e", worst_doubling));
  }

  const auto t_fig1 = std::chrono::steady_clock::now();
  const Figure1 fig1 = run_figure1(cfg);
  const double fig1_secs = seconds_since(t_fig1);
  {
    const auto& c = fig1.report.curve;
    const bool interior = fig1.report.optimal_total < c.front().total &&
                          fig1.report.optimal_total < c.back().total && fig1.report.hedge_beats_unhedged;
    const bool above_atm = fig1.report.optimal_strike > fig1.atm_rate;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "ATM=%.4f%% K*=%.4f%% total(K*)=%.3f total(min K)=%.3f total(max K)=%.3f time=%.2fs",
                  100 * fig1.atm_rate, 100 * fig1.report.optimal_strike, fig1.report.optimal_total,
                  c.front().total, c.back().total, fig1_secs);
    report(7, "Figure-1 shape (interior minimum above ATM)", interior && above_atm, buf);
  }

  const auto t_sweep = std::chrono::steady_clock::now();
  const std::vector<CvaReport> sweep = run_sweep(cfg, 1);
  const double sweep_secs = seconds_since(t_sweep);
  {
    const std::size_t n_nu = cfg.nu.size();
    bool monotone_nu = true;
    bool threshold = true;
    double max_top = 0.0;
    double min_qualifying = 1.0;
    std::string table;
    for (std::size_t s = 0; s < cfg.spreads_bps.size(); ++s) {
      table += fmt(" %gbp:", cfg.spreads_bps[s]);
      for (std::size_t n = 0; n < n_nu; ++n) {
        const double f = savings(sweep[s * n_nu + n]).fraction;
        table += fmt(" %.1f%%", 100 * f);
        if (n > 0 && f < savings(sweep[s * n_nu + n - 1]).fraction - 1e-12) monotone_nu = false;
        if (cfg.spreads_bps[s] >= 200 && cfg.nu[n] >= 0.5) {
          min_qualifying = std::min(min_qualifying, f);
          threshold = threshold && f >= 0.40;
        }
      }
      max_top = std::max(max_top, savings(sweep[s * n_nu + n_nu - 1]).fraction);
    }
    const bool ok = monotone_nu && threshold && max_top >= 0.60 && sweep_secs < 60.0;
    report(8, "Figure-3 shape (monotone in nu, >=40% at >=200bp & nu>=0.5, max >=60%, <60s)", ok,
           std::string(monotone_nu ? "monotone=yes" : "monotone=no") +
               fmt(" min qualifying=%.1f%%", 100 * min_qualifying) +
               fmt(" max at top nu=%.1f%%", 100 * max_top) + fmt(" time=%.2fs", sweep_secs) +
               " savings by nu (" + [&] {
                 std::string s;
                 for (double v : cfg.nu) s += fmt(" %g", v);
                 return s;
               }() + " ):" + table);
  }
  {
    const Figure1 again = run_figure1(cfg);
    const std::vector<CvaReport> sweep2 = run_sweep(cfg, 2);
    const bool same = again.csv == fig1.csv && figure2_csv(cfg, sweep2) == figure2_csv(cfg, sweep) &&
                      figure3_csv(cfg, sweep2) == figure3_csv(cfg, sweep);
    const bool digests = check_lp_equivalence(kSeed).detail == check_lp_equivalence(kSeed).detail;
    report(9, "determinism (byte-identical CSVs, fresh caches, 1 vs 2 threads)", same && digests,
           same ? "figure1/2/3 CSVs identical" : "CSV mismatch");
  }

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
