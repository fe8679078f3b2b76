#pragma once

// Figure sweeps and their CSV serialization. Output is a pure function of the
// configuration: tasks may run on several threads but results are collected by
// (spread, nu) index and written in that order.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "wwcva/bermudan.hpp"
#include "wwcva/config.hpp"
#include "wwcva/wwr.hpp"

namespace wwcva {

inline std::string csv_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

inline std::string csv_preamble(const RunConfig& cfg, const char* figure) {
  return std::string("# ") + figure + " config_digest=" + cfg.digest() + "\n";
}

struct Figure1 {
  CvaReport report;
  double atm_rate = 0.0;
  std::string csv;
};

inline Figure1 run_figure1(const RunConfig& cfg, const HedgeCostFn& hedge_cost) {
  cfg.validate();
  const WwrProblem problem = cfg.problem(cfg.figure1_spread_bps);
  Figure1 out;
  out.atm_rate = problem.atm_rate;
  out.report = optimize_strike(problem, 1.0, hedge_cost, cfg.strike_search());

  struct Row {
    StrikePoint pt;
    std::string marker;
  };
  std::vector<Row> rows;
  bool atm_seen = false;
  for (const auto& pt : out.report.curve) {
    std::string marker;
    if (pt.strike == problem.atm_rate) {
      marker = "atm";
      atm_seen = true;
    }
    if (pt.strike == out.report.optimal_strike) marker += marker.empty() ? "optimal" : "+optimal";
    rows.push_back({pt, marker});
  }
  if (!atm_seen) {
    StrikePoint atm{problem.atm_rate, cva_total(problem, 1.0, problem.atm_rate),
                    hedge_cost(problem.atm_rate), 0.0, false};
    atm.total = atm.capped_cva + atm.hedge_cost;
    auto pos = rows.begin();
    while (pos != rows.end() && pos->pt.strike < atm.strike) ++pos;
    rows.insert(pos, {atm, "atm"});
  }

  std::ostringstream os;
  os << csv_preamble(cfg, "figure1");
  os << "strike,capped_wwcva,bermudan_cost,total_cost,marker\n";
  for (const auto& r : rows)
    os << csv_number(r.pt.strike) << ',' << csv_number(r.pt.capped_cva) << ','
       << csv_number(r.pt.hedge_cost) << ',' << csv_number(r.pt.total) << ',' << r.marker << '\n';
  out.csv = os.str();
  return out;
}

inline Figure1 run_figure1(const RunConfig& cfg) {
  const BermudanHedgeCost hedge(cfg.market(), cfg.swap(), cfg.lattice());
  return run_figure1(cfg, [&](double k) { return hedge(k); });
}

// One report per (spread, nu), spread-major.
inline std::vector<CvaReport> run_sweep(const RunConfig& cfg, const HedgeCostFn& hedge_cost,
                                        unsigned threads = 1) {
  cfg.validate();
  std::vector<WwrProblem> problems;
  for (double s : cfg.spreads_bps) problems.push_back(cfg.problem(s));
  const std::size_t n_nu = cfg.nu.size();
  const std::size_t tasks = problems.size() * n_nu;
  std::vector<CvaReport> reports(tasks);
  std::vector<std::exception_ptr> errors(tasks);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks; i = next++) {
      try {
        reports[i] = optimize_strike(problems[i / n_nu], cfg.nu[i % n_nu], hedge_cost,
                                     cfg.strike_search());
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(tasks)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return reports;
}

inline std::vector<CvaReport> run_sweep(const RunConfig& cfg, unsigned threads = 1) {
  const BermudanHedgeCost hedge(cfg.market(), cfg.swap(), cfg.lattice());
  return run_sweep(cfg, [&](double k) { return hedge(k); }, threads);
}

inline std::string figure2_csv(const RunConfig& cfg, const std::vector<CvaReport>& reports) {
  std::ostringstream os;
  os << csv_preamble(cfg, "figure2");
  os << "spread_bps,nu,optimal_strike,optimal_total,unhedged_wwcva,no_wwr_cva\n";
  for (const auto& r : reports)
    os << csv_number(r.cds_spread * 1e4) << ',' << csv_number(r.nu) << ','
       << csv_number(r.optimal_strike) << ',' << csv_number(r.optimal_total) << ','
       << csv_number(r.unhedged) << ',' << csv_number(r.no_wwr) << '\n';
  return os.str();
}

inline std::string figure3_csv(const RunConfig& cfg, const std::vector<CvaReport>& reports) {
  std::ostringstream os;
  os << csv_preamble(cfg, "figure3");
  os << "spread_bps,nu,savings_fraction,savings_defined\n";
  for (const auto& r : reports) {
    const Savings s = savings(r);
    os << csv_number(r.cds_spread * 1e4) << ',' << csv_number(r.nu) << ','
       << csv_number(s.fraction) << ',' << (s.defined ? 1 : 0) << '\n';
  }
  return os.str();
}

}  // namespace wwcva
