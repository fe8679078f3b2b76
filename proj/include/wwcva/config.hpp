#pragma once

// Run configuration: a flat sectioned key-value file
//
//   [market]
//   flat_rate = 0.02
//   normal_vol = 0.007
//   [credit]
//   spreads_bps = 50, 100, 200
//
// Every key is optional; absent keys take the defaults below. Unknown sections
// or keys are errors, and every error names the offending field.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "wwcva/bermudan.hpp"
#include "wwcva/credit.hpp"
#include "wwcva/errors.hpp"
#include "wwcva/exposure.hpp"
#include "wwcva/market.hpp"
#include "wwcva/wwr.hpp"

namespace wwcva {

struct RunConfig {
  // [market]
  double flat_rate = 0.02;
  double normal_vol = 0.007;
  // [swap]
  double notional = 10000.0;
  double tenor = 10.0;
  int frequency = 4;
  std::optional<double> fixed_rate;  // empty: at the money
  // [credit]
  std::vector<double> spreads_bps{50, 100, 200, 300, 500, 1000};
  double figure1_spread_bps = 100.0;
  double recovery = 0.4;
  // [wwr]
  std::vector<double> nu{0.1, 0.5, 0.9, 1.0};
  int days_per_quarter = kDefaultDaysPerQuarter;
  int buckets = 400;
  double range_sd = 6.0;
  // [hedge]
  double mean_reversion = 0.03;
  int steps_per_quarter = 13;
  int strike_grid = 25;
  double strike_tol_bps = 1.0;
  // [output]
  std::string output_dir = "out";

  RatesMarket market() const { return {DiscountCurve{flat_rate}, normal_vol}; }

  SwapSpec swap() const {
    SwapSpec s{notional, 0.0, tenor, frequency};
    s.fixed_rate = fixed_rate ? *fixed_rate : forward_swap_rate(market().curve, 0.0, tenor, frequency);
    return s;
  }

  CreditSpec credit(double spread_bps) const { return {spread_bps * 1e-4, recovery}; }
  DensityOptions density() const { return {buckets, range_sd}; }
  LatticeOptions lattice() const {
    LatticeOptions o;
    o.mean_reversion = mean_reversion;
    o.steps_per_period = steps_per_quarter;
    return o;
  }
  StrikeSearch strike_search() const { return {strike_grid, strike_tol_bps * 1e-4}; }

  WwrProblem problem(double spread_bps) const {
    return make_problem(market(), swap(), credit(spread_bps), density(), days_per_quarter);
  }

  void validate() const {
    auto fail = [](const std::string& field, const std::string& why) {
      throw ConfigError(field + ": " + why);
    };
    if (!std::isfinite(flat_rate)) fail("[market] flat_rate", "must be finite");
    if (!(normal_vol > 0.0)) fail("[market] normal_vol", "must be positive");
    if (!(notional > 0.0)) fail("[swap] notional", "must be positive");
    if (!(tenor > 0.0)) fail("[swap] tenor", "must be positive");
    if (frequency < 1) fail("[swap] frequency", "must be a positive integer");
    if (std::abs(std::lround(tenor * frequency) - tenor * frequency) > 1e-9)
      fail("[swap] frequency", "must divide the tenor");
    if (std::lround(tenor * frequency) < 2) fail("[swap] tenor", "needs at least two periods");
    if (fixed_rate && *fixed_rate < 0.0) fail("[swap] fixed_rate", "must be non-negative or ATM");
    if (spreads_bps.empty()) fail("[credit] spreads_bps", "must be a non-empty list");
    for (double s : spreads_bps)
      if (!(s >= 0.0)) fail("[credit] spreads_bps", "entries must be non-negative");
    if (!(figure1_spread_bps >= 0.0)) fail("[credit] figure1_spread_bps", "must be non-negative");
    if (!(recovery >= 0.0) || !(recovery < 1.0)) fail("[credit] recovery", "must lie in [0, 1)");
    if (nu.empty()) fail("[wwr] nu", "must be a non-empty list");
    for (double v : nu)
      if (!(v >= 0.0) || !(v <= 1.0)) fail("[wwr] nu", "entries must lie in [0, 1]");
    if (days_per_quarter < 1) fail("[wwr] days_per_quarter", "must be at least 1");
    if (buckets < 10) fail("[wwr] buckets", "must be at least 10");
    if (!(range_sd > 0.0)) fail("[wwr] range_sd", "must be positive");
    if (!(mean_reversion >= 0.0)) fail("[hedge] mean_reversion", "must be non-negative");
    if (steps_per_quarter < 1) fail("[hedge] steps_per_quarter", "must be at least 1");
    if (strike_grid < 3) fail("[hedge] strike_grid", "must be at least 3");
    if (!(strike_tol_bps > 0.0)) fail("[hedge] strike_tol_bps", "must be positive");
    if (output_dir.empty()) fail("[output] directory", "must not be empty");
  }

  // Every resolved field, one per line, in a fixed order.
  std::string canonical() const {
    std::ostringstream os;
    auto num = [](double x) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", x);
      return std::string(buf);
    };
    auto list = [&](const std::vector<double>& v) {
      std::string s;
      for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + num(v[i]);
      return s;
    };
    os << "market.flat_rate=" << num(flat_rate) << '\n'
       << "market.normal_vol=" << num(normal_vol) << '\n'
       << "swap.notional=" << num(notional) << '\n'
       << "swap.tenor=" << num(tenor) << '\n'
       << "swap.frequency=" << frequency << '\n'
       << "swap.fixed_rate=" << (fixed_rate ? num(*fixed_rate) : std::string("ATM")) << '\n'
       << "credit.spreads_bps=" << list(spreads_bps) << '\n'
       << "credit.figure1_spread_bps=" << num(figure1_spread_bps) << '\n'
       << "credit.recovery=" << num(recovery) << '\n'
       << "wwr.nu=" << list(nu) << '\n'
       << "wwr.days_per_quarter=" << days_per_quarter << '\n'
       << "wwr.buckets=" << buckets << '\n'
       << "wwr.range_sd=" << num(range_sd) << '\n'
       << "hedge.mean_reversion=" << num(mean_reversion) << '\n'
       << "hedge.steps_per_quarter=" << steps_per_quarter << '\n'
       << "hedge.strike_grid=" << strike_grid << '\n'
       << "hedge.strike_tol_bps=" << num(strike_tol_bps) << '\n';
    return os.str();
  }

  std::string digest() const {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : canonical()) {
      h ^= c;
      h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& field, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(field + ": expected a number, got '" + text + "'");
  }
}

inline int parse_int(const std::string& field, const std::string& text) {
  const double v = parse_double(field, text);
  if (v != std::floor(v) || std::abs(v) > 1e9)
    throw ConfigError(field + ": expected an integer, got '" + text + "'");
  return static_cast<int>(v);
}

inline std::vector<double> parse_list(const std::string& field, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError(field + ": empty list entry");
    out.push_back(parse_double(field, item));
  }
  if (out.empty()) throw ConfigError(field + ": must be a non-empty list");
  return out;
}

}  // namespace detail

inline RunConfig parse_config(const std::string& text) {
  using detail::parse_double;
  using detail::parse_int;
  using detail::parse_list;
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
      section = detail::trim(line.substr(1, line.size() - 2));
      static const char* known[] = {"market", "swap", "credit", "wwr", "hedge", "output"};
      bool ok = false;
      for (const char* k : known) ok = ok || section == k;
      if (!ok) throw ConfigError("[" + section + "]: unknown section");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    if (section.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": key outside of a section");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    const std::string field = "[" + section + "] " + key;

    if (section == "market" && key == "flat_rate") cfg.flat_rate = parse_double(field, value);
    else if (section == "market" && key == "normal_vol") cfg.normal_vol = parse_double(field, value);
    else if (section == "swap" && key == "notional") cfg.notional = parse_double(field, value);
    else if (section == "swap" && key == "tenor") cfg.tenor = parse_double(field, value);
    else if (section == "swap" && key == "frequency") cfg.frequency = parse_int(field, value);
    else if (section == "swap" && key == "fixed_rate") {
      if (value == "ATM" || value == "atm") cfg.fixed_rate.reset();
      else cfg.fixed_rate = parse_double(field, value);
    }
    else if (section == "credit" && key == "spreads_bps") cfg.spreads_bps = parse_list(field, value);
    else if (section == "credit" && key == "figure1_spread_bps") cfg.figure1_spread_bps = parse_double(field, value);
    else if (section == "credit" && key == "recovery") cfg.recovery = parse_double(field, value);
    else if (section == "wwr" && key == "nu") cfg.nu = parse_list(field, value);
    else if (section == "wwr" && key == "days_per_quarter") cfg.days_per_quarter = parse_int(field, value);
    else if (section == "wwr" && key == "buckets") cfg.buckets = parse_int(field, value);
    else if (section == "wwr" && key == "range_sd") cfg.range_sd = parse_double(field, value);
    else if (section == "hedge" && key == "mean_reversion") cfg.mean_reversion = parse_double(field, value);
    else if (section == "hedge" && key == "steps_per_quarter") cfg.steps_per_quarter = parse_int(field, value);
    else if (section == "hedge" && key == "strike_grid") cfg.strike_grid = parse_int(field, value);
    else if (section == "hedge" && key == "strike_tol_bps") cfg.strike_tol_bps = parse_double(field, value);
    else if (section == "output" && key == "directory") cfg.output_dir = value;
    else throw ConfigError(field + ": unknown key");
  }
  cfg.validate();
  return cfg;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace wwcva
