#include <string>

#include <gtest/gtest.h>

#include "wwcva/config.hpp"

using namespace wwcva;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(Config, EmptyTextGivesDefaults) {
  const RunConfig c = parse_config("");
  EXPECT_DOUBLE_EQ(c.flat_rate, 0.02);
  EXPECT_DOUBLE_EQ(c.normal_vol, 0.007);
  EXPECT_DOUBLE_EQ(c.tenor, 10.0);
  EXPECT_EQ(c.frequency, 4);
  EXPECT_FALSE(c.fixed_rate.has_value());
  EXPECT_DOUBLE_EQ(c.recovery, 0.4);
  EXPECT_EQ(c.days_per_quarter, 63);
  EXPECT_EQ(c.buckets, 400);
  EXPECT_DOUBLE_EQ(c.range_sd, 6.0);
  EXPECT_DOUBLE_EQ(c.mean_reversion, 0.03);
  EXPECT_EQ(c.steps_per_quarter, 13);
  EXPECT_EQ(c.strike_grid, 25);
  EXPECT_DOUBLE_EQ(c.strike_tol_bps, 1.0);
  EXPECT_EQ(c.spreads_bps.size(), 6u);
  EXPECT_EQ(c.nu.size(), 4u);
  EXPECT_EQ(c.digest(), RunConfig{}.digest());
}

TEST(Config, ParsesEverySection) {
  const RunConfig c = parse_config(R"(
# comment
[market]
flat_rate = 0.03   ; trailing comment
normal_vol = 0.008
[swap]
notional = 1e6
tenor = 5
frequency = 2
fixed_rate = 0.025
[credit]
spreads_bps = 100, 250
figure1_spread_bps = 250
recovery = 0.3
[wwr]
nu = 0, 1
days_per_quarter = 21
buckets = 200
range_sd = 5
[hedge]
mean_reversion = 0.01
steps_per_quarter = 8
strike_grid = 11
strike_tol_bps = 0.5
[output]
directory = results
)");
  EXPECT_DOUBLE_EQ(c.flat_rate, 0.03);
  EXPECT_DOUBLE_EQ(c.notional, 1e6);
  EXPECT_EQ(c.frequency, 2);
  EXPECT_DOUBLE_EQ(*c.fixed_rate, 0.025);
  EXPECT_DOUBLE_EQ(c.swap().fixed_rate, 0.025);
  EXPECT_EQ(c.spreads_bps, (std::vector<double>{100, 250}));
  EXPECT_EQ(c.nu, (std::vector<double>{0, 1}));
  EXPECT_EQ(c.days_per_quarter, 21);
  EXPECT_EQ(c.strike_grid, 11);
  EXPECT_DOUBLE_EQ(c.strike_search().tolerance, 0.5e-4);
  EXPECT_EQ(c.output_dir, "results");
  EXPECT_NE(c.digest(), RunConfig{}.digest());
}

TEST(Config, AtmFixedRateIsParRate) {
  const RunConfig c = parse_config("[swap]\nfixed_rate = ATM\n");
  EXPECT_DOUBLE_EQ(c.swap().fixed_rate, forward_swap_rate(DiscountCurve{0.02}, 0.0, 10.0, 4));
}

TEST(Config, UnknownKeysAndSectionsAreErrors) {
  EXPECT_NE(error_of("[market]\nflat_rat = 0.02\n").find("[market] flat_rat"), std::string::npos);
  EXPECT_NE(error_of("[pricing]\n").find("[pricing]"), std::string::npos);
  EXPECT_NE(error_of("flat_rate = 0.02\n").find("outside of a section"), std::string::npos);
  EXPECT_NE(error_of("[market]\nflat_rate\n").find("key = value"), std::string::npos);
}

TEST(Config, FieldLevelValidationMessages) {
  EXPECT_NE(error_of("[market]\nnormal_vol = -1\n").find("[market] normal_vol"), std::string::npos);
  EXPECT_NE(error_of("[market]\nnormal_vol = abc\n").find("expected a number"), std::string::npos);
  EXPECT_NE(error_of("[swap]\nfrequency = 3\ntenor = 10.5\n").find("[swap] frequency"), std::string::npos);
  EXPECT_NE(error_of("[swap]\nfrequency = 2.5\n").find("expected an integer"), std::string::npos);
  EXPECT_NE(error_of("[credit]\nrecovery = 1\n").find("[credit] recovery"), std::string::npos);
  EXPECT_NE(error_of("[credit]\nspreads_bps = 100,,200\n").find("[credit] spreads_bps"), std::string::npos);
  EXPECT_NE(error_of("[credit]\nspreads_bps =\n").find("[credit] spreads_bps"), std::string::npos);
  EXPECT_NE(error_of("[wwr]\nnu = 0.5, 1.5\n").find("[wwr] nu"), std::string::npos);
  EXPECT_NE(error_of("[wwr]\nbuckets = 5\n").find("[wwr] buckets"), std::string::npos);
  EXPECT_NE(error_of("[hedge]\nstrike_grid = 2\n").find("[hedge] strike_grid"), std::string::npos);
}

TEST(Config, MissingFileIsConfigError) {
  EXPECT_THROW(load_config("/nonexistent/wwcva.ini"), ConfigError);
}
