#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "wwcva/bermudan.hpp"

using namespace wwcva;

namespace {

const RatesMarket kMarket{DiscountCurve{0.02}, 0.007};

SwapSpec atm_swap() {
  return {10000.0, forward_swap_rate(kMarket.curve, 0.0, 10.0, 4), 10.0, 4};
}

}  // namespace

TEST(Lattice, RepricesDiscountCurve) {
  const SwapSpec s = atm_swap();
  const LatticeModel m = calibrate(kMarket, s, s.fixed_rate);
  EXPECT_EQ(m.periods_built(), 39);
  EXPECT_LE(m.max_discount_error(), 1e-10);
}

TEST(Lattice, CalibratedEuropeansMatchMarket) {
  const SwapSpec s = atm_swap();
  const double k = s.fixed_rate + 0.01;
  const LatticeModel m = calibrate(kMarket, s, k);
  for (const auto& c : m.calibration()) {
    const double market = kMarket.payer_swaption(c.expiry, 10.0, 4, k);
    EXPECT_NEAR(c.model / market, 1.0, 1e-4) << "expiry " << c.expiry;
    EXPECT_NEAR(m.price_european(k, c.expiry) / (s.notional * market), 1.0, 1e-4);
    EXPECT_GT(c.sigma, 0.0);
  }
}

TEST(Lattice, SingleDateMatchesBachelierWithoutCalibration) {
  // Constant sigma equal to the normal vol; short expiries barely feel mean reversion.
  const SwapSpec s{1.0, 0.02, 2.0, 4};
  LatticeModel m(kMarket.curve, s, LatticeOptions{0.0, 40});
  m.append_period(0.007);
  const double lattice = m.price_european(0.02, 0.25);
  const double bachelier = kMarket.payer_swaption(0.25, 2.0, 4, 0.02);
  EXPECT_NEAR(lattice / bachelier, 1.0, 5e-3);
}

TEST(Bermudan, SingleExerciseEqualsEuropean) {
  const SwapSpec s = atm_swap();
  const LatticeModel m = calibrate(kMarket, s, s.fixed_rate);
  for (double t : {1.0, 5.0, 9.0}) {
    HedgeSpec h{s.fixed_rate, {t}, 0.0};
    price_bermudan(m, h);
    EXPECT_NEAR(h.price / (s.notional * kMarket.payer_swaption(t, 10.0, 4, s.fixed_rate)), 1.0, 5e-3);
  }
}

TEST(Bermudan, DominatesEveryEuropean) {
  const SwapSpec s = atm_swap();
  const double k = s.fixed_rate + 0.005;
  const BermudanHedgeCost hedge(kMarket, s);
  const double b = hedge(k);
  for (double t : exercise_schedule(s))
    EXPECT_GE(b, s.notional * kMarket.payer_swaption(t, 10.0, 4, k)) << "t=" << t;
}

TEST(Bermudan, NonIncreasingInStrike) {
  const SwapSpec s = atm_swap();
  const BermudanHedgeCost hedge(kMarket, s);
  double prev = hedge(s.fixed_rate);
  for (double k = s.fixed_rate + 0.005; k < 0.08; k += 0.005) {
    const double b = hedge(k);
    EXPECT_LE(b, prev);
    prev = b;
  }
  EXPECT_GT(hedge.cached(), 10u);
}

TEST(Bermudan, FarOutOfTheMoneyIsNegligible) {
  const SwapSpec s = atm_swap();
  EXPECT_LT(BermudanHedgeCost(kMarket, s)(0.2), 1e-6 * s.notional);
}

TEST(Bermudan, ZeroVolIsIntrinsic) {
  const RatesMarket flat{DiscountCurve{0.02}, 0.0};
  const SwapSpec s{10000.0, 0.0, 10.0, 4};
  const double k = 0.015;
  const LatticeModel m = calibrate(flat, s, k);
  for (double sigma : m.sigmas()) EXPECT_LT(sigma, 1e-6);
  double intrinsic = 0.0;
  for (double t : exercise_schedule(s))
    intrinsic = std::max(intrinsic, s.notional * flat.payer_swaption(t, 10.0, 4, k));
  HedgeSpec h{k, exercise_schedule(s), 0.0};
  EXPECT_NEAR(price_bermudan(m, h) / intrinsic, 1.0, 1e-6);
}

TEST(Bermudan, StepDoublingIsStable) {
  const SwapSpec s = atm_swap();
  const double k = s.fixed_rate + 0.02;
  const double coarse = BermudanHedgeCost(kMarket, s, LatticeOptions{0.03, 13})(k);
  const double fine = BermudanHedgeCost(kMarket, s, LatticeOptions{0.03, 26})(k);
  EXPECT_LT(std::abs(fine / coarse - 1.0), 2e-3);
}

TEST(Bermudan, RejectsOffGridExercise) {
  const SwapSpec s = atm_swap();
  const LatticeModel m = calibrate(kMarket, s, s.fixed_rate);
  EXPECT_THROW(m.price(HedgeSpec{s.fixed_rate, {0.3}, 0.0}), DomainError);
  EXPECT_THROW(m.price(HedgeSpec{s.fixed_rate, {10.0}, 0.0}), DomainError);
  EXPECT_EQ(m.price(HedgeSpec{s.fixed_rate, {}, 0.0}), 0.0);
}
