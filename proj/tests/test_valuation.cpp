#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "impactval/leverage.hpp"
#include "impactval/valuation.hpp"
#include "oracles.hpp"

using namespace impactval;

namespace {

ImpactParams params(double Y, double sigma, double V) {
  ImpactParams p;
  p.Y = Y;
  p.sigma = sigma;
  p.V = V;
  return p;
}

/// Params giving total impact calI for a position of size Q.
ImpactParams with_total_impact(double calI, double Q) { return params(1.0, calI, Q); }

}  // namespace

TEST(LiquidationValueDiscrete, NoImpactIsMarkToMarket) {
  const auto pos = Position::held(1e4, 100.0, 0.0);
  for (std::uint64_t n : {1ULL, 7ULL, 1000ULL}) {
    EXPECT_DOUBLE_EQ(liquidation_value_discrete(pos, params(1.0, 0.0, 5e3), n), 1e6);
    EXPECT_DOUBLE_EQ(liquidation_value_discrete(pos, params(0.0, 0.02, 5e3), n), 1e6);
  }
}

TEST(LiquidationValueDiscrete, ApproachesContinuousLimit) {
  const auto pos = Position::held(1e4, 100.0, 0.0);
  const auto p = with_total_impact(0.09, 1e4);
  const double expected = 100.0 * 1e4 * (1.0 - (2.0 / 3.0) * 0.09);  // 940,000
  EXPECT_NEAR(liquidation_value_discrete(pos, p, 1'000'000), expected, 1e-4 * expected);
  EXPECT_NEAR(expected, 940000.0, 1e-6);
}

TEST(LiquidationValueDiscrete, SingleBlockTakesFullImpact) {
  const auto pos = Position::held(500.0, 20.0, 0.0);
  const auto p = params(1.0, 0.03, 50.0);
  EXPECT_NEAR(liquidation_value_discrete(pos, p, 1), 500.0 * 20.0 * (1.0 - expected_impact(p, 500.0)), 1e-9);
}

TEST(LiquidationValueDiscrete, ZeroIncrementsIsAnError) {
  EXPECT_THROW(liquidation_value_discrete(Position::held(1, 1, 0), params(1, 0.01, 1), 0), ArgumentError);
}

TEST(LiquidationValue, NoImpact) {
  const auto pos = Position::held(3.0, 7.0, 0.0);
  EXPECT_DOUBLE_EQ(liquidation_value(pos, params(1.0, 0.0, 1.0)), 21.0);
}

TEST(LiquidationValue, StockExampleMatchesDiscreteSum) {
  // p0 Q = 1e9, Q/V = 10, sigma = 2%
  const auto pos = Position::held(1e7, 100.0, 0.0);
  const auto p = params(1.0, 0.02, 1e6);
  const double value = liquidation_value(pos, p);
  EXPECT_NEAR(value, 9.578e8, 0.0005e8);
  const double discrete = liquidation_value_discrete(pos, p, 10'000'000);
  EXPECT_NEAR(value, discrete, 1e-6 * value);
}

TEST(LiquidationValue, ExtrapolatesPastValidityWithoutClamping) {
  const auto pos = Position::held(1.0, 1.0, 0.0);
  EXPECT_NEAR(liquidation_value(pos, with_total_impact(1.5, 1.0)), 0.0, 1e-15);
  const auto p = with_total_impact(1.8, 1.0);
  EXPECT_LT(liquidation_value(pos, p), 0.0);
  const auto s = summarize_valuation(pos, p);
  EXPECT_TRUE(s.validity.has(Validity::WarnLargeImpact));
  EXPECT_LT(s.adjusted_value, 0.0);
}

TEST(AverageValuationPrice, Values) {
  EXPECT_DOUBLE_EQ(average_valuation_price(Position::held(5, 100, 0), params(1, 0.0, 1)), 100.0);
  EXPECT_NEAR(average_valuation_price(Position::held(1, 100, 0), with_total_impact(0.06, 1)), 96.0, 1e-12);
  EXPECT_NEAR(average_valuation_price(Position::held(1, 50, 0), with_total_impact(0.15, 1)), 45.0, 1e-12);
  EXPECT_THROW(average_valuation_price(Position::held(0, 50, 0), with_total_impact(0.15, 1)), ArgumentError);
}

TEST(AverageValuationPrice, IsValuePerShare) {
  const auto pos = Position::held(123.0, 45.0, 0.0);
  const auto p = params(0.8, 0.03, 40.0);
  EXPECT_NEAR(average_valuation_price(pos, p), liquidation_value(pos, p) / pos.Q, 1e-12);
}

TEST(RemainingLiquidationValue, Endpoints) {
  const auto pos = Position::held(100.0, 1.0, 0.0);
  const auto p = params(1.0, 0.1, 100.0);
  EXPECT_NEAR(remaining_liquidation_value(pos, p, 0.0), liquidation_value(pos, p), 1e-12);
  EXPECT_NEAR(remaining_liquidation_value(pos, p, 100.0), 0.0, 1e-12);
  EXPECT_THROW(remaining_liquidation_value(pos, p, -1.0), ArgumentError);
  EXPECT_THROW(remaining_liquidation_value(pos, p, 100.5), ArgumentError);
}

TEST(RemainingLiquidationValue, MatchesQuadrature) {
  const auto pos = Position::held(100.0, 1.0, 0.0);
  const auto p = params(1.0, 0.1, 100.0);
  const double ref = oracle::midpoint([](long double u) { return 1.0L - 0.1L * std::sqrt(u / 100.0L); }, 50.0L,
                                      100.0L, 1'000'000);
  EXPECT_NEAR(remaining_liquidation_value(pos, p, 50.0), ref, 1e-9);
  EXPECT_NEAR(ref, 45.6903559, 1e-6);
}

TEST(ValuationProperties, DiscreteGapShrinksWithIncrements) {
  for (double calI : {0.05, 0.2, 0.5}) {
    const auto pos = Position::held(1e5, 10.0, 0.0);
    const auto p = with_total_impact(calI, 1e5);
    const double cont = liquidation_value(pos, p);
    double prev_gap = INFINITY;
    for (std::uint64_t n : {100ULL, 10'000ULL, 1'000'000ULL}) {
      const double gap = std::abs(liquidation_value_discrete(pos, p, n) - cont) / cont;
      EXPECT_LT(gap, prev_gap) << "calI=" << calI << " n=" << n;
      prev_gap = gap;
    }
    EXPECT_LT(prev_gap, 1e-4);
  }
}

TEST(ValuationProperties, ContinuationValuePlusCashIsConstant) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const auto pos = Position::held(1.0 + 1e6 * U(gen), 1.0 + 100 * U(gen), 0.0);
    const auto p = with_total_impact(0.5 * U(gen), pos.Q);
    const double s = pos.Q * U(gen);
    const double lhs = remaining_liquidation_value(pos, p, 0.0) - remaining_liquidation_value(pos, p, s);
    EXPECT_NEAR(lhs, cash_raised(pos, p, s), 1e-10 * pos.mtm_value());
  }
}

TEST(ValuationProperties, ValueIsSubadditiveInSize) {
  const auto p = params(1.0, 0.02, 1e6);
  for (double Q : {1e4, 1e6, 1e7}) {
    const double one = liquidation_value(Position::held(Q, 50.0, 0.0), p);
    const double two = liquidation_value(Position::held(2 * Q, 50.0, 0.0), p);
    EXPECT_LT(two, 2.0 * one);
  }
}

TEST(ValuationSummary, EmptyPosition) {
  const auto s = summarize_valuation(Position::held(0.0, 100.0, 0.0), params(1.0, 0.02, 1.0));
  EXPECT_EQ(s.mtm_value, 0.0);
  EXPECT_EQ(s.adjusted_value, 0.0);
  EXPECT_EQ(s.haircut, 0.0);
  EXPECT_TRUE(std::isnan(s.average_price));
}

TEST(PositionValidation, Bounds) {
  EXPECT_THROW(validate(Position{-1.0, 1.0, 0.0, 0.0}), ArgumentError);
  EXPECT_THROW(validate(Position{1.0, 0.0, 0.0, 0.0}), ArgumentError);
  EXPECT_THROW(validate(Position{1.0, 1.0, -1.0, 0.0}), ArgumentError);
  EXPECT_NO_THROW(validate(Position{1.0, 1.0, 5.0, 0.0}));  // negative equity is allowed
}
