#pragma once

// Impact-adjusted valuation: a position is worth the expected proceeds of
// liquidating it in full, not Q times the marginal price.

#include <cmath>
#include <cstdint>

#include "impactval/errors.hpp"
#include "impactval/impact.hpp"

namespace impactval {

/// A leveraged holding. E0 is only consulted when building entry paths.
struct Position {
  double Q = 0.0;   ///< shares held
  double p0 = 0.0;  ///< mark-to-market price
  double L = 0.0;   ///< liabilities
  double E0 = 0.0;  ///< initial equity before entering

  /// Full position where E0 is its mark-to-market equity.
  static Position held(double Q, double p0, double L) { return Position{Q, p0, L, Q * p0 - L}; }

  double mtm_value() const noexcept { return Q * p0; }
  double mtm_equity() const noexcept { return Q * p0 - L; }
};

inline void validate(const Position& pos) {
  if (!(pos.Q >= 0.0) || !std::isfinite(pos.Q)) throw ArgumentError("position: Q must be >= 0");
  if (!(pos.p0 > 0.0) || !std::isfinite(pos.p0)) throw ArgumentError("position: p0 must be > 0");
  if (!(pos.L >= 0.0) || !std::isfinite(pos.L)) throw ArgumentError("position: L must be >= 0");
}

/// Sum over N equal slices of the proceeds of each slice at the impact
/// reached once it has been executed.
inline double liquidation_value_discrete(const Position& pos, const ImpactParams& params,
                                         std::uint64_t n_increments) {
  if (n_increments == 0) throw ArgumentError("liquidation_value_discrete: need at least one increment");
  validate(pos);
  const double slice = pos.Q / static_cast<double>(n_increments);
  // Neumaier summation; N reaches 1e7 in tests.
  double sum = 0.0, comp = 0.0;
  for (std::uint64_t t = 1; t <= n_increments; ++t) {
    const double term = 1.0 - expected_impact(params, slice * static_cast<double>(t));
    const double s = sum + term;
    comp += std::abs(sum) >= std::abs(term) ? (sum - s) + term : (term - s) + sum;
    sum = s;
  }
  return slice * pos.p0 * (sum + comp);
}

/// Continuous-limit liquidation value p0 Q (1 - 2/3 I(Q)). May be negative
/// when I(Q) > 3/2; callers are expected to look at check_validity.
inline double liquidation_value(const Position& pos, const ImpactParams& params) {
  validate(pos);
  return pos.p0 * pos.Q * (1.0 - (2.0 / 3.0) * expected_impact(params, pos.Q));
}

/// Impact-adjusted price per share, liquidation_value / Q.
inline double average_valuation_price(const Position& pos, const ImpactParams& params) {
  validate(pos);
  if (pos.Q == 0.0) throw ArgumentError("average_valuation_price: undefined for Q = 0");
  return pos.p0 * (1.0 - (2.0 / 3.0) * expected_impact(params, pos.Q));
}

/// Expected proceeds of the shares still held once `sold` have gone, with the
/// market remembering the earlier sales (no pause between the two).
inline double remaining_liquidation_value(const Position& pos, const ImpactParams& params, double sold) {
  validate(pos);
  if (!(sold >= 0.0 && sold <= pos.Q))
    throw ArgumentError("remaining_liquidation_value: sold must lie in [0, Q]");
  const double k = params.Y * params.sigma / std::sqrt(params.V);
  const double q32 = pos.Q * std::sqrt(pos.Q);
  const double s32 = sold * std::sqrt(sold);
  return pos.p0 * ((pos.Q - sold) - (2.0 / 3.0) * k * (q32 - s32));
}

/// Everything `impactval value` prints.
struct ValuationSummary {
  double impact = 0.0;           ///< I(Q)
  double mtm_value = 0.0;        ///< Q p0
  double adjusted_value = 0.0;   ///< liquidation_value
  double average_price = 0.0;    ///< NaN when Q = 0
  double haircut = 0.0;          ///< 1 - adjusted / mtm, zero for an empty position
  ValidityReport validity;
};

inline ValuationSummary summarize_valuation(const Position& pos, const ImpactParams& params,
                                            const std::optional<LiquidationSchedule>& schedule = std::nullopt,
                                            const ValidityThresholds& thresholds = {}) {
  validate(pos);
  validate(params);
  ValuationSummary s;
  s.validity = check_validity(params, pos.Q, schedule, thresholds);
  s.impact = s.validity.impact;
  s.mtm_value = pos.mtm_value();
  s.adjusted_value = liquidation_value(pos, params);
  s.average_price = pos.Q > 0.0 ? average_valuation_price(pos, params) : std::nan("");
  s.haircut = pos.Q > 0.0 ? (2.0 / 3.0) * s.impact : 0.0;
  return s;
}

}  // namespace impactval
