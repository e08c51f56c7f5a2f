#pragma once

// Square-root market impact: volume-based and spread-based estimates plus
// the domain-of-validity checks that go with them.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "impactval/errors.hpp"
#include "impactval/schedule.hpp"

namespace impactval {

/// Liquidity and impact coefficients for a single asset. All fractions are
/// decimal (0.02 means 2%). V, v and the position size must share units.
struct ImpactParams {
  double Y = 1.0;      ///< impact prefactor, order unity
  double sigma = 0.0;  ///< daily volatility
  double V = 0.0;      ///< daily traded volume

  std::optional<double> S;    ///< bid-ask spread as a fraction of price
  std::optional<double> v;    ///< typical volume at the best quotes
  std::optional<double> b;    ///< spread-volatility coefficient, typically 0.6 to 0.9
  std::optional<double> phi;  ///< transactions per day

  bool has_spread_inputs() const noexcept { return S && v && b; }
};

/// Throws ArgumentError when a field violates its bounds. Y = 0 or sigma = 0
/// are accepted and mean "no impact".
inline void validate(const ImpactParams& p) {
  if (!(p.Y >= 0.0) || !std::isfinite(p.Y)) throw ArgumentError("impact params: Y must be >= 0");
  if (!(p.sigma >= 0.0) || !std::isfinite(p.sigma)) throw ArgumentError("impact params: sigma must be >= 0");
  if (!(p.V > 0.0) || !std::isfinite(p.V)) throw ArgumentError("impact params: V must be > 0");
  if (p.S && !(*p.S > 0.0)) throw ArgumentError("impact params: S must be > 0");
  if (p.v && !(*p.v > 0.0)) throw ArgumentError("impact params: v must be > 0");
  if (p.b && !(*p.b > 0.0)) throw ArgumentError("impact params: b must be > 0");
  if (p.phi && !(*p.phi > 0.0)) throw ArgumentError("impact params: phi must be > 0");
}

/// True when b lies outside the empirically observed 0.6 to 0.9 band.
inline bool b_outside_typical_band(const ImpactParams& p) {
  return p.b && (*p.b < 0.6 || *p.b > 0.9);
}

enum class TradeDirection : int { Buy = +1, Sell = -1 };

inline int sign(TradeDirection d) noexcept { return static_cast<int>(d); }

/// Expected relative price move after executing q shares: Y sigma sqrt(q/V).
inline double expected_impact(const ImpactParams& params, double q) {
  if (!(q >= 0.0)) throw ArgumentError("expected_impact: q must be >= 0");
  return params.Y * params.sigma * std::sqrt(q / params.V);
}

/// Volatility over a horizon of T days from the spread and trade frequency.
inline double volatility_from_spread(double b, double S, double phi, double T) {
  if (!(b > 0.0) || !(S > 0.0) || !(phi > 0.0))
    throw ArgumentError("volatility_from_spread: b, S and phi must be > 0");
  if (!(T >= 0.0)) throw ArgumentError("volatility_from_spread: T must be >= 0");
  return b * S * std::sqrt(phi * T);
}

/// Impact of a position needing N = Q/v best-quote-sized executions.
/// Independent of the liquidation horizon.
inline double impact_from_spread(double Y, double b, double S, double N) {
  if (!(Y > 0.0) || !(b > 0.0) || !(S > 0.0))
    throw ArgumentError("impact_from_spread: Y, b and S must be > 0");
  if (!(N >= 0.0)) throw ArgumentError("impact_from_spread: N must be >= 0");
  return Y * b * S * std::sqrt(N);
}

/// Spread-based impact of a Q-share position, using the optional fields.
inline double impact_from_spread(const ImpactParams& params, double Q) {
  if (!params.has_spread_inputs())
    throw ArgumentError("impact_from_spread: params need S, v and b");
  if (!(Q >= 0.0)) throw ArgumentError("impact_from_spread: Q must be >= 0");
  return impact_from_spread(params.Y, *params.b, *params.S, Q / *params.v);
}

enum class Validity { Ok, WarnLargeImpact, WarnLargeParticipation };

inline const char* to_string(Validity v) noexcept {
  switch (v) {
    case Validity::Ok: return "OK";
    case Validity::WarnLargeImpact: return "WARN_LARGE_IMPACT";
    case Validity::WarnLargeParticipation: return "WARN_LARGE_PARTICIPATION";
  }
  return "?";
}

struct ValidityThresholds {
  double max_impact = 0.20;
  double max_participation = 0.20;
};

/// Outcome of check_validity. Warnings are informational; nothing is clamped.
struct ValidityReport {
  double impact = 0.0;
  std::optional<double> participation;
  std::vector<Validity> warnings;

  bool ok() const noexcept { return warnings.empty(); }
  bool has(Validity v) const noexcept {
    for (auto w : warnings)
      if (w == v) return true;
    return false;
  }
  /// The most severe flag; WarnLargeImpact wins over participation.
  Validity primary() const noexcept { return warnings.empty() ? Validity::Ok : warnings.front(); }
};

inline ValidityReport check_validity(const ImpactParams& params, double Q,
                                     const std::optional<LiquidationSchedule>& schedule = std::nullopt,
                                     const ValidityThresholds& thresholds = {}) {
  ValidityReport r;
  r.impact = expected_impact(params, Q);
  if (r.impact > thresholds.max_impact) r.warnings.push_back(Validity::WarnLargeImpact);
  if (schedule) {
    r.participation = schedule->delta_q() / params.V;
    if (*r.participation > thresholds.max_participation)
      r.warnings.push_back(Validity::WarnLargeParticipation);
  }
  return r;
}

/// Expected execution outcome of a q-share trade in a given direction.
struct ImpactQuote {
  double relative_impact = 0.0;
  double pre_trade_price = 0.0;
  double expected_final_price = 0.0;
  Validity validity = Validity::Ok;
};

inline ImpactQuote quote(const ImpactParams& params, double q, double p0, TradeDirection dir,
                         const ValidityThresholds& thresholds = {}) {
  if (!(p0 > 0.0)) throw ArgumentError("quote: p0 must be > 0");
  ImpactQuote out;
  out.relative_impact = expected_impact(params, q);
  out.pre_trade_price = p0;
  out.expected_final_price = p0 * (1.0 + sign(dir) * out.relative_impact);
  out.validity = check_validity(params, q, std::nullopt, thresholds).primary();
  return out;
}

}  // namespace impactval
