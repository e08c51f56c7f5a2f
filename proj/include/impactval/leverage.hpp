#pragma once

// Leverage along deleveraging and round-trip paths, and the critical-leverage
// analysis: initial rise, crossover back to the starting leverage, and the
// bankruptcy point where the remaining value no longer covers the debt.

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "impactval/errors.hpp"
#include "impactval/impact.hpp"
#include "impactval/roots.hpp"
#include "impactval/valuation.hpp"

namespace impactval {

/// Leverage value standing for "equity exhausted". Carried as data in
/// trajectories, never thrown.
inline constexpr double kDivergent = std::numeric_limits<double>::infinity();

inline bool is_divergent(double lambda) noexcept { return std::isinf(lambda) && lambda > 0; }

/// asset / (asset - debt). Debt-free holdings (including empty ones) have
/// leverage 1; zero or negative equity is divergent.
inline double leverage_ratio(double asset, double debt) noexcept {
  if (debt <= 0.0) return 1.0;
  const double equity = asset - debt;
  if (equity <= 0.0) return kDivergent;
  return asset / equity;
}

/// Mark-to-market leverage Qp / (Qp - L).
inline double mtm_leverage(double Q, double p, double L) {
  if (!(Q >= 0.0) || !(p > 0.0) || !(L >= 0.0))
    throw ArgumentError("mtm_leverage: need Q >= 0, p > 0, L >= 0");
  return leverage_ratio(Q * p, L);
}

/// Expected cash raised after selling q_sold of the Q shares:
/// p0 q (1 - 2/3 I(Q) sqrt(q/Q)).
inline double cash_raised(const Position& pos, const ImpactParams& params, double q_sold) {
  validate(pos);
  if (!(q_sold >= 0.0 && q_sold <= pos.Q)) throw ArgumentError("cash_raised: q_sold must lie in [0, Q]");
  if (q_sold == 0.0) return 0.0;
  const double total_impact = expected_impact(params, pos.Q);
  return pos.p0 * q_sold * (1.0 - (2.0 / 3.0) * total_impact * std::sqrt(q_sold / pos.Q));
}

/// One sample of a leverage path.
struct TrajectoryPoint {
  double x = 0.0;               ///< fraction of the position transacted
  double q_held = 0.0;
  double marginal_price = 0.0;
  double cash = 0.0;            ///< cash raised (exit) or spent (entry)
  double lambda_mtm = 0.0;
  double lambda_noimpact = 0.0;
  double lambda_adj = 0.0;
};

/// n evenly spaced points covering [0, 1], endpoints included.
inline std::vector<double> uniform_grid(std::size_t n) {
  if (n < 2) throw ArgumentError("uniform_grid: need at least 2 points");
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) grid[i] = static_cast<double>(i) / static_cast<double>(n - 1);
  grid.back() = 1.0;
  return grid;
}

/// Mark-to-market leverage after selling a fraction x of a position that
/// started at leverage lambda0 with total impact calI:
///   lambda0 (1-x)(1 - calI sqrt x) / (1 - lambda0 calI sqrt x (1 - x/3)).
/// Divergent wherever the denominator is not positive.
inline double deleverage_leverage(double lambda0, double calI, double x) {
  const double u = std::sqrt(x);
  const double denominator = 1.0 - lambda0 * calI * u * (1.0 - x / 3.0);
  if (denominator <= 0.0) return kDivergent;
  return lambda0 * (1.0 - x) * (1.0 - calI * u) / denominator;
}

/// First-order behaviour of deleverage_leverage near x = 0.
inline double small_x_expansion(double lambda0, double calI, double x) {
  if (!(x >= 0.0)) throw ArgumentError("small_x_expansion: x must be >= 0");
  return lambda0 * (1.0 + (lambda0 - 1.0) * calI * std::sqrt(x));
}

/// Unit position (Q = 1, p0 = 1) with leverage lambda0 and total impact calI.
/// Useful whenever only the dimensionless pair matters.
struct NormalizedPosition {
  Position position;
  ImpactParams params;
};

inline NormalizedPosition normalized_position(double lambda0, double calI) {
  if (!(lambda0 >= 1.0) || !std::isfinite(lambda0)) throw ArgumentError("lambda0 must be >= 1");
  if (!(calI >= 0.0) || !std::isfinite(calI)) throw ArgumentError("calI must be >= 0");
  NormalizedPosition n;
  n.position = Position::held(1.0, 1.0, 1.0 - 1.0 / lambda0);
  n.params.Y = 1.0;
  n.params.sigma = calI;
  n.params.V = 1.0;
  return n;
}

/// Impact-adjusted leverage during exit, R / (R - L + C) with R the value of
/// the remaining shares and C the cash raised so far. R + C is the full
/// liquidation value, so the denominator does not depend on `sold`.
inline double impact_adjusted_leverage_exit(const Position& pos, const ImpactParams& params, double sold) {
  validate(pos);
  if (!(sold >= 0.0 && sold <= pos.Q))
    throw ArgumentError("impact_adjusted_leverage_exit: sold must lie in [0, Q]");
  const double remaining = remaining_liquidation_value(pos, params, sold);
  const double equity = remaining - pos.L + cash_raised(pos, params, sold);
  if (equity <= 0.0) return kDivergent;
  return remaining / equity;
}

inline std::vector<TrajectoryPoint> deleverage_trajectory(double lambda0, double calI,
                                                          std::span<const double> grid) {
  const auto unit = normalized_position(lambda0, calI);
  std::vector<TrajectoryPoint> out;
  out.reserve(grid.size());
  for (double x : grid) {
    if (!(x >= 0.0 && x <= 1.0)) throw ArgumentError("deleverage_trajectory: grid points must lie in [0, 1]");
    TrajectoryPoint pt;
    pt.x = x;
    pt.q_held = 1.0 - x;
    pt.marginal_price = 1.0 - calI * std::sqrt(x);
    pt.cash = cash_raised(unit.position, unit.params, x);
    pt.lambda_mtm = deleverage_leverage(lambda0, calI, x);
    pt.lambda_noimpact = lambda0 * (1.0 - x);
    pt.lambda_adj = impact_adjusted_leverage_exit(unit.position, unit.params, x);
    out.push_back(pt);
  }
  return out;
}

enum class Regime { Subcritical, Critical, Supercritical };

inline const char* to_string(Regime r) noexcept {
  switch (r) {
    case Regime::Subcritical: return "SUBCRITICAL";
    case Regime::Critical: return "CRITICAL";
    case Regime::Supercritical: return "SUPERCRITICAL";
  }
  return "?";
}

/// Absolute tolerance on lambda0 * calI - 3/2 inside which a pair counts as
/// exactly critical.
inline constexpr double kCriticalTolerance = 1e-12;

inline Regime classify(double lambda0, double calI) noexcept {
  const double gap = lambda0 * calI - 1.5;
  if (std::abs(gap) <= kCriticalTolerance) return Regime::Critical;
  return gap < 0.0 ? Regime::Subcritical : Regime::Supercritical;
}

/// Critical total impact for a starting leverage: 3 / (2 lambda0).
inline double critical_impact(double lambda0) {
  if (!(lambda0 > 0.0)) throw ArgumentError("critical_impact: lambda0 must be > 0");
  return 1.5 / lambda0;
}

/// Leverage above which liquidating a position with total impact calI diverges.
inline double critical_leverage_for_impact(double calI) {
  if (!(calI > 0.0)) throw ArgumentError("critical_leverage: total impact must be > 0");
  return 1.5 / calI;
}

/// Critical leverage from volume-based impact: 3 / (2 Y sigma) sqrt(V/Q).
inline double critical_leverage(const ImpactParams& params, double Q) {
  if (!(params.Y > 0.0) || !(params.sigma > 0.0) || !(params.V > 0.0) || !(Q > 0.0))
    throw ArgumentError("critical_leverage: Y, sigma, V and Q must be > 0");
  return 1.5 / (params.Y * params.sigma) * std::sqrt(params.V / Q);
}

/// Critical leverage from spread-based impact: 3 / (2 Y b S sqrt N).
inline double critical_leverage_from_spread(double Y, double b, double S, double N) {
  if (!(N > 0.0)) throw ArgumentError("critical_leverage_from_spread: N must be > 0");
  return 1.5 / impact_from_spread(Y, b, S, N);
}

/// The printed closed-form expression for the crossover point, kept only to
/// cross-check the root found on the trajectory. NaN where it is undefined.
inline double crossover_closed_form_printed(double lambda0, double calI) {
  const double disc = 1.0 - (4.0 / 3.0) * (lambda0 - 1.0) * (3.0 - lambda0) * calI * calI;
  const double inner = (1.0 - std::sqrt(disc)) / ((2.0 - lambda0 / 3.0) * calI);
  return std::sqrt(inner);
}

struct CrossoverResult {
  double x_star = 0.0;
  double closed_form = 0.0;             ///< crossover_closed_form_printed, may be NaN
  double relative_disagreement = 0.0;   ///< |closed_form - x_star| / x_star, +inf if NaN
  bool closed_form_agrees = false;      ///< relative_disagreement <= 1e-6
};

/// First x in (0, 1) where the deleveraging leverage falls back to lambda0.
/// Found by bisection on (lambda(u^2) - lambda0) / u over u = sqrt(x); the
/// division removes the trivial root at x = 0 and keeps the sign near it.
inline CrossoverResult crossover_point(double lambda0, double calI) {
  if (!(lambda0 >= 1.0) || !(calI >= 0.0)) throw ArgumentError("crossover_point: need lambda0 >= 1, calI >= 0");
  if (classify(lambda0, calI) != Regime::Subcritical)
    throw DomainError("crossover_point: only defined for subcritical positions (lambda0 * calI < 3/2)");

  CrossoverResult r;
  if (lambda0 == 1.0 || calI == 0.0) {
    // Leverage falls (or stays flat) from the first sale.
    r.x_star = 0.0;
  } else {
    const double slope_at_zero = lambda0 * (lambda0 - 1.0) * calI;
    auto excess = [&](double u) {
      if (u == 0.0) return slope_at_zero;
      return (deleverage_leverage(lambda0, calI, u * u) - lambda0) / u;
    };
    const double u = roots::bisect(excess, 0.0, 1.0, 0.0);
    r.x_star = u * u;
  }
  r.closed_form = crossover_closed_form_printed(lambda0, calI);
  if (std::isnan(r.closed_form)) {
    r.relative_disagreement = std::numeric_limits<double>::infinity();
  } else if (r.x_star == 0.0) {
    r.relative_disagreement = r.closed_form == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  } else {
    r.relative_disagreement = std::abs(r.closed_form - r.x_star) / r.x_star;
  }
  r.closed_form_agrees = r.relative_disagreement <= 1e-6;
  return r;
}

/// Fraction sold at which the deleveraging leverage diverges, i.e. the
/// smallest u = sqrt(x) in (0, 1] with lambda0 calI u (1 - u^2/3) = 1.
/// Absent for subcritical pairs; exactly 1 at criticality.
inline std::optional<double> bankruptcy_point(double lambda0, double calI) {
  if (!(lambda0 > 1.0) || !(calI > 0.0)) return std::nullopt;
  switch (classify(lambda0, calI)) {
    case Regime::Subcritical: return std::nullopt;
    case Regime::Critical: return 1.0;
    case Regime::Supercritical: break;
  }
  const double k = lambda0 * calI;
  auto h = [k](double u) { return k * u * (1.0 - u * u / 3.0) - 1.0; };
  const double u = roots::bisect(h, 0.0, 1.0, 1e-12);
  return u * u;
}

struct CriticalityReport {
  double calI = 0.0;
  double lambda0 = 0.0;
  Regime regime = Regime::Subcritical;
  std::optional<CrossoverResult> crossover;  ///< subcritical only
  std::optional<double> x_c;                 ///< critical or supercritical
  double I_c = 0.0;
  std::optional<double> lambda_c;            ///< needs calI > 0
};

inline CriticalityReport assess_criticality(double lambda0, double calI) {
  if (!(lambda0 >= 1.0) || !(calI >= 0.0)) throw ArgumentError("assess_criticality: need lambda0 >= 1, calI >= 0");
  CriticalityReport r;
  r.calI = calI;
  r.lambda0 = lambda0;
  r.regime = classify(lambda0, calI);
  r.I_c = critical_impact(lambda0);
  if (calI > 0.0) r.lambda_c = critical_leverage_for_impact(calI);
  if (r.regime == Regime::Subcritical) {
    r.crossover = crossover_point(lambda0, calI);
  } else {
    r.x_c = bankruptcy_point(lambda0, calI);
  }
  return r;
}

struct RoundTrip {
  std::vector<TrajectoryPoint> entry;  ///< q_held rises 0 -> Q
  std::vector<TrajectoryPoint> exit;   ///< q_held falls Q -> 0
};

/// Leverage while building a position from equity E0 and then unwinding it.
///
/// Both legs treat leverage as holding value over (holding value - debt),
/// where debt is what is owed net of cash raised; idle cash is not equity.
/// Entry buys at p0 (1 + I(q)) and borrows once spending exceeds E0. The
/// impact-adjusted holding value on entry uses p0 (1 - 2/3 I(q)), the price
/// if buying stopped and q were sold. The exit leg starts from the position
/// (Q, p0, L) and matches the deleveraging formula while debt is
/// outstanding.
inline RoundTrip entry_exit_trajectories(const Position& pos, const ImpactParams& params,
                                         std::size_t grid_size) {
  validate(pos);
  validate(params);
  if (!(pos.E0 > 0.0)) throw ArgumentError("entry_exit_trajectories: E0 must be > 0");
  const auto grid = uniform_grid(grid_size);

  RoundTrip out;
  out.entry.reserve(grid_size);
  out.exit.reserve(grid_size);

  for (double x : grid) {
    const double q = pos.Q * x;
    const double impact = expected_impact(params, q);
    const double spent = pos.p0 * q * (1.0 + (2.0 / 3.0) * impact);
    const double debt = std::max(0.0, spent - pos.E0);
    const double debt_noimpact = std::max(0.0, q * pos.p0 - pos.E0);
    TrajectoryPoint pt;
    pt.x = x;
    pt.q_held = q;
    pt.marginal_price = pos.p0 * (1.0 + impact);
    pt.cash = spent;
    pt.lambda_noimpact = leverage_ratio(q * pos.p0, debt_noimpact);
    pt.lambda_mtm = leverage_ratio(q * pt.marginal_price, debt);
    pt.lambda_adj = leverage_ratio(q * pos.p0 * (1.0 - (2.0 / 3.0) * impact), debt);
    out.entry.push_back(pt);
  }

  for (double x : grid) {
    const double sold = pos.Q * x;
    const double held = pos.Q - sold;
    const double cash = cash_raised(pos, params, sold);
    const double debt = std::max(0.0, pos.L - cash);
    const double debt_noimpact = std::max(0.0, pos.L - sold * pos.p0);
    TrajectoryPoint pt;
    pt.x = x;
    pt.q_held = held;
    pt.marginal_price = pos.p0 * (1.0 - expected_impact(params, sold));
    pt.cash = cash;
    pt.lambda_noimpact = leverage_ratio(held * pos.p0, debt_noimpact);
    pt.lambda_mtm = leverage_ratio(held * pt.marginal_price, debt);
    pt.lambda_adj = leverage_ratio(remaining_liquidation_value(pos, params, sold), debt);
    out.exit.push_back(pt);
  }
  return out;
}

}  // namespace impactval
