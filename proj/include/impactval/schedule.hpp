#pragma once

#include <cmath>
#include <string>

#include "impactval/errors.hpp"

namespace impactval {

/// Uniform liquidation plan: delta_q shares per day until Q is exhausted.
/// T = Q / delta_q days and participation eta = delta_q / V.
class LiquidationSchedule {
public:
  LiquidationSchedule(double Q, double delta_q, double V) : Q_(Q), delta_q_(delta_q), V_(V) {
    if (!(Q >= 0.0)) throw ArgumentError("schedule: Q must be >= 0");
    if (!(delta_q > 0.0)) throw ArgumentError("schedule: delta_q must be > 0");
    if (!(V > 0.0)) throw ArgumentError("schedule: V must be > 0");
  }

  /// Schedule that liquidates Q in exactly `days` equal daily slices.
  static LiquidationSchedule over_days(double Q, int days, double V) {
    if (days < 1) throw ArgumentError("schedule: days must be >= 1");
    if (!(Q > 0.0)) throw ArgumentError("schedule: Q must be > 0 to spread over days");
    return LiquidationSchedule(Q, Q / days, V);
  }

  double Q() const noexcept { return Q_; }
  double delta_q() const noexcept { return delta_q_; }
  double V() const noexcept { return V_; }

  double T() const noexcept { return Q_ / delta_q_; }
  double eta() const noexcept { return delta_q_ / V_; }

  /// Number of simulated trading days; the last one may be a partial slice.
  int trading_days() const {
    const double t = T();
    const double rounded = std::round(t);
    // Q / (Q / n) is not always exactly n.
    if (std::abs(t - rounded) <= 1e-9 * std::max(1.0, rounded)) return static_cast<int>(rounded);
    return static_cast<int>(std::ceil(t));
  }

private:
  double Q_;
  double delta_q_;
  double V_;
};

}  // namespace impactval
