#pragma once

// Plot-ready CSV for leverage trajectories and bankruptcy transition curves.
// Divergent leverage is written as the literal "inf".

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "impactval/format.hpp"
#include "impactval/leverage.hpp"
#include "impactval/montecarlo.hpp"

namespace impactval {

inline constexpr const char* kTrajectoryHeader = "x,q_held,marginal_price,cash,lambda_noimpact,lambda_mtm,lambda_adj";

inline void write_trajectory_row(std::ostream& out, const TrajectoryPoint& p) {
  out << format_number(p.x) << ',' << format_number(p.q_held) << ',' << format_number(p.marginal_price) << ','
      << format_number(p.cash) << ',' << format_number(p.lambda_noimpact) << ',' << format_number(p.lambda_mtm)
      << ',' << format_number(p.lambda_adj) << '\n';
}

inline void write_trajectory_csv(std::ostream& out, std::span<const TrajectoryPoint> points) {
  out << kTrajectoryHeader << '\n';
  for (const auto& p : points) write_trajectory_row(out, p);
}

/// Both legs of a round trip, distinguished by a leading "leg" column.
inline void write_round_trip_csv(std::ostream& out, const RoundTrip& rt) {
  out << "leg," << kTrajectoryHeader << '\n';
  for (const auto& p : rt.entry) {
    out << "entry,";
    write_trajectory_row(out, p);
  }
  for (const auto& p : rt.exit) {
    out << "exit,";
    write_trajectory_row(out, p);
  }
}

inline constexpr const char* kTransitionHeader = "calI,p_bankrupt,std_error,p_bankrupt_noimpact";

/// Infeasible grid points keep their row with "infeasible" in every value column.
/// With `eta` set, a leading eta column is added so several curves can share a file.
inline void write_transition_csv(std::ostream& out, std::span<const TransitionPoint> points,
                                 std::optional<double> eta = std::nullopt, bool header = true) {
  if (header) out << (eta ? "eta," : "") << kTransitionHeader << '\n';
  for (const auto& p : points) {
    if (eta) out << format_number(*eta) << ',';
    out << format_number(p.calI) << ',';
    if (!p.feasible) {
      out << "infeasible,infeasible,infeasible\n";
      continue;
    }
    out << format_number(p.with_impact.p_bankrupt) << ',' << format_number(p.with_impact.std_error) << ','
        << format_number(p.without_impact.p_bankrupt) << '\n';
  }
}

}  // namespace impactval
