#pragma once

// Noisy liquidation paths and Monte Carlo bankruptcy probabilities.
//
// Price on day t while selling delta_q per day, with s(t) shares sold so far:
//   p(t+1) = p(t) - p0 [I(s(t) + delta_q) - I(s(t))] + p0 sigma n(t)
// with n(t) i.i.d. standard normal. The deterministic part telescopes to
// p0 (1 - I(s)), which is how it is evaluated.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "impactval/errors.hpp"
#include "impactval/impact.hpp"
#include "impactval/leverage.hpp"
#include "impactval/random.hpp"
#include "impactval/schedule.hpp"
#include "impactval/valuation.hpp"

namespace impactval {

enum class BankruptcyMode { AtEnd, AnywhereOnPath };

inline const char* to_string(BankruptcyMode m) noexcept {
  return m == BankruptcyMode::AtEnd ? "at-end" : "anywhere";
}

struct MonteCarloConfig {
  Position position;
  ImpactParams params;
  LiquidationSchedule schedule{0.0, 1.0, 1.0};
  std::uint64_t n_trials = 1;
  std::uint64_t master_seed = 0;
  BankruptcyMode bankruptcy_mode = BankruptcyMode::AtEnd;
  /// Multiplies sigma in the noise term only; 0 gives the expected path.
  double noise_scale = 1.0;
  /// False drops the impact drift, leaving a driftless random walk.
  bool impact_enabled = true;
  /// Worker threads; 0 picks hardware concurrency. Never changes the result.
  unsigned threads = 0;
};

inline void validate(const MonteCarloConfig& c) {
  validate(c.position);
  validate(c.params);
  if (c.n_trials < 1) throw ArgumentError("monte carlo: n_trials must be >= 1");
  if (!(c.noise_scale >= 0.0)) throw ArgumentError("monte carlo: noise_scale must be >= 0");
  if (std::abs(c.schedule.Q() - c.position.Q) > 1e-12 * std::max(1.0, c.position.Q))
    throw ArgumentError("monte carlo: schedule and position disagree on Q");
  if (std::abs(c.schedule.V() - c.params.V) > 1e-12 * c.params.V)
    throw ArgumentError("monte carlo: schedule and params disagree on V");
}

struct PricePath {
  std::vector<double> prices;     ///< p(0) = p0, then one entry per trading day
  std::vector<double> proceeds;   ///< cash from each day's sale, at that day's closing price
  double total_proceeds = 0.0;
  bool bankrupt_at_end = false;
  bool bankrupt_anywhere = false;
  std::uint64_t negative_price_days = 0;
};

namespace detail {

struct TrialOutcome {
  bool bankrupt_at_end = false;
  bool bankrupt_anywhere = false;
  std::uint64_t negative_price_days = 0;
  std::uint64_t days = 0;
};

/// Runs one trial, calling on_day(price, day_proceeds) after each day.
template <typename OnDay>
TrialOutcome run_trial(const MonteCarloConfig& c, std::uint64_t trial_index, OnDay&& on_day) {
  const Position& pos = c.position;
  const double noise_sd = pos.p0 * c.params.sigma * c.noise_scale;
  const int days = pos.Q > 0.0 ? c.schedule.trading_days() : 0;

  CounterRng rng = CounterRng::for_trial(c.master_seed, trial_index);
  std::normal_distribution<double> gauss(0.0, 1.0);

  TrialOutcome out;
  out.days = static_cast<std::uint64_t>(days);
  double sold = 0.0;
  double noise = 0.0;
  double proceeds = 0.0;
  for (int day = 0; day < days; ++day) {
    const bool last = day + 1 == days;
    const double slice = last ? pos.Q - sold : std::min(c.schedule.delta_q(), pos.Q - sold);
    sold = last ? pos.Q : sold + slice;
    if (noise_sd > 0.0) noise += noise_sd * gauss(rng);
    const double drift = c.impact_enabled ? expected_impact(c.params, sold) : 0.0;
    const double price = pos.p0 * (1.0 - drift) + noise;
    if (price < 0.0) ++out.negative_price_days;
    proceeds += slice * price;
    on_day(price, slice * price);
    if (proceeds + (pos.Q - sold) * price < pos.L) out.bankrupt_anywhere = true;
  }
  out.bankrupt_at_end = proceeds < pos.L;
  // The last day leaves nothing held, so the path test includes the end test.
  out.bankrupt_anywhere = out.bankrupt_anywhere || out.bankrupt_at_end;
  return out;
}

}  // namespace detail

/// Full price path of one trial. Deterministic in (master_seed, trial_index).
inline PricePath simulate_price_path(const MonteCarloConfig& config, std::uint64_t trial_index) {
  validate(config);
  PricePath path;
  path.prices.push_back(config.position.p0);
  const auto outcome = detail::run_trial(config, trial_index, [&](double price, double cash) {
    path.prices.push_back(price);
    path.proceeds.push_back(cash);
    path.total_proceeds += cash;
  });
  path.bankrupt_at_end = outcome.bankrupt_at_end;
  path.bankrupt_anywhere = outcome.bankrupt_anywhere;
  path.negative_price_days = outcome.negative_price_days;
  return path;
}

struct MonteCarloResult {
  double p_bankrupt = 0.0;
  double std_error = 0.0;
  std::uint64_t n_trials = 0;
  std::uint64_t bankrupt_trials = 0;
  std::uint64_t negative_price_trials = 0;
  std::uint64_t negative_price_days = 0;
  std::uint64_t simulated_days = 0;

  /// More than 0.1% of simulated days closed at a negative price.
  bool negative_price_warning() const noexcept {
    return simulated_days > 0 &&
           static_cast<double>(negative_price_days) > 1e-3 * static_cast<double>(simulated_days);
  }
};

inline double binomial_std_error(double p, std::uint64_t n) {
  return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

inline MonteCarloResult bankruptcy_probability(const MonteCarloConfig& config) {
  validate(config);
  struct Tally {
    std::uint64_t bankrupt = 0, negative_trials = 0, negative_days = 0, days = 0;
  };
  auto run_range = [&config](std::uint64_t begin, std::uint64_t end, Tally& tally) {
    for (std::uint64_t i = begin; i < end; ++i) {
      const auto o = detail::run_trial(config, i, [](double, double) {});
      const bool bankrupt =
          config.bankruptcy_mode == BankruptcyMode::AtEnd ? o.bankrupt_at_end : o.bankrupt_anywhere;
      tally.bankrupt += bankrupt ? 1 : 0;
      tally.negative_trials += o.negative_price_days > 0 ? 1 : 0;
      tally.negative_days += o.negative_price_days;
      tally.days += o.days;
    }
  };

  unsigned threads = config.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : config.threads;
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, config.n_trials));
  std::vector<Tally> tallies(threads);
  if (threads == 1) {
    run_range(0, config.n_trials, tallies[0]);
  } else {
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    const std::uint64_t chunk = (config.n_trials + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::uint64_t begin = std::min(config.n_trials, t * chunk);
      const std::uint64_t end = std::min(config.n_trials, begin + chunk);
      workers.emplace_back([&, begin, end, t] { run_range(begin, end, tallies[t]); });
    }
  }

  Tally total;
  for (const auto& t : tallies) {
    total.bankrupt += t.bankrupt;
    total.negative_trials += t.negative_trials;
    total.negative_days += t.negative_days;
    total.days += t.days;
  }
  MonteCarloResult r;
  r.n_trials = config.n_trials;
  r.bankrupt_trials = total.bankrupt;
  r.p_bankrupt = static_cast<double>(total.bankrupt) / static_cast<double>(config.n_trials);
  r.std_error = binomial_std_error(r.p_bankrupt, config.n_trials);
  r.negative_price_trials = total.negative_trials;
  r.negative_price_days = total.negative_days;
  r.simulated_days = total.days;
  return r;
}

/// How transition_curve turns a (calI, eta) pair into a concrete position.
/// V and sigma are held fixed across the grid; Q then follows from calI and
/// T from eta.
struct TransitionOptions {
  double Y = 1.0;
  double V = 1e6;
  double p0 = 1.0;
  /// Daily volatility. When absent it is chosen so that liquidating at the
  /// critical impact takes `days_at_critical` days.
  std::optional<double> sigma;
  double days_at_critical = 100.0;
  BankruptcyMode mode = BankruptcyMode::AtEnd;
  double noise_scale = 1.0;
  unsigned threads = 0;
};

struct TransitionPoint {
  double calI = 0.0;
  bool feasible = true;
  std::string error;          ///< why the point was skipped, when infeasible
  double Q = 0.0;
  int days = 0;
  double eta_effective = 0.0; ///< delta_q / V after rounding T to whole days
  MonteCarloResult with_impact;
  MonteCarloResult without_impact;
};

/// Daily sigma used by transition_curve for a given lambda0 and eta.
inline double transition_sigma(double lambda0, double eta, const TransitionOptions& opt) {
  if (opt.sigma) return *opt.sigma;
  // T = (calI / (Y sigma))^2 / eta  at calI = I_c.
  return critical_impact(lambda0) / (opt.Y * std::sqrt(eta * opt.days_at_critical));
}

inline std::vector<TransitionPoint> transition_curve(double lambda0, double eta, std::span<const double> calI_grid,
                                                     std::uint64_t n_trials, std::uint64_t master_seed,
                                                     const TransitionOptions& opt = {}) {
  if (calI_grid.empty()) throw ArgumentError("transition_curve: empty impact grid");
  if (!(lambda0 > 1.0)) throw ArgumentError("transition_curve: lambda0 must be > 1");
  if (!(eta > 0.0)) throw ArgumentError("transition_curve: eta must be > 0");
  if (n_trials < 1) throw ArgumentError("transition_curve: n_trials must be >= 1");
  const double sigma = transition_sigma(lambda0, eta, opt);
  if (!(sigma > 0.0)) throw ArgumentError("transition_curve: sigma must be > 0");

  std::vector<TransitionPoint> out;
  out.reserve(calI_grid.size());
  for (double calI : calI_grid) {
    TransitionPoint pt;
    pt.calI = calI;
    if (!(calI >= 0.0) || !std::isfinite(calI)) {
      pt.feasible = false;
      pt.error = "impact must be >= 0";
      out.push_back(pt);
      continue;
    }
    const double ratio = calI / (opt.Y * sigma);
    pt.Q = opt.V * ratio * ratio;
    const double T = pt.Q / (eta * opt.V);
    if (pt.Q > 0.0 && T < 1.0) {
      pt.feasible = false;
      pt.error = "liquidation shorter than one day (T < 1)";
      out.push_back(pt);
      continue;
    }

    MonteCarloConfig c;
    c.params.Y = opt.Y;
    c.params.sigma = sigma;
    c.params.V = opt.V;
    c.position = Position::held(pt.Q, opt.p0, pt.Q * opt.p0 * (1.0 - 1.0 / lambda0));
    if (pt.Q > 0.0) {
      pt.days = static_cast<int>(std::lround(T));
      c.schedule = LiquidationSchedule::over_days(pt.Q, pt.days, opt.V);
      pt.eta_effective = c.schedule.eta();
    } else {
      c.schedule = LiquidationSchedule(0.0, 1.0, opt.V);
      pt.eta_effective = eta;
    }
    c.n_trials = n_trials;
    c.master_seed = master_seed;
    c.bankruptcy_mode = opt.mode;
    c.noise_scale = opt.noise_scale;
    c.threads = opt.threads;
    pt.with_impact = bankruptcy_probability(c);
    c.impact_enabled = false;
    pt.without_impact = bankruptcy_probability(c);
    out.push_back(pt);
  }
  return out;
}

}  // namespace impactval
