#pragma once

// Summaries of a bankruptcy-probability transition curve: a binomial
// maximum-likelihood probit fit p(I) = Phi((I - center) / scale), plus the
// model-free crossing found by linear interpolation.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "impactval/errors.hpp"

namespace impactval {

struct CurveSample {
  double x = 0.0;       ///< impact
  double p = 0.0;       ///< observed probability
  double trials = 0.0;  ///< weight (number of Monte Carlo trials)
};

struct ProbitFit {
  double center = 0.0;  ///< x where the fitted p = 0.5
  double scale = 0.0;   ///< probit scale; 0 means a perfect step
  bool converged = false;
  int iterations = 0;

  /// x at which the fitted probability equals `level`.
  double quantile(double level) const {
    // Phi^{-1}(level) via bisection on erfc; levels are only 0.1/0.5/0.9 here.
    double lo = -40.0, hi = 40.0;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (0.5 * std::erfc(-mid / std::sqrt(2.0)) < level) lo = mid; else hi = mid;
    }
    return center + scale * 0.5 * (lo + hi);
  }
  /// Distance between the fitted p = 0.1 and p = 0.9 points.
  double width_10_90() const { return quantile(0.9) - quantile(0.1); }
};

namespace detail {
inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }
inline double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }
}  // namespace detail

/// Fits z = a + b x by iteratively reweighted least squares. Separable data
/// (a clean 0 -> 1 step) has no finite maximum; in that case the step location
/// is returned with scale 0 and converged = false.
inline ProbitFit fit_probit(std::span<const CurveSample> samples, int max_iterations = 200) {
  if (samples.size() < 2) throw ArgumentError("fit_probit: need at least two samples");

  // Separation check: every 0 below every 1 and nothing in between.
  bool all_extreme = true;
  double max_zero = -std::numeric_limits<double>::infinity();
  double min_one = std::numeric_limits<double>::infinity();
  for (const auto& s : samples) {
    if (s.p == 0.0) max_zero = std::max(max_zero, s.x);
    else if (s.p == 1.0) min_one = std::min(min_one, s.x);
    else all_extreme = false;
  }
  if (all_extreme && max_zero < min_one) {
    ProbitFit step;
    step.center = std::isfinite(max_zero) && std::isfinite(min_one) ? 0.5 * (max_zero + min_one)
                  : std::isfinite(min_one) ? min_one : max_zero;
    return step;
  }

  // Start from a flat-ish line through the weighted mean.
  double sw = 0.0, sx = 0.0;
  for (const auto& s : samples) { sw += s.trials; sx += s.trials * s.x; }
  double xbar = sx / sw, sxx = 0.0;
  for (const auto& s : samples) sxx += s.trials * (s.x - xbar) * (s.x - xbar);
  double b = sxx > 0.0 ? 1.0 / std::sqrt(sxx / sw) : 1.0;
  double a = -b * xbar;

  ProbitFit fit;
  for (int it = 1; it <= max_iterations; ++it) {
    double w0 = 0.0, w1 = 0.0, w2 = 0.0, z0 = 0.0, z1 = 0.0;
    for (const auto& s : samples) {
      const double eta = a + b * s.x;
      const double mu = std::clamp(detail::normal_cdf(eta), 1e-12, 1.0 - 1e-12);
      const double dens = std::max(detail::normal_pdf(eta), 1e-300);
      const double w = s.trials * dens * dens / (mu * (1.0 - mu));
      const double z = eta + (s.p - mu) / dens;
      w0 += w; w1 += w * s.x; w2 += w * s.x * s.x;
      z0 += w * z; z1 += w * z * s.x;
    }
    const double det = w0 * w2 - w1 * w1;
    if (!(std::abs(det) > 0.0)) break;
    const double a_new = (w2 * z0 - w1 * z1) / det;
    const double b_new = (w0 * z1 - w1 * z0) / det;
    const double change = std::abs(a_new - a) + std::abs(b_new - b);
    a = a_new;
    b = b_new;
    fit.iterations = it;
    if (change <= 1e-12 * (1.0 + std::abs(a) + std::abs(b))) {
      fit.converged = true;
      break;
    }
  }
  if (!(b > 0.0)) throw DomainError("fit_probit: fitted curve is not increasing");
  fit.center = -a / b;
  fit.scale = 1.0 / b;
  return fit;
}

/// First x where the piecewise-linear curve through the samples (in x order)
/// reaches `level`; nullopt if it never does.
inline std::optional<double> interpolated_crossing(std::span<const CurveSample> samples, double level) {
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].p >= level) {
      if (i == 0) return samples[0].x;
      const auto& lo = samples[i - 1];
      const auto& hi = samples[i];
      return lo.x + (level - lo.p) * (hi.x - lo.x) / (hi.p - lo.p);
    }
  }
  return std::nullopt;
}

}  // namespace impactval
