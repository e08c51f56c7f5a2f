#pragma once

// Test-only reference computations. Nothing here calls into the library's
// implementation of the quantity being checked.

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

namespace oracle {

/// Composite midpoint rule with n panels, accumulated in long double.
inline double midpoint(const std::function<long double(long double)>& f, long double a, long double b,
                       std::size_t n) {
  const long double h = (b - a) / static_cast<long double>(n);
  long double sum = 0.0L;
  for (std::size_t i = 0; i < n; ++i) sum += f(a + (static_cast<long double>(i) + 0.5L) * h);
  return static_cast<double>(sum * h);
}

/// First grid point x_i (i = 1..n on (a, b]) where f(x_i) changes sign with
/// respect to f(a+) . Returns the midpoint of the bracketing cell.
inline std::optional<double> first_sign_change(const std::function<double(double)>& f, double a, double b,
                                               std::size_t n) {
  const double h = (b - a) / static_cast<double>(n);
  double prev_x = a + h * 1e-3;
  bool prev_sign = std::signbit(f(prev_x));
  for (std::size_t i = 1; i <= n; ++i) {
    const double x = a + h * static_cast<double>(i);
    const bool s = std::signbit(f(x));
    if (s != prev_sign) return 0.5 * (prev_x + x);
    prev_x = x;
  }
  return std::nullopt;
}

/// Deleveraging leverage written out independently, in long double.
inline long double deleverage(long double lambda0, long double calI, long double x) {
  const long double u = std::sqrt(x);
  return lambda0 * (1 - x) * (1 - calI * u) / (1 - lambda0 * calI * u * (1 - x / 3));
}

/// Crossover from the quadratic in u = sqrt(x) obtained by setting
/// lambda(x) = lambda0 and cancelling the root at u = 0:
///   calI (1 - lambda0/3) u^2 - u + (lambda0 - 1) calI = 0.
inline double crossover_quadratic(double lambda0, double calI) {
  const long double a = calI * (1.0L - lambda0 / 3.0L);
  const long double c = (lambda0 - 1.0L) * calI;
  long double u;
  if (std::fabs(a) < 1e-300L) {
    u = c;
  } else {
    // Small root written to avoid cancellation: 2c / (1 + sqrt(1 - 4ac)).
    u = 2 * c / (1 + std::sqrt(1 - 4 * a * c));
  }
  return static_cast<double>(u * u);
}

/// EMA from explicit weights, oldest value first.
inline double ema(const std::vector<double>& values, double halflife) {
  long double num = 0, den = 0;
  const std::size_t n = values.size();
  for (std::size_t i = 0; i < n; ++i) {
    const long double lag = static_cast<long double>(n - 1 - i);
    const long double w = std::pow(2.0L, -lag / halflife);
    num += w * values[i];
    den += w;
  }
  return static_cast<double>(num / den);
}

}  // namespace oracle
