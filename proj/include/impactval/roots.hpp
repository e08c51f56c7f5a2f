#pragma once

#include <cmath>

#include "impactval/errors.hpp"

namespace impactval::roots {

/// Bisection on [lower, upper] for a sign change of f. Stops when the bracket
/// is narrower than abs_tol or has collapsed to adjacent doubles. f(lower) and
/// f(upper) must not share a strict sign; an endpoint with f == 0 is returned
/// as is.
template <typename F>
double bisect(F&& f, double lower, double upper, double abs_tol) {
  double f_lower = f(lower);
  const double f_upper = f(upper);
  if (f_lower == 0.0) return lower;
  if (f_upper == 0.0) return upper;
  if (std::signbit(f_lower) == std::signbit(f_upper))
    throw DomainError("bisect: endpoints do not bracket a root");
  for (;;) {
    const double middle = lower + 0.5 * (upper - lower);
    // One ulp apart.
    if (middle == lower || middle == upper || upper - lower <= abs_tol) return middle;
    const double f_middle = f(middle);
    if (f_middle == 0.0) return middle;
    if (std::signbit(f_middle) == std::signbit(f_lower)) {
      lower = middle;
      f_lower = f_middle;
    } else {
      upper = middle;
    }
  }
}

}  // namespace impactval::roots
