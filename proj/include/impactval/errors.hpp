#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace impactval {

/// Invalid argument to a library call (negative size, zero increments, ...).
class ArgumentError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// The inputs are valid but outside the domain where the quantity exists,
/// e.g. asking for a crossover point of a supercritical position.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Malformed or inconsistent input data. Carries a 1-based row index when the
/// failure can be pinned to a data row (0 otherwise).
class DataError : public std::runtime_error {
public:
  DataError(const std::string& what, std::size_t row = 0)
      : std::runtime_error(what), row_(row) {}

  std::size_t row() const noexcept { return row_; }

private:
  std::size_t row_;
};

}  // namespace impactval
