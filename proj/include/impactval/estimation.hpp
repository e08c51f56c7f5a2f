#pragma once

// Slow-moving estimates of the impact inputs (sigma, V, S, v) from daily
// market data. A long window that skips the most recent days keeps valuations
// from reacting to short-lived volatility spikes or liquidity droughts.

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "impactval/errors.hpp"
#include "impactval/impact.hpp"

namespace impactval {

struct MarketSeries {
  std::vector<std::chrono::year_month_day> dates;
  std::vector<double> close;
  std::vector<double> volume;
  std::vector<double> spread;             ///< empty when the column is absent
  std::vector<double> best_quote_volume;  ///< empty when the column is absent

  std::size_t size() const noexcept { return dates.size(); }
  bool has_spread() const noexcept { return !spread.empty(); }
  bool has_best_quote_volume() const noexcept { return !best_quote_volume.empty(); }
};

/// Throws DataError (with the 1-based offending row) when the series breaks an
/// invariant: column lengths, date order, positivity.
inline void validate(const MarketSeries& s) {
  const auto n = s.dates.size();
  if (s.close.size() != n || s.volume.size() != n) throw DataError("market series: column lengths differ");
  if (s.has_spread() && s.spread.size() != n) throw DataError("market series: spread column length differs");
  if (s.has_best_quote_volume() && s.best_quote_volume.size() != n)
    throw DataError("market series: best_quote_volume column length differs");
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = i + 1;
    if (i > 0 && !(s.dates[i - 1] < s.dates[i]))
      throw DataError("market series: dates not strictly increasing at row " + std::to_string(row), row);
    if (!(s.close[i] > 0.0)) throw DataError("market series: non-positive close at row " + std::to_string(row), row);
    if (!(s.volume[i] > 0.0)) throw DataError("market series: non-positive volume at row " + std::to_string(row), row);
    if (s.has_spread() && !(s.spread[i] > 0.0))
      throw DataError("market series: non-positive spread at row " + std::to_string(row), row);
    if (s.has_best_quote_volume() && !(s.best_quote_volume[i] > 0.0))
      throw DataError("market series: non-positive best_quote_volume at row " + std::to_string(row), row);
  }
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> cells;
  for (;;) {
    const auto comma = line.find(',');
    cells.push_back(trim(line.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  return cells;
}

inline std::optional<double> parse_decimal(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || end != s.data() + s.size() || s.empty()) return std::nullopt;
  return value;
}

inline std::optional<std::chrono::year_month_day> parse_iso_date(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  int y = 0;
  unsigned m = 0, d = 0;
  auto digits = [](std::string_view part, auto& out) {
    const auto [end, ec] = std::from_chars(part.data(), part.data() + part.size(), out);
    return ec == std::errc() && end == part.data() + part.size();
  };
  if (!digits(s.substr(0, 4), y) || !digits(s.substr(5, 2), m) || !digits(s.substr(8, 2), d)) return std::nullopt;
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
  if (!ymd.ok()) return std::nullopt;
  return ymd;
}

}  // namespace detail

/// Parses daily market data: a header row naming at least date, close and
/// volume (any order), optionally spread and best_quote_volume; then one
/// comma-separated row per trading day. Blank lines are ignored.
inline MarketSeries parse_series(std::istream& in, const std::string& source = "<input>") {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    for (auto cell : detail::split_commas(line)) header.emplace_back(cell);
    break;
  }
  if (header.empty()) throw DataError(source + ": missing header row");
  if (!header.empty() && header[0].starts_with("\xEF\xBB\xBF")) header[0].erase(0, 3);

  auto column = [&](std::string_view name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    return std::nullopt;
  };
  const auto c_date = column("date"), c_close = column("close"), c_volume = column("volume");
  const auto c_spread = column("spread"), c_bqv = column("best_quote_volume");
  for (auto [name, col] : {std::pair{"date", c_date}, {"close", c_close}, {"volume", c_volume}})
    if (!col) throw DataError(source + ": missing required column '" + name + "'");

  MarketSeries s;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    ++row;
    const auto where = source + ": row " + std::to_string(row) + " (line " + std::to_string(line_no) + ")";
    const auto cells = detail::split_commas(line);
    if (cells.size() != header.size())
      throw DataError(where + ": expected " + std::to_string(header.size()) + " cells, got " +
                          std::to_string(cells.size()), row);
    const auto date = detail::parse_iso_date(cells[*c_date]);
    if (!date) throw DataError(where + ": bad date '" + std::string(cells[*c_date]) + "'", row);
    auto number = [&](std::size_t col, const char* name) {
      const auto v = detail::parse_decimal(cells[col]);
      if (!v) throw DataError(where + ": non-numeric " + name + " '" + std::string(cells[col]) + "'", row);
      return *v;
    };
    if (!s.dates.empty() && !(s.dates.back() < *date))
      throw DataError(where + ": date " + std::string(cells[*c_date]) + " is not after the previous row", row);
    s.dates.push_back(*date);
    s.close.push_back(number(*c_close, "close"));
    if (!(s.close.back() > 0.0)) throw DataError(where + ": close must be > 0", row);
    s.volume.push_back(number(*c_volume, "volume"));
    if (!(s.volume.back() > 0.0)) throw DataError(where + ": volume must be > 0", row);
    if (c_spread) {
      s.spread.push_back(number(*c_spread, "spread"));
      if (!(s.spread.back() > 0.0)) throw DataError(where + ": spread must be > 0", row);
    }
    if (c_bqv) {
      s.best_quote_volume.push_back(number(*c_bqv, "best_quote_volume"));
      if (!(s.best_quote_volume.back() > 0.0)) throw DataError(where + ": best_quote_volume must be > 0", row);
    }
  }
  return s;
}

inline MarketSeries load_series(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError(path + ": cannot open file");
  return parse_series(in, path);
}

struct EstimationPolicy {
  std::size_t window_days = 126;  ///< about six months of trading
  std::size_t exclusion_days = 5; ///< most recent week, ignored
  double halflife_days = 63.0;
};

inline void validate(const EstimationPolicy& p) {
  if (p.window_days < 1) throw ArgumentError("estimation policy: window_days must be >= 1");
  if (!(p.exclusion_days < p.window_days))
    throw ArgumentError("estimation policy: exclusion_days must be smaller than window_days");
  if (!(p.halflife_days > 0.0)) throw ArgumentError("estimation policy: halflife_days must be > 0");
}

/// Exponentially weighted mean of values ordered oldest to newest. The value
/// at lag k (0 = newest) has weight proportional to 2^(-k / halflife).
inline double ema(std::span<const double> values, double halflife_days) {
  if (values.empty()) throw ArgumentError("ema: empty series");
  if (!(halflife_days > 0.0)) throw ArgumentError("ema: halflife must be > 0");
  const double decay = std::exp2(-1.0 / halflife_days);
  // Walk from the newest value back, scaling weights down each step.
  double weight = 1.0, weighted = 0.0, total = 0.0;
  for (auto it = values.rbegin(); it != values.rend(); ++it) {
    weighted += weight * *it;
    total += weight;
    weight *= decay;
  }
  return weighted / total;
}

/// Smallest series length estimate_params accepts.
inline std::size_t required_history(const EstimationPolicy& p) { return p.window_days + p.exclusion_days; }

/// sigma from squared close-to-close returns, V (and S, v when present) from
/// the EMA of the daily values, over the window that ends exclusion_days
/// before the last row.
inline ImpactParams estimate_params(const MarketSeries& series, const EstimationPolicy& policy, double Y) {
  validate(policy);
  validate(series);
  if (!(Y > 0.0)) throw ArgumentError("estimate_params: Y must be > 0");
  const std::size_t need = required_history(policy);
  if (series.size() < need)
    throw DataError("estimate_params: need at least " + std::to_string(need) + " rows (window " +
                    std::to_string(policy.window_days) + " + exclusion " + std::to_string(policy.exclusion_days) +
                    "), got " + std::to_string(series.size()));

  const std::size_t end = series.size() - policy.exclusion_days;
  const std::size_t begin = end - policy.window_days;

  std::vector<double> squared_returns;
  squared_returns.reserve(policy.window_days);
  for (std::size_t t = std::max<std::size_t>(begin, 1); t < end; ++t) {
    const double r = series.close[t] / series.close[t - 1] - 1.0;
    squared_returns.push_back(r * r);
  }
  if (squared_returns.empty()) throw DataError("estimate_params: window leaves no daily returns");

  auto window = [&](const std::vector<double>& col) {
    return std::span<const double>(col).subspan(begin, policy.window_days);
  };

  ImpactParams p;
  p.Y = Y;
  p.sigma = std::sqrt(ema(squared_returns, policy.halflife_days));
  p.V = ema(window(series.volume), policy.halflife_days);
  if (series.has_spread()) p.S = ema(window(series.spread), policy.halflife_days);
  if (series.has_best_quote_volume()) p.v = ema(window(series.best_quote_volume), policy.halflife_days);
  return p;
}

}  // namespace impactval
