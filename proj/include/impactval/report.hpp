#pragma once

// Per-asset table of impact estimates and critical leverage. Each asset
// supplies whichever inputs it has; anything that cannot be computed is shown
// as "--".

#include <algorithm>
#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "impactval/config.hpp"
#include "impactval/format.hpp"
#include "impactval/impact.hpp"
#include "impactval/leverage.hpp"

namespace impactval {

struct AssetSpec {
  std::string name;
  double Q = 0.0;
  double Y = 1.0;
  std::optional<double> sigma, V, S, v, b, phi;
};

inline AssetSpec asset_from_section(const ConfigSection& s) {
  AssetSpec a;
  a.name = s.name;
  const auto Q = s.number("Q");
  if (!Q) throw DataError("asset [" + s.name + "]: Q is required");
  a.Q = *Q;
  a.Y = s.number("Y").value_or(1.0);
  a.sigma = s.number("sigma");
  a.V = s.number("V");
  a.S = s.number("S");
  a.v = s.number("v");
  a.b = s.number("b");
  a.phi = s.number("phi");
  return a;
}

/// Every named section of the file is one asset, in file order.
inline std::vector<AssetSpec> assets_from_config(const ConfigFile& cfg) {
  std::vector<AssetSpec> out;
  for (const auto& s : cfg.sections)
    if (!s.name.empty()) out.push_back(asset_from_section(s));
  return out;
}

struct AssetReportRow {
  std::string name;
  std::optional<double> sigma, V, S, v;
  std::optional<double> impact_vol_based;     ///< Y sigma sqrt(Q/V)
  std::optional<double> impact_spread_based;  ///< Y b S sqrt(Q/v)
  std::optional<double> lambda_c;             ///< from the volume-based impact when available
  std::optional<std::string> error;
};

inline AssetReportRow report_row(const AssetSpec& a) {
  AssetReportRow row{a.name, a.sigma, a.V, a.S, a.v, {}, {}, {}, {}};
  try {
    if (a.sigma && a.V) {
      ImpactParams p;
      p.Y = a.Y;
      p.sigma = *a.sigma;
      p.V = *a.V;
      validate(p);
      row.impact_vol_based = expected_impact(p, a.Q);
    }
    if (a.S && a.v && a.b) row.impact_spread_based = impact_from_spread(a.Y, *a.b, *a.S, a.Q / *a.v);

    const auto& basis = row.impact_vol_based ? row.impact_vol_based : row.impact_spread_based;
    if (!basis) {
      row.error = "needs sigma and V, or S, v and b";
    } else if (*basis > 0.0) {
      row.lambda_c = critical_leverage_for_impact(*basis);
    }
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

inline std::vector<AssetReportRow> build_report(const std::vector<AssetSpec>& assets) {
  std::vector<AssetReportRow> rows;
  rows.reserve(assets.size());
  for (const auto& a : assets) rows.push_back(report_row(a));
  return rows;
}

namespace detail {
inline std::string cell_or_dash(const std::optional<double>& v, auto&& render) {
  return v ? render(*v) : std::string("--");
}
}  // namespace detail

inline const std::vector<std::string>& report_columns() {
  static const std::vector<std::string> cols{"asset", "sigma", "V", "S", "v", "I1", "I2", "lambda_c"};
  return cols;
}

/// Aligned plain-text table; fractions are shown with their percent form.
inline void write_report_text(std::ostream& out, const std::vector<AssetReportRow>& rows) {
  auto frac = [](double x) { return format_fixed(x, 6) + " (" + format_percent(x, 1) + ")"; };
  auto spread = [](double x) { return format_fixed(x, 6) + " (" + format_percent(x, 3) + ")"; };
  auto general = [](double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", x);
    return std::string(buf);
  };
  std::vector<std::vector<std::string>> table{report_columns()};
  for (const auto& r : rows) {
    if (r.error) {
      table.push_back({r.name, "error: " + *r.error});
      continue;
    }
    table.push_back({r.name, detail::cell_or_dash(r.sigma, frac), detail::cell_or_dash(r.V, general),
                     detail::cell_or_dash(r.S, spread), detail::cell_or_dash(r.v, general),
                     detail::cell_or_dash(r.impact_vol_based, frac), detail::cell_or_dash(r.impact_spread_based, frac),
                     detail::cell_or_dash(r.lambda_c, [](double x) { return format_fixed(x, 1); })});
  }
  std::vector<std::size_t> width(report_columns().size(), 0);
  for (const auto& line : table)
    if (line.size() == width.size())
      for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());
  for (const auto& line : table) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (i) out << "  ";
      const bool last = i + 1 == line.size();
      out << line[i];
      if (!last) out << std::string(width[i] - std::min(width[i], line[i].size()), ' ');
    }
    out << '\n';
  }
}

/// CSV with raw decimal fractions; missing values are "--".
inline void write_report_csv(std::ostream& out, const std::vector<AssetReportRow>& rows) {
  const auto& cols = report_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << ",error\n";
  auto num = [](double x) { return format_number(x); };
  for (const auto& r : rows) {
    out << r.name << ',' << detail::cell_or_dash(r.sigma, num) << ',' << detail::cell_or_dash(r.V, num) << ','
        << detail::cell_or_dash(r.S, num) << ',' << detail::cell_or_dash(r.v, num) << ','
        << detail::cell_or_dash(r.impact_vol_based, num) << ',' << detail::cell_or_dash(r.impact_spread_based, num)
        << ',' << detail::cell_or_dash(r.lambda_c, num) << ',' << (r.error ? '"' + *r.error + '"' : std::string()) << '\n';
  }
}

}  // namespace impactval
