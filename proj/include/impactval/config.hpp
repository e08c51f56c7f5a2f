#pragma once

// Flat key = value configuration files, optionally split into [sections]:
//
//   # comment
//   Y     = 1
//   sigma = 2%        # a '%' suffix divides by 100
//   V     = 1.25e9
//
// One section per asset is used by the report command.

#include <cstddef>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "impactval/errors.hpp"
#include "impactval/estimation.hpp"
#include "impactval/format.hpp"
#include "impactval/impact.hpp"

namespace impactval {

/// Parses "0.02", "2%", "1.5e-4". Throws ArgumentError on anything else.
inline double parse_quantity(std::string_view text) {
  auto s = detail::trim(text);
  double scale = 1.0;
  if (!s.empty() && s.back() == '%') {
    scale = 0.01;
    s.remove_suffix(1);
    s = detail::trim(s);
  }
  const auto v = detail::parse_decimal(s);
  if (!v) throw ArgumentError("not a number: '" + std::string(text) + "'");
  return *v * scale;
}

struct ConfigSection {
  std::string name;  ///< empty for keys before the first [header]
  std::size_t line = 0;
  std::vector<std::pair<std::string, std::string>> entries;

  std::optional<std::string> raw(std::string_view key) const {
    for (const auto& [k, v] : entries)
      if (k == key) return v;
    return std::nullopt;
  }

  std::optional<double> number(std::string_view key) const {
    const auto r = raw(key);
    if (!r) return std::nullopt;
    try {
      return parse_quantity(*r);
    } catch (const ArgumentError&) {
      throw DataError("config" + (name.empty() ? std::string() : " [" + name + "]") + ": key '" +
                      std::string(key) + "' is not a number: '" + *r + "'");
    }
  }
};

struct ConfigFile {
  std::vector<ConfigSection> sections;  ///< first entry is the unnamed global section

  const ConfigSection& global() const { return sections.front(); }
};

inline ConfigFile parse_config(std::istream& in, const std::string& source = "<config>") {
  ConfigFile cfg;
  cfg.sections.push_back(ConfigSection{});
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = detail::trim(view);
    if (view.empty()) continue;
    const auto where = source + ":" + std::to_string(line_no);
    if (view.front() == '[') {
      if (view.back() != ']') throw DataError(where + ": unterminated section header", line_no);
      auto name = detail::trim(view.substr(1, view.size() - 2));
      if (name.empty()) throw DataError(where + ": empty section name", line_no);
      cfg.sections.push_back(ConfigSection{std::string(name), line_no, {}});
      continue;
    }
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) throw DataError(where + ": expected 'key = value'", line_no);
    const auto key = detail::trim(view.substr(0, eq));
    const auto value = detail::trim(view.substr(eq + 1));
    if (key.empty()) throw DataError(where + ": missing key", line_no);
    auto& section = cfg.sections.back();
    if (section.raw(key)) throw DataError(where + ": duplicate key '" + std::string(key) + "'", line_no);
    section.entries.emplace_back(std::string(key), std::string(value));
  }
  return cfg;
}

inline ConfigFile load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError(path + ": cannot open file");
  return parse_config(in, path);
}

/// ImpactParams from one section. Y defaults to 1; sigma and V are required.
inline ImpactParams params_from_section(const ConfigSection& s) {
  ImpactParams p;
  p.Y = s.number("Y").value_or(1.0);
  const auto sigma = s.number("sigma");
  const auto V = s.number("V");
  if (!sigma || !V)
    throw DataError("config" + (s.name.empty() ? std::string() : " [" + s.name + "]") + ": sigma and V are required");
  p.sigma = *sigma;
  p.V = *V;
  p.S = s.number("S");
  p.v = s.number("v");
  p.b = s.number("b");
  p.phi = s.number("phi");
  validate(p);
  return p;
}

/// Serializes in the same flat format parse_config reads.
inline std::string to_config_text(const ImpactParams& p) {
  std::ostringstream out;
  out << "Y = " << format_number(p.Y) << '\n';
  out << "sigma = " << format_number(p.sigma) << '\n';
  out << "V = " << format_number(p.V) << '\n';
  if (p.S) out << "S = " << format_number(*p.S) << '\n';
  if (p.v) out << "v = " << format_number(*p.v) << '\n';
  if (p.b) out << "b = " << format_number(*p.b) << '\n';
  if (p.phi) out << "phi = " << format_number(*p.phi) << '\n';
  return out.str();
}

}  // namespace impactval
