#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "impactval/impactval.hpp"

namespace impactval::cli {
namespace {

using nlohmann::json;

constexpr std::uint64_t kDefaultSeed = 20120301;

struct Globals {
  std::string format = "text";
  std::uint64_t seed = kDefaultSeed;
  std::string out_path;
};

json num(double x) {
  if (std::isfinite(x)) return x;
  return format_number(x);
}

json num(const std::optional<double>& x) { return x ? num(*x) : json(nullptr); }

std::optional<double> quantity(const std::string& text, const char* flag) {
  if (text.empty()) return std::nullopt;
  try {
    return parse_quantity(text);
  } catch (const ArgumentError&) {
    throw UsageError(std::string("--") + flag + ": not a number: '" + text + "'");
  }
}

double required(const std::string& text, const char* flag) {
  const auto v = quantity(text, flag);
  if (!v) throw UsageError(std::string("missing required flag --") + flag);
  return *v;
}

/// Where command output goes: --out file or the caller's stream.
class Sink {
public:
  Sink(const Globals& g, std::ostream& fallback) : stream_(&fallback) {
    if (!g.out_path.empty()) {
      file_ = std::make_unique<std::ofstream>(g.out_path);
      if (!*file_) throw DataError(g.out_path + ": cannot open for writing");
      stream_ = file_.get();
    }
  }
  std::ostream& operator*() { return *stream_; }

private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

// Impact parameters: a --params file (flat key = value or JSON) overridden by
// individual flags.
struct ParamFlags {
  std::string file, Y, sigma, V, S, v, b, phi;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--params", file, "impact parameter file (key = value or JSON)");
    cmd->add_option("--Y", Y, "impact prefactor (default 1)");
    cmd->add_option("--sigma", sigma, "daily volatility, fraction or percent");
    cmd->add_option("--V", V, "daily volume, same units as Q");
    cmd->add_option("--S", S, "bid-ask spread, fraction of price");
    cmd->add_option("--v", v, "volume at best quotes");
    cmd->add_option("--b", b, "spread-volatility coefficient");
    cmd->add_option("--phi", phi, "transactions per day");
  }

  bool given() const { return !file.empty() || !sigma.empty() || !V.empty(); }
};

ImpactParams params_from_json(const json& j, const std::string& source) {
  auto field = [&](const char* key) -> std::optional<double> {
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    const auto& x = j[key];
    if (x.is_number()) return x.get<double>();
    if (x.is_string()) return parse_quantity(x.get<std::string>());
    throw DataError(source + ": key '" + key + "' is not a number");
  };
  ImpactParams p;
  p.Y = field("Y").value_or(1.0);
  const auto sigma = field("sigma");
  const auto V = field("V");
  if (!sigma || !V) throw DataError(source + ": sigma and V are required");
  p.sigma = *sigma;
  p.V = *V;
  p.S = field("S");
  p.v = field("v");
  p.b = field("b");
  p.phi = field("phi");
  validate(p);
  return p;
}

ImpactParams load_params_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError(path + ": cannot open file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw DataError(path + ": invalid JSON: " + e.what());
    }
    return params_from_json(j, path);
  }
  std::istringstream stream(text);
  const auto cfg = parse_config(stream, path);
  if (cfg.global().entries.empty() && cfg.sections.size() == 2) return params_from_section(cfg.sections[1]);
  return params_from_section(cfg.global());
}

ImpactParams gather_params(const ParamFlags& f) {
  std::optional<ImpactParams> base;
  if (!f.file.empty()) base = load_params_file(f.file);
  ImpactParams p = base.value_or(ImpactParams{});
  if (auto x = quantity(f.Y, "Y")) p.Y = *x;
  if (auto x = quantity(f.sigma, "sigma")) p.sigma = *x;
  if (auto x = quantity(f.V, "V")) p.V = *x;
  if (!base && (f.sigma.empty() || f.V.empty()))
    throw UsageError("impact parameters need --sigma and --V (or --params FILE)");
  if (auto x = quantity(f.S, "S")) p.S = x;
  if (auto x = quantity(f.v, "v")) p.v = x;
  if (auto x = quantity(f.b, "b")) p.b = x;
  if (auto x = quantity(f.phi, "phi")) p.phi = x;
  validate(p);
  return p;
}

void print_warnings(const ValidityReport& r, std::ostream& err) {
  for (auto w : r.warnings) err << "warning: " << to_string(w) << '\n';
}

json warnings_json(const ValidityReport& r) {
  json arr = json::array();
  for (auto w : r.warnings) arr.push_back(to_string(w));
  if (arr.empty()) arr.push_back(to_string(Validity::Ok));
  return arr;
}

// ---------------------------------------------------------------- value

struct ValueCmd {
  std::string Q, p0, L, delta_q, max_impact = "0.2", max_participation = "0.2";
  ParamFlags params;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--Q", Q, "position size (shares or notional units)");
    cmd->add_option("--p0", p0, "mark-to-market price");
    cmd->add_option("--L", L, "liabilities (default 0)");
    cmd->add_option("--delta-q", delta_q, "daily liquidation volume, enables the participation check");
    cmd->add_option("--max-impact", max_impact, "impact validity threshold");
    cmd->add_option("--max-participation", max_participation, "participation validity threshold");
    params.add_to(cmd);
  }

  int run(const Globals& g, std::ostream& out, std::ostream& err) const {
    Position pos;
    pos.Q = required(Q, "Q");
    pos.p0 = required(p0, "p0");
    pos.L = quantity(L, "L").value_or(0.0);
    validate(pos);
    ImpactParams p;
    if (pos.Q == 0.0 && !params.given()) {
      // Nothing to liquidate, so no impact inputs are needed.
      p.sigma = 0.0;
      p.V = 1.0;
    } else {
      p = gather_params(params);
    }
    ValidityThresholds thresholds{required(max_impact, "max-impact"), required(max_participation, "max-participation")};
    std::optional<LiquidationSchedule> schedule;
    if (auto dq = quantity(delta_q, "delta-q"); dq && pos.Q > 0.0) schedule.emplace(pos.Q, *dq, p.V);

    const auto s = summarize_valuation(pos, p, schedule, thresholds);
    std::optional<double> lev_mtm, lev_adj;
    if (pos.L > 0.0) {
      lev_mtm = mtm_leverage(pos.Q, pos.p0, pos.L);
      lev_adj = pos.Q > 0.0 ? impact_adjusted_leverage_exit(pos, p, 0.0) : kDivergent;
    }

    Sink sink(g, out);
    if (g.format == "json") {
      json j{{"impact", num(s.impact)},
             {"mtm_value", num(s.mtm_value)},
             {"adjusted_value", num(s.adjusted_value)},
             {"average_price", pos.Q > 0.0 ? num(s.average_price) : json(nullptr)},
             {"haircut", num(s.haircut)},
             {"validity", warnings_json(s.validity)}};
      if (s.validity.participation) j["participation"] = num(*s.validity.participation);
      if (lev_mtm) {
        j["leverage_mtm"] = num(*lev_mtm);
        j["leverage_adjusted"] = num(*lev_adj);
      }
      *sink << j.dump(2) << '\n';
    } else if (g.format == "text") {
      auto line = [&](const char* label, const std::string& value) {
        *sink << label << std::string(26 - std::string(label).size(), ' ') << value << '\n';
      };
      line("impact I(Q)", format_number(s.impact) + " (" + format_percent(s.impact) + ")");
      line("mark-to-market value", format_number(s.mtm_value));
      line("impact-adjusted value", format_number(s.adjusted_value));
      line("average valuation price", pos.Q > 0.0 ? format_number(s.average_price) : "--");
      line("haircut", format_number(s.haircut) + " (" + format_percent(s.haircut) + ")");
      if (s.validity.participation)
        line("participation", format_number(*s.validity.participation) + " (" +
                                  format_percent(*s.validity.participation) + ")");
      if (lev_mtm) {
        line("leverage (mark-to-market)", format_number(*lev_mtm));
        line("leverage (impact-adjusted)", format_number(*lev_adj));
      }
      std::string validity;
      for (auto w : s.validity.warnings) validity += std::string(validity.empty() ? "" : ", ") + to_string(w);
      line("validity", validity.empty() ? to_string(Validity::Ok) : validity);
    } else {
      throw UsageError("value: --format must be text or json");
    }
    print_warnings(s.validity, err);
    return kSuccess;
  }
};

// ------------------------------------------------------------ trajectory

// A position given either as the dimensionless pair (lambda0, calI) or as
// Q, p0, L plus impact parameters.
struct LeverageInput {
  std::string lambda0, calI, Q, p0, L;
  ParamFlags params;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--lambda0", lambda0, "initial mark-to-market leverage");
    cmd->add_option("--calI", calI, "total impact I(Q) of the position");
    cmd->add_option("--Q", Q, "position size");
    cmd->add_option("--p0", p0, "mark-to-market price");
    cmd->add_option("--L", L, "liabilities");
    params.add_to(cmd);
  }

  bool dimensionless() const { return !lambda0.empty(); }

  struct Resolved {
    double lambda0 = 1.0;
    std::optional<double> calI;
    std::optional<Position> position;
    std::optional<ImpactParams> params;
  };

  Resolved resolve(bool need_impact) const {
    Resolved r;
    if (dimensionless()) {
      r.lambda0 = required(lambda0, "lambda0");
      r.calI = quantity(calI, "calI");
      if (need_impact && !r.calI) throw UsageError("missing required flag --calI");
      if (!(r.lambda0 >= 1.0)) throw UsageError("--lambda0 must be >= 1");
      if (r.calI && !(*r.calI >= 0.0)) throw UsageError("--calI must be >= 0");
      return r;
    }
    if (Q.empty() && p0.empty()) throw UsageError("give --lambda0 (and --calI) or --Q, --p0, --L with impact parameters");
    Position pos = Position::held(required(Q, "Q"), required(p0, "p0"), required(L, "L"));
    validate(pos);
    const auto p = gather_params(params);
    r.lambda0 = mtm_leverage(pos.Q, pos.p0, pos.L);
    if (is_divergent(r.lambda0)) throw DomainError("position has no mark-to-market equity (Q p0 <= L)");
    r.calI = expected_impact(p, pos.Q);
    r.position = pos;
    r.params = p;
    return r;
  }
};

struct TrajectoryCmd {
  LeverageInput input;
  int grid = 1000;
  std::string mode = "exit";
  std::string E0;

  void add_to(CLI::App* cmd) {
    input.add_to(cmd);
    cmd->add_option("--grid", grid, "number of grid points (>= 2)");
    cmd->add_option("--mode", mode, "exit or roundtrip")->check(CLI::IsMember({"exit", "roundtrip"}));
    cmd->add_option("--E0", E0, "initial equity for the entry leg (default Q p0 - L)");
  }

  int run(const Globals& g, std::ostream& out, std::ostream&) const {
    if (grid < 2) throw UsageError("--grid must be at least 2");
    if (g.format == "json") throw UsageError("trajectory: output is CSV (--format csv or text)");
    const auto r = input.resolve(true);
    Sink sink(g, out);
    if (mode == "exit") {
      const auto grid_x = uniform_grid(static_cast<std::size_t>(grid));
      auto points = deleverage_trajectory(r.lambda0, *r.calI, grid_x);
      if (r.position) {
        const auto& pos = *r.position;
        for (auto& pt : points) {
          pt.q_held *= pos.Q;
          pt.marginal_price *= pos.p0;
          pt.cash *= pos.Q * pos.p0;
        }
      }
      write_trajectory_csv(*sink, points);
      return kSuccess;
    }
    Position pos;
    ImpactParams p;
    if (r.position) {
      pos = *r.position;
      p = *r.params;
    } else {
      const auto unit = normalized_position(r.lambda0, *r.calI);
      pos = unit.position;
      p = unit.params;
    }
    if (auto e0 = quantity(E0, "E0")) pos.E0 = *e0;
    write_round_trip_csv(*sink, entry_exit_trajectories(pos, p, static_cast<std::size_t>(grid)));
    return kSuccess;
  }
};

// -------------------------------------------------------------- critical

struct CriticalCmd {
  LeverageInput input;

  void add_to(CLI::App* cmd) { input.add_to(cmd); }

  int run(const Globals& g, std::ostream& out, std::ostream&) const {
    const auto r = input.resolve(false);
    Sink sink(g, out);

    std::optional<CriticalityReport> report;
    if (r.calI) report = assess_criticality(r.lambda0, *r.calI);
    const double I_c = critical_impact(r.lambda0);
    std::optional<double> lambda_c_spread;
    if (r.params && r.params->has_spread_inputs() && r.position->Q > 0.0)
      lambda_c_spread = critical_leverage_from_spread(r.params->Y, *r.params->b, *r.params->S,
                                                      r.position->Q / *r.params->v);

    if (g.format == "json") {
      json j{{"lambda0", num(r.lambda0)}, {"I_c", num(I_c)}};
      if (report) {
        j["calI"] = num(report->calI);
        j["regime"] = to_string(report->regime);
        j["lambda_c"] = num(report->lambda_c);
        if (report->crossover) {
          j["x_star"] = num(report->crossover->x_star);
          j["x_star_closed_form"] = num(report->crossover->closed_form);
          j["x_star_closed_form_relative_disagreement"] = num(report->crossover->relative_disagreement);
        }
        j["x_c"] = num(report->x_c);
      }
      if (lambda_c_spread) j["lambda_c_spread"] = num(*lambda_c_spread);
      *sink << j.dump(2) << '\n';
      return kSuccess;
    }
    if (g.format != "text") throw UsageError("critical: --format must be text or json");
    auto line = [&](const char* label, const std::string& value) {
      *sink << label << std::string(22 - std::string(label).size(), ' ') << value << '\n';
    };
    line("lambda0", format_number(r.lambda0));
    line("I_c", format_number(I_c) + " (" + format_percent(I_c) + ")");
    if (report) {
      line("calI", format_number(report->calI) + " (" + format_percent(report->calI) + ")");
      line("regime", to_string(report->regime));
      line("lambda_c", report->lambda_c ? format_number(*report->lambda_c) : "--");
      if (report->crossover) {
        const auto& c = *report->crossover;
        line("x_star", format_number(c.x_star));
        std::string note = format_number(c.closed_form);
        if (!c.closed_form_agrees)
          note += " (disagrees with root, relative gap " + format_number(c.relative_disagreement) + ")";
        line("x_star_closed_form", note);
      }
      if (report->x_c) line("x_c", format_number(*report->x_c));
    }
    if (lambda_c_spread) line("lambda_c_spread", format_number(*lambda_c_spread));
    return kSuccess;
  }
};

// ------------------------------------------------------------ bankruptcy

struct BankruptcyCmd {
  std::string lambda0 = "9";
  std::vector<std::string> etas;
  std::string grid_list, calI_min = "0", calI_max = "0.3", calI_step = "0.01";
  std::uint64_t trials = 10000;
  std::string mode = "at-end";
  std::string noise_scale = "1", sigma, days_at_critical = "100", V = "1e6", Y = "1";
  unsigned threads = 0;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--lambda0", lambda0, "initial leverage");
    cmd->add_option("--eta", etas, "participation rate; repeat for several curves (default 10)");
    cmd->add_option("--grid", grid_list, "comma-separated impact values (overrides min/max/step)");
    cmd->add_option("--calI-min", calI_min, "first impact value");
    cmd->add_option("--calI-max", calI_max, "last impact value");
    cmd->add_option("--calI-step", calI_step, "impact grid spacing");
    cmd->add_option("--trials", trials, "Monte Carlo trials per grid point");
    cmd->add_option("--mode", mode, "at-end or anywhere")->check(CLI::IsMember({"at-end", "anywhere"}));
    cmd->add_option("--noise-scale", noise_scale, "multiplier on the price noise (0 = expected path)");
    cmd->add_option("--sigma", sigma, "daily volatility (default: chosen from --days-at-critical)");
    cmd->add_option("--days-at-critical", days_at_critical, "liquidation days at the critical impact");
    cmd->add_option("--V", V, "daily volume");
    cmd->add_option("--Y", Y, "impact prefactor");
    cmd->add_option("--threads", threads, "worker threads (0 = all cores)");
  }

  std::vector<double> grid() const {
    std::vector<double> out;
    if (!grid_list.empty()) {
      std::string_view rest = grid_list;
      for (;;) {
        const auto comma = rest.find(',');
        out.push_back(required(std::string(rest.substr(0, comma)), "grid"));
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
      }
      return out;
    }
    const double lo = required(calI_min, "calI-min"), hi = required(calI_max, "calI-max");
    const double step = required(calI_step, "calI-step");
    if (!(step > 0.0) || !(hi >= lo)) throw UsageError("impact grid needs calI-step > 0 and calI-max >= calI-min");
    const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    // Rounded so that 0.1 + 0.05 prints as 0.15.
    for (long i = 0; i <= n; ++i) out.push_back(std::round((lo + static_cast<double>(i) * step) * 1e12) / 1e12);
    return out;
  }

  int run(const Globals& g, std::ostream& out, std::ostream& err) const {
    if (trials < 1) throw UsageError("--trials must be >= 1");
    const double lam = required(lambda0, "lambda0");
    if (!(lam > 1.0)) throw UsageError("--lambda0 must be > 1");
    std::vector<double> eta_values;
    for (const auto& e : etas) eta_values.push_back(required(e, "eta"));
    if (eta_values.empty()) eta_values.push_back(10.0);
    for (double e : eta_values)
      if (!(e > 0.0)) throw UsageError("--eta must be > 0");
    const auto calI_grid = grid();

    TransitionOptions opt;
    opt.Y = required(Y, "Y");
    opt.V = required(V, "V");
    opt.sigma = quantity(sigma, "sigma");
    opt.days_at_critical = required(days_at_critical, "days-at-critical");
    opt.mode = mode == "anywhere" ? BankruptcyMode::AnywhereOnPath : BankruptcyMode::AtEnd;
    opt.noise_scale = required(noise_scale, "noise-scale");
    opt.threads = threads;

    Sink sink(g, out);
    json all = json::array();
    bool first = true;
    for (double eta : eta_values) {
      const auto curve = transition_curve(lam, eta, calI_grid, trials, g.seed, opt);

      std::vector<CurveSample> samples;
      std::uint64_t negative_days = 0, days = 0;
      for (const auto& pt : curve) {
        if (!pt.feasible) {
          err << "warning: eta=" << format_number(eta) << " calI=" << format_number(pt.calI) << ": " << pt.error
              << '\n';
          continue;
        }
        samples.push_back({pt.calI, pt.with_impact.p_bankrupt, static_cast<double>(pt.with_impact.n_trials)});
        negative_days += pt.with_impact.negative_price_days;
        days += pt.with_impact.simulated_days;
      }
      if (days > 0 && static_cast<double>(negative_days) > 1e-3 * static_cast<double>(days))
        err << "warning: eta=" << format_number(eta) << ": " << negative_days << " of " << days
            << " simulated days closed at a negative price\n";

      std::optional<ProbitFit> fit;
      if (samples.size() >= 2) {
        try {
          fit = fit_probit(samples);
        } catch (const std::exception& e) {
          err << "warning: eta=" << format_number(eta) << ": transition fit failed: " << e.what() << '\n';
        }
      }
      if (fit)
        err << "eta=" << format_number(eta) << ": fitted p=0.5 at calI=" << format_fixed(fit->center, 4)
            << " (critical " << format_fixed(critical_impact(lam), 4) << "), 10-90% width "
            << format_fixed(fit->width_10_90(), 4) << '\n';

      if (g.format == "json") {
        json points = json::array();
        for (const auto& pt : curve) {
          json jp{{"calI", num(pt.calI)}, {"feasible", pt.feasible}};
          if (pt.feasible) {
            jp["p_bankrupt"] = num(pt.with_impact.p_bankrupt);
            jp["std_error"] = num(pt.with_impact.std_error);
            jp["p_bankrupt_noimpact"] = num(pt.without_impact.p_bankrupt);
            jp["days"] = pt.days;
            jp["Q"] = num(pt.Q);
          } else {
            jp["error"] = pt.error;
          }
          points.push_back(jp);
        }
        json curve_json{{"eta", num(eta)}, {"lambda0", num(lam)}, {"I_c", num(critical_impact(lam))},
                        {"sigma", num(transition_sigma(lam, eta, opt))}, {"points", points}};
        if (fit) curve_json["fit"] = {{"center", num(fit->center)}, {"width_10_90", num(fit->width_10_90())}};
        all.push_back(curve_json);
      } else {
        const bool multi = eta_values.size() > 1;
        write_transition_csv(*sink, curve, multi ? std::optional<double>(eta) : std::nullopt, first);
      }
      first = false;
    }
    if (g.format == "json") *sink << all.dump(2) << '\n';
    return kSuccess;
  }
};

// ---------------------------------------------------------------- report

struct ReportCmd {
  std::string file;

  void add_to(CLI::App* cmd) { cmd->add_option("assets", file, "asset config file")->required(); }

  int run(const Globals& g, std::ostream& out, std::ostream& err) const {
    const auto rows = build_report(assets_from_config(load_config(file)));
    Sink sink(g, out);
    if (g.format == "csv") {
      write_report_csv(*sink, rows);
    } else if (g.format == "json") {
      json arr = json::array();
      for (const auto& r : rows) {
        json j{{"name", r.name},       {"sigma", num(r.sigma)}, {"V", num(r.V)},
               {"S", num(r.S)},        {"v", num(r.v)},         {"I1", num(r.impact_vol_based)},
               {"I2", num(r.impact_spread_based)}, {"lambda_c", num(r.lambda_c)}};
        if (r.error) j["error"] = *r.error;
        arr.push_back(j);
      }
      *sink << arr.dump(2) << '\n';
    } else {
      write_report_text(*sink, rows);
    }
    for (const auto& r : rows)
      if (r.error) err << "warning: asset " << r.name << ": " << *r.error << '\n';
    return kSuccess;
  }
};

// -------------------------------------------------------------- estimate

struct EstimateCmd {
  std::string series;
  std::size_t window = 126, exclusion = 5;
  double halflife = 63.0;
  std::string Y = "1";

  void add_to(CLI::App* cmd) {
    cmd->add_option("--series", series, "daily market data CSV")->required();
    cmd->add_option("--window", window, "estimation window in trading days");
    cmd->add_option("--exclusion", exclusion, "most recent days left out");
    cmd->add_option("--halflife", halflife, "EMA half-life in trading days");
    cmd->add_option("--Y", Y, "impact prefactor written to the output");
  }

  int run(const Globals& g, std::ostream& out, std::ostream&) const {
    EstimationPolicy policy{window, exclusion, halflife};
    try {
      validate(policy);
    } catch (const ArgumentError& e) {
      throw UsageError(e.what());
    }
    const auto s = load_series(series);
    ImpactParams p;
    try {
      p = estimate_params(s, policy, required(Y, "Y"));
    } catch (const DataError& e) {
      throw DataError(series + ": " + e.what(), e.row());
    }
    Sink sink(g, out);
    if (g.format == "json") {
      json j{{"Y", num(p.Y)}, {"sigma", num(p.sigma)}, {"V", num(p.V)}};
      if (p.S) j["S"] = num(*p.S);
      if (p.v) j["v"] = num(*p.v);
      *sink << j.dump(2) << '\n';
    } else {
      *sink << to_config_text(p);
    }
    return kSuccess;
  }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Impact-adjusted valuation, critical leverage and bankruptcy risk"};
  app.name(args.empty() ? "impactval" : args.front());
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"text", "json", "csv"}));
  app.add_option("--seed", g.seed, "Monte Carlo master seed");
  app.add_option("--out", g.out_path, "write output to this file instead of stdout");

  ValueCmd value;
  TrajectoryCmd trajectory;
  CriticalCmd critical;
  BankruptcyCmd bankruptcy;
  ReportCmd report;
  EstimateCmd estimate;
  auto* c_value = app.add_subcommand("value", "impact-adjusted value of a position");
  auto* c_traj = app.add_subcommand("trajectory", "leverage along an exit or round-trip path (CSV)");
  auto* c_crit = app.add_subcommand("critical", "regime, critical impact and leverage");
  auto* c_bank = app.add_subcommand("bankruptcy", "Monte Carlo bankruptcy probability vs total impact (CSV)");
  auto* c_report = app.add_subcommand("report", "impact and critical leverage table for a set of assets");
  auto* c_est = app.add_subcommand("estimate", "estimate impact parameters from daily market data");
  value.add_to(c_value);
  trajectory.add_to(c_traj);
  critical.add_to(c_crit);
  bankruptcy.add_to(c_bank);
  report.add_to(c_report);
  estimate.add_to(c_est);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    if (c_value->parsed()) return value.run(g, out, err);
    if (c_traj->parsed()) return trajectory.run(g, out, err);
    if (c_crit->parsed()) return critical.run(g, out, err);
    if (c_bank->parsed()) return bankruptcy.run(g, out, err);
    if (c_report->parsed()) return report.run(g, out, err);
    if (c_est->parsed()) return estimate.run(g, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kComputationError;
  }
  return kUsageError;
}

}  // namespace impactval::cli
