#include <gtest/gtest.h>

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "impactval");
  std::ostringstream out, err;
  const int code = impactval::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(IMPACTVAL_DATA_DIR) + "/" + name; }

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("impactval_test_" + name);
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST(Cli, NoCommandIsUsageError) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
}

TEST(Cli, HelpSucceeds) {
  const auto r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("bankruptcy"), std::string::npos);
  const auto sub = run({"value", "--help"});
  EXPECT_EQ(sub.code, 0);
  EXPECT_NE(sub.out.find("--p0"), std::string::npos);
}

TEST(CliValue, EmptyPosition) {
  const auto r = run({"--format", "json", "value", "--p0", "100", "--Q", "0"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["mtm_value"], 0.0);
  EXPECT_EQ(j["adjusted_value"], 0.0);
  EXPECT_TRUE(j["average_price"].is_null());
}

TEST(CliValue, StockHaircut) {
  // Position 5% of market cap, daily volume 0.5% of market cap.
  const auto r = run({"value", "--Q", "5", "--V", "0.5", "--p0", "1", "--sigma", "2%", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_NEAR(j["impact"].get<double>(), 0.0632456, 1e-6);
  EXPECT_NEAR(j["haircut"].get<double>(), 0.0421637, 1e-6);
  EXPECT_EQ(j["validity"][0], "OK");
}

TEST(CliValue, ZeroVolatility) {
  const auto r = run({"--format", "json", "value", "--Q", "1000", "--p0", "20", "--sigma", "0", "--V", "10"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["haircut"], 0.0);
  EXPECT_EQ(j["mtm_value"], j["adjusted_value"]);
}

TEST(CliValue, TextOutputWarningsAndLeverage) {
  const auto r = run({"value", "--Q", "100", "--p0", "1", "--L", "90", "--sigma", "0.1", "--V", "10",
                      "--delta-q", "50"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("impact-adjusted value"), std::string::npos);
  EXPECT_NE(r.out.find("leverage (mark-to-market)"), std::string::npos);
  EXPECT_NE(r.out.find("WARN_LARGE_IMPACT"), std::string::npos);
  EXPECT_NE(r.err.find("WARN_LARGE_PARTICIPATION"), std::string::npos);
}

TEST(CliValue, UsageErrors) {
  EXPECT_EQ(run({"value", "--p0", "1"}).code, 2);
  EXPECT_EQ(run({"value", "--Q", "10", "--p0", "1"}).code, 2);
  EXPECT_EQ(run({"value", "--Q", "ten", "--p0", "1", "--sigma", "1%", "--V", "1"}).code, 2);
  EXPECT_EQ(run({"value", "--Q", "10", "--p0", "-1", "--sigma", "1%", "--V", "1"}).code, 2);
  EXPECT_EQ(run({"--format", "xml", "value", "--Q", "0", "--p0", "1"}).code, 2);
  EXPECT_EQ(run({"value", "--Q", "10", "--p0", "1", "--params", "/nonexistent.ini"}).code, 1);
}

TEST(CliTrajectory, NoImpactIsLinear) {
  const auto r = run({"trajectory", "--lambda0", "9", "--calI", "0", "--grid", "11"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 12u);
  EXPECT_EQ(ls[0], "x,q_held,marginal_price,cash,lambda_noimpact,lambda_mtm,lambda_adj");
  EXPECT_EQ(ls[1].substr(0, 2), "0,");
  EXPECT_NE(ls[11].find(",0,0,0"), std::string::npos) << ls[11];
}

TEST(CliTrajectory, SupercriticalHasSentinels) {
  const auto path = temp_file("traj.csv");
  const auto r = run({"--out", path.string(), "trajectory", "--lambda0", "9", "--calI", "0.19"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  const auto ls = lines(buf.str());
  EXPECT_EQ(ls.size(), 1001u);
  EXPECT_NE(ls[999].find("inf"), std::string::npos);
  std::filesystem::remove(path);
}

TEST(CliTrajectory, RoundTripLegs) {
  const auto r = run({"trajectory", "--lambda0", "9", "--calI", "0.19", "--mode", "roundtrip", "--grid", "101"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 203u);
  EXPECT_TRUE(ls[0].starts_with("leg,x,"));
  bool entry_diverges = false;
  for (std::size_t i = 1; i <= 101; ++i) {
    EXPECT_TRUE(ls[i].starts_with("entry,"));
    if (ls[i].ends_with(",inf")) entry_diverges = true;
  }
  EXPECT_TRUE(entry_diverges);
  EXPECT_TRUE(ls[102].starts_with("exit,0,"));
}

TEST(CliTrajectory, FullPositionScalesColumns) {
  const auto r = run({"trajectory", "--Q", "1000", "--p0", "10", "--L", "9000", "--sigma", "1%", "--V", "100",
                      "--grid", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 4u);
  EXPECT_TRUE(ls[1].starts_with("0,1000,10,0,10,10,")) << ls[1];
}

TEST(CliTrajectory, UsageErrors) {
  EXPECT_EQ(run({"trajectory", "--lambda0", "9", "--calI", "0.1", "--grid", "1"}).code, 2);
  EXPECT_EQ(run({"trajectory", "--lambda0", "9"}).code, 2);
  EXPECT_EQ(run({"trajectory", "--lambda0", "0.5", "--calI", "0.1"}).code, 2);
  EXPECT_EQ(run({"trajectory", "--lambda0", "9", "--calI", "0.1", "--mode", "sideways"}).code, 2);
  EXPECT_EQ(run({"trajectory"}).code, 2);
}

TEST(CliCritical, Regimes) {
  auto j = json::parse(run({"--format", "json", "critical", "--lambda0", "9"}).out);
  EXPECT_NEAR(j["I_c"].get<double>(), 1.0 / 6.0, 1e-15);

  j = json::parse(run({"--format", "json", "critical", "--lambda0", "9", "--calI", "0.15"}).out);
  EXPECT_EQ(j["regime"], "SUBCRITICAL");
  EXPECT_GT(j["x_star"].get<double>(), 0.0);
  EXPECT_LT(j["x_star"].get<double>(), 1.0);
  EXPECT_TRUE(j["x_c"].is_null());

  j = json::parse(run({"--format", "json", "critical", "--lambda0", "9", "--calI", "0.19"}).out);
  EXPECT_EQ(j["regime"], "SUPERCRITICAL");
  EXPECT_LT(j["x_c"].get<double>(), 1.0);

  const auto text = run({"critical", "--lambda0", "9", "--calI", "0.1"});
  EXPECT_EQ(text.code, 0);
  EXPECT_NE(text.out.find("x_star_closed_form"), std::string::npos);
  EXPECT_NE(text.out.find("disagrees"), std::string::npos);
}

TEST(CliCritical, FromPositionWithSpreadInputs) {
  const auto r = run({"--format", "json", "critical", "--Q", "12.5e9", "--p0", "1", "--L", "11e9", "--sigma", "2%",
                      "--V", "1.25e9", "--S", "3.7e-4", "--v", "1e6", "--b", "0.77"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_NEAR(j["lambda_c"].get<double>(), 1.5 / (0.02 * std::sqrt(10.0)), 1e-9);
  EXPECT_TRUE(j.contains("lambda_c_spread"));
  EXPECT_NEAR(j["lambda0"].get<double>(), 12.5 / 1.5, 1e-12);
}

TEST(CliBankruptcy, SingleTrialIsReproducible) {
  const std::vector<std::string> args{"--seed", "42", "bankruptcy", "--trials", "1", "--grid", "0.1,0.15,0.2,0.25"};
  const auto a = run(args);
  const auto b = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  const auto ls = lines(a.out);
  ASSERT_EQ(ls.size(), 5u);
  EXPECT_EQ(ls[0], "calI,p_bankrupt,std_error,p_bankrupt_noimpact");
}

TEST(CliBankruptcy, SeveralEtasAndInfeasiblePoints) {
  const auto r = run({"bankruptcy", "--trials", "50", "--eta", "1", "--eta", "10", "--grid", "0.01,0.2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 5u);
  EXPECT_EQ(ls[0], "eta,calI,p_bankrupt,std_error,p_bankrupt_noimpact");
  EXPECT_EQ(ls[3], "10,0.01,infeasible,infeasible,infeasible");
  EXPECT_NE(r.err.find("T < 1"), std::string::npos);
}

TEST(CliBankruptcy, JsonIncludesFit) {
  const auto r = run({"--format", "json", "bankruptcy", "--trials", "400", "--calI-min", "0.1", "--calI-max", "0.25",
                      "--calI-step", "0.03"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  ASSERT_EQ(j.size(), 1u);
  EXPECT_EQ(j[0]["points"].size(), 6u);
  EXPECT_TRUE(j[0].contains("fit"));
}

TEST(CliBankruptcy, UsageErrors) {
  EXPECT_EQ(run({"bankruptcy", "--trials", "0"}).code, 2);
  EXPECT_EQ(run({"bankruptcy", "--lambda0", "1"}).code, 2);
  EXPECT_EQ(run({"bankruptcy", "--eta", "-1"}).code, 2);
  EXPECT_EQ(run({"bankruptcy", "--grid", "0.1,x"}).code, 2);
  EXPECT_EQ(run({"bankruptcy", "--calI-step", "0"}).code, 2);
}

TEST(CliReport, ReferenceAssets) {
  const auto r = run({"report", data("reference_assets.ini")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("MSFT"), std::string::npos);
  EXPECT_NE(r.out.find("(6.3%)"), std::string::npos);
  const auto csv = run({"--format", "csv", "report", data("reference_assets.ini")});
  EXPECT_EQ(lines(csv.out).size(), 8u);
  const auto j = json::parse(run({"--format", "json", "report", data("reference_assets.ini")}).out);
  EXPECT_EQ(j.size(), 7u);
  EXPECT_TRUE(j[6]["I1"].is_null());
  EXPECT_NEAR(j[6]["lambda_c"].get<double>(), 7.5, 1e-12);
}

TEST(CliReport, EmptyAndMissingFiles) {
  const auto path = temp_file("empty.ini");
  std::ofstream(path) << "# nothing here\n";
  const auto r = run({"report", path.string()});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(lines(r.out).size(), 1u);
  std::filesystem::remove(path);
  EXPECT_EQ(run({"report", "/nonexistent.ini"}).code, 1);
  EXPECT_EQ(run({"report"}).code, 2);
}

TEST(CliEstimate, JsonFeedsOtherCommands) {
  const auto est = run({"--format", "json", "estimate", "--series", data("sample_series.csv")});
  ASSERT_EQ(est.code, 0) << est.err;
  const auto j = json::parse(est.out);
  EXPECT_GT(j["sigma"].get<double>(), 0.0);
  EXPECT_TRUE(j.contains("S"));

  const auto path = temp_file("params.json");
  std::ofstream(path) << est.out;
  const auto value = run({"value", "--Q", "1e7", "--p0", "50", "--params", path.string()});
  EXPECT_EQ(value.code, 0) << value.err;
  const auto crit = run({"critical", "--Q", "1e7", "--p0", "50", "--L", "4e8", "--params", path.string()});
  EXPECT_EQ(crit.code, 0) << crit.err;
  std::filesystem::remove(path);
}

TEST(CliEstimate, TextFeedsOtherCommands) {
  const auto est = run({"estimate", "--series", data("sample_series.csv"), "--window", "60", "--halflife", "20"});
  ASSERT_EQ(est.code, 0) << est.err;
  EXPECT_NE(est.out.find("sigma = "), std::string::npos);
  const auto path = temp_file("params.ini");
  std::ofstream(path) << est.out;
  EXPECT_EQ(run({"value", "--Q", "1e6", "--p0", "50", "--params", path.string()}).code, 0);
  std::filesystem::remove(path);
}

TEST(CliEstimate, ConstantSeriesAndErrors) {
  const auto path = temp_file("const.csv");
  {
    std::ofstream f(path);
    f << "date,close,volume\n";
    for (int i = 1; i <= 28; ++i) f << "2024-02-" << (i < 10 ? "0" : "") << i << ",10,500\n";
  }
  const auto r = run({"--format", "json", "estimate", "--series", path.string(), "--window", "20"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["sigma"], 0.0);
  const auto short_file = run({"estimate", "--series", path.string()});
  EXPECT_EQ(short_file.code, 1);
  EXPECT_NE(short_file.err.find("131"), std::string::npos) << short_file.err;
  EXPECT_EQ(run({"estimate", "--series", path.string(), "--window", "5", "--exclusion", "5"}).code, 2);
  std::filesystem::remove(path);
  EXPECT_EQ(run({"estimate"}).code, 2);
}
