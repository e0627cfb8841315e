#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "fraccert/app.hpp"
#include "fraccert/errors.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

std::string cli() {
  const char* p = std::getenv("FRACCERT_CLI");
  return p ? p : "fraccert_cli";
}

fs::path scratch(const std::string& name) {
  fs::path d = fs::temp_directory_path() / ("fraccert_cli_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

int run(const std::string& args, const fs::path& dir) {
  const std::string cmd = cli() + " " + args + " > " + (dir / "stdout").string() + " 2> " + (dir / "stderr").string();
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, NegativeBetaIsConfigError) {
  const fs::path d = scratch("beta");
  EXPECT_EQ(run("certify --beta -1 --out " + (d / "o").string(), d), 2);
  const std::string err = slurp(d / "stderr");
  EXPECT_EQ(std::count(err.begin(), err.end(), '\n'), 1);
  EXPECT_NE(err.find("beta"), std::string::npos);
}

TEST(Cli, UnknownKeyIsConfigError) {
  const fs::path d = scratch("key");
  EXPECT_EQ(run("norm --set bogus=1 --out " + (d / "o").string(), d), 2);
}

TEST(Cli, CertifyPassesAndEmbedsConfig) {
  const fs::path d = scratch("certify");
  EXPECT_EQ(run("certify --out " + (d / "o").string(), d), 0);
  const auto rep = nlohmann::json::parse(slurp(d / "o" / "report.json"));
  EXPECT_EQ(rep["results"]["case"], "II");
  EXPECT_EQ(rep["config"]["beta"], 0.5);
  EXPECT_EQ(rep["config"]["factor"], 2.0);
  EXPECT_TRUE(rep["pass"].get<bool>());
  EXPECT_TRUE(fs::exists(d / "o" / "residuals.csv"));
}

TEST(Cli, FlapTableAndDeterminism) {
  const fs::path d = scratch("flap");
  EXPECT_EQ(run("flap --out " + (d / "a").string(), d), 0);
  EXPECT_EQ(run("flap --out " + (d / "b").string(), d), 0);
  const std::string csv = slurp(d / "a" / "flap_s0.5.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "r,closed_form,pv_quadrature,spectral,max_rel_err");
  EXPECT_EQ(slurp(d / "a" / "report.json"), slurp(d / "b" / "report.json"));
  EXPECT_EQ(slurp(d / "a" / "flap_s0.25.csv"), slurp(d / "b" / "flap_s0.25.csv"));
}

TEST(Cli, FailedCheckExitsOne) {
  const fs::path d = scratch("fail");
  EXPECT_EQ(run("flap --tol 1e-12 --out " + (d / "o").string(), d), 1);
}

TEST(Cli, NumericalErrorExitsThree) {
  const fs::path d = scratch("num");
  EXPECT_EQ(run("riesz --s 0.5 --out " + (d / "o").string(), d), 3);
}

TEST(Cli, ConfigFileAndOverrides) {
  const fs::path d = scratch("file");
  std::ofstream(d / "cfg.json") << R"({"beta": 2.0, "p": 2})";
  EXPECT_EQ(run("norm --config " + (d / "cfg.json").string() + " --p 1 --out " + (d / "o").string(), d), 0);
  const auto rep = nlohmann::json::parse(slurp(d / "o" / "report.json"));
  EXPECT_EQ(rep["config"]["p"], 1);
  EXPECT_EQ(rep["config"]["beta"], 2.0);
  EXPECT_NEAR(rep["results"]["norm"].get<double>(), 3.1316, 1e-3);
}

TEST(App, ResolveAndOverrides) {
  using fraccert::app::resolve;
  const auto c = resolve("simulate", nullptr, {{"T", 0.25}});
  EXPECT_EQ(c["T"], 0.25);
  EXPECT_EQ(c["M"], 512);
  EXPECT_THROW(resolve("simulate", nullptr, {{"M", 100}}), fraccert::ConfigError);
  EXPECT_THROW(resolve("nothing", nullptr, nullptr), fraccert::ConfigError);
  const auto [k, v] = fraccert::app::parse_override("u0=bump");
  EXPECT_EQ(k, "u0");
  EXPECT_EQ(v, "bump");
  EXPECT_EQ(fraccert::app::parse_override("R_values=[1,2]").second.size(), 2u);
}

TEST(App, AtomicWriteReplaces) {
  const fs::path d = scratch("atomic");
  fraccert::app::write_atomic(d / "x.txt", "one");
  fraccert::app::write_atomic(d / "x.txt", "two");
  EXPECT_EQ(slurp(d / "x.txt"), "two");
  EXPECT_FALSE(fs::exists(d / "x.txt.tmp"));
}
