#include <json.hpp>

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kConfigs = ESTC_CONFIG_DIR;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("estc_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run(const std::string& args) {
  const std::string cmd = std::string(ESTC_BINARY) + " " + args + " 2>/dev/null >/dev/null";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

json load(const fs::path& p) { return json::parse(slurp(p)); }

fs::path write_config(const fs::path& dir, const json& j) {
  const fs::path p = dir / "config.json";
  std::ofstream(p) << j.dump(2);
  return p;
}

json circular() { return load(kConfigs / "circular.json"); }

}  // namespace

TEST(Cli, VolkovValidatePasses) {
  const auto out = scratch("volkov");
  ASSERT_EQ(run("volkov-validate --config " + (kConfigs / "volkov.json").string() + " --out " + out.string()), 0);
  EXPECT_TRUE(load(out / "volkov.json").at("pass").get<bool>());
}

TEST(Cli, OracleCompare) {
  const auto out = scratch("oracle");
  ASSERT_EQ(run("oracle-compare --config " + (kConfigs / "oracle_small.json").string() + " --out " + out.string()), 0);
  const auto r = load(out / "oracle.json");
  EXPECT_TRUE(r.at("pass").get<bool>());
  EXPECT_LT(r.at("max_abs_difference").get<double>(), 1e-10);
}

TEST(Cli, OracleDetectsTampering) {
  const auto out = scratch("tamper");
  auto c = load(kConfigs / "oracle_small.json");
  c["oracle"]["tamper"] = true;
  EXPECT_EQ(run("oracle-compare --config " + write_config(out, c).string() + " --out " + out.string()), 4);
  EXPECT_FALSE(load(out / "oracle.json").at("pass").get<bool>());
}

TEST(Cli, OracleSizeGuard) {
  const auto out = scratch("guard");
  auto c = load(kConfigs / "oracle_small.json");
  c["oracle"]["guard"] = 8;
  EXPECT_EQ(run("oracle-compare --config " + write_config(out, c).string() + " --out " + out.string()), 2);
  EXPECT_EQ(load(out / "error.json").at("error"), "oracle.size_guard");
}

TEST(Cli, LongitudinalFieldIsConfigError) {
  const auto out = scratch("longitudinal");
  auto c = circular();
  c["field"].push_back({{"j", 1}, {"k", 1}, {"a", 0.01}, {"b", 0}});
  EXPECT_EQ(run("scan --config " + write_config(out, c).string() + " --out " + out.string()), 2);
  const auto e = load(out / "error.json");
  EXPECT_EQ(e.at("error"), "field.constraint");
  EXPECT_EQ(e.at("exit_code"), 2);
}

TEST(Cli, ZeroIntensityAndOmega) {
  const auto out = scratch("zero");
  auto c = circular();
  c["field"] = json::array();
  EXPECT_EQ(run("scan --config " + write_config(out, c).string() + " --out " + out.string()), 2);
  EXPECT_EQ(load(out / "error.json").at("error"), "field.zero_intensity");
  c = circular();
  c["omega"] = 0;
  EXPECT_EQ(run("scan --config " + write_config(out, c).string() + " --out " + out.string()), 2);
  EXPECT_EQ(load(out / "error.json").at("error"), "omega.nonpositive");
}

TEST(Cli, MissingAndMalformedConfig) {
  const auto out = scratch("missing");
  EXPECT_EQ(run("scan --config " + (out / "nope.json").string() + " --out " + out.string()), 2);
  std::ofstream(out / "bad.json") << "{ not json";
  EXPECT_EQ(run("scan --config " + (out / "bad.json").string() + " --out " + out.string()), 2);
  EXPECT_EQ(load(out / "error.json").at("error"), "config.parse");
  EXPECT_EQ(run("scan --out " + out.string()), 2);
  EXPECT_EQ(run("frobnicate --config x"), 2);
}

TEST(Cli, ScanIsByteIdentical) {
  const auto a = scratch("scan_a"), b = scratch("scan_b");
  auto c = circular();
  c["g_max"] = 2;
  c["xi"]["steps"] = 5;
  const auto cfg = write_config(a, c);
  ASSERT_EQ(run("scan --config " + cfg.string() + " --jobs 1 --out " + a.string()), 0);
  ASSERT_EQ(run("scan --config " + cfg.string() + " --jobs 3 --out " + b.string()), 0);
  for (const char* f : {"scan.csv", "scan.json"}) {
    EXPECT_FALSE(slurp(a / f).empty());
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  }
  const std::string csv = slurp(a / "scan.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "xi,R1,R2,R3,R4");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 6);
}

TEST(Cli, GroundStateAndPrecession) {
  const auto out = scratch("precession");
  auto c = circular();
  c["precession"] = {{"alpha", 0.7853981633974483}, {"delta", 0}, {"t_min", 0},
                     {"t_max", 4e-14},              {"steps", 5}, {"handedness", "auto"}};
  ASSERT_EQ(run("precession --config " + write_config(out, c).string() + " --out " + out.string()), 0);
  const auto d = load(out / "doublet.json");
  EXPECT_NEAR(d.at("xi0a").get<double>(), 1.9876e-4, 2e-8);
  EXPECT_NEAR(d.at("xi0b").get<double>(), 1.9916e-4, 2e-8);
  EXPECT_FALSE(d.at("partial").get<bool>());
  const std::string csv = slurp(out / "spin.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,Sx,Sy,Sz,E");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 6);
}

TEST(Cli, BadHandedness) {
  const auto out = scratch("hand");
  auto c = circular();
  c["precession"] = {{"alpha", 0.5}, {"steps", 3}, {"handedness", 2}};
  EXPECT_EQ(run("precession --config " + write_config(out, c).string() + " --out " + out.string()), 2);
  EXPECT_EQ(load(out / "error.json").at("error"), "precession.handedness");
}
