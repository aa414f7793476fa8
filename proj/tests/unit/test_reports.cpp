#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

#include "fglab/reports.hpp"

using namespace fglab;

namespace {

Json strip_timings(Json j) {
  j.erase("timings");
  return j;
}

}  // namespace

TEST(Reports, ConfigTextAndOverrides) {
  auto kv = parse_config_text("# grid point\np = 5\n N=4  # precision\n\ngroup = gm\nu = 0, 1\n");
  EXPECT_EQ(kv.at("p"), "5");
  EXPECT_EQ(kv.at("N"), "4");
  RunConfig cfg;
  cfg.apply(kv);
  EXPECT_EQ(cfg.p, 5u);
  EXPECT_EQ(cfg.N, 4);
  EXPECT_EQ(cfg.group, "multiplicative");
  EXPECT_EQ(cfg.u, (std::vector<i64>{0, 1}));
  // a later layer overrides only the keys it names
  cfg.apply({{"N", "7"}});
  EXPECT_EQ(cfg.N, 7);
  EXPECT_EQ(cfg.p, 5u);

  EXPECT_THROW(cfg.apply({{"q", "3"}}), ConfigError);
  EXPECT_THROW(cfg.apply({{"N", "six"}}), ConfigError);
  EXPECT_THROW(cfg.apply({{"group", "elliptic"}}), ConfigError);
  EXPECT_THROW(parse_config_text("p 3\n"), ConfigError);
}

TEST(Reports, ConstructMultiplicative) {
  RunConfig cfg;
  cfg.group = "multiplicative";
  cfg.N = 4;
  auto r = run_command("construct", cfg);
  EXPECT_EQ(r.exit_code, 0);
  const Json& g = r.report["summary"]["group"]["serialized"];
  // X + Y + XY
  ASSERT_EQ(g["law"].size(), 3u);
  for (const auto& term : g["law"]) EXPECT_EQ(term["c"], Json::array({1}));
  EXPECT_EQ(g["height"], 1);
  for (const char* key : {"schema_version", "config", "checks", "summary", "timings"})
    EXPECT_TRUE(r.report.contains(key)) << key;
}

TEST(Reports, FeasibilityAndConfigErrorsExitTwo) {
  RunConfig cfg;
  cfg.f = 2;
  cfg.N = 12;
  auto r = run_command("verify", cfg);
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.report["summary"]["error"].get<std::string>().find("864"), std::string::npos);
  EXPECT_TRUE(r.checks.empty());

  RunConfig bad;
  bad.p = 4;
  EXPECT_EQ(run_command("torsion", bad).exit_code, 2);
  EXPECT_EQ(run_command("frobnicate", RunConfig{}).exit_code, 2);
}

TEST(Reports, DeterministicAcrossWorkerCounts) {
  RunConfig cfg;
  cfg.N = 5;
  auto a = run_command("verify", cfg);
  cfg.jobs = 3;
  auto b = run_command("verify", cfg);
  EXPECT_EQ(a.exit_code, 0);
  EXPECT_EQ(strip_timings(a.report).dump(), strip_timings(b.report).dump());
}

TEST(Reports, FailedChecksDoNotAbortTheRun) {
  // Honda group over Z_3 with h = 2: breaks need the full structure and are skipped
  RunConfig cfg;
  cfg.group = "honda";
  cfg.N = 4;
  auto r = run_command("torsion", cfg);
  int skipped = 0;
  for (const auto& c : r.checks) skipped += c.status == "skipped";
  EXPECT_EQ(skipped, 2);
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.report["summary"]["total"], r.checks.size());
}

TEST(Reports, CustomGroupFile) {
  const std::string path = ::testing::TempDir() + "fglab_custom_group.txt";
  {
    std::ofstream out(path);
    out << "# 3X + 3X^2 + X^3\n1 3\n2 3\n3 1\n";
  }
  RunConfig cfg;
  cfg.group = "custom";
  cfg.file = path;
  cfg.N = 4;
  auto r = run_command("construct", cfg);
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.report["summary"]["group"]["height"], 1);

  std::ofstream(path) << "1 3\n3 2\n";
  EXPECT_EQ(run_command("construct", cfg).exit_code, 2);
  std::remove(path.c_str());
}
