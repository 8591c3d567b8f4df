#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "ccl/cli.hpp"

using namespace ccl;

namespace {

struct CliRun {
  int code;
  std::string out, err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& text) {
  std::filesystem::path p = std::filesystem::path(testing::TempDir()) / name;
  std::ofstream(p) << text;
  return p.string();
}

std::string mu_text(const TrilinearForm& mu) {
  std::string s;
  for (const Rational& v : mu.values()) s += to_string(v) + "\n";
  return s;
}

}  // namespace

TEST(Cli, Classify) {
  CliRun r = run({"classify", "--k", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["regime"], "TwoComponents");
  EXPECT_EQ(j["cubic_components"], 2);
  EXPECT_EQ(j["hessian_param"], "-121/75");
  EXPECT_EQ(run({"classify", "--k", "1/2"}).code, 0);
  EXPECT_EQ(run({"classify", "--k", "abc"}).code, 2);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"region", "--k", "5"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
  CliRun h = run({"region", "--help"});
  EXPECT_EQ(h.code, 0);
  EXPECT_NE(h.out.find("--point"), std::string::npos);
}

TEST(Cli, Region) {
  CliRun r = run({"region", "--k", "5", "--point=-2,10"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["label"], "R1");
  EXPECT_EQ(j["predicted_arcs"], 1);
  EXPECT_EQ(nlohmann::json::parse(run({"region", "--k", "5", "--point", "10,10"}).out)["label"], "NoneOfP");
  CliRun b = run({"region", "--k", "5", "--point=-0.25,3"});
  EXPECT_EQ(b.code, 3);
  EXPECT_TRUE(nlohmann::json::parse(b.out)["boundary"].get<bool>());
  EXPECT_EQ(run({"region", "--k", "0", "--point", "1,1"}).code, 2);
  EXPECT_EQ(run({"region", "--k", "5", "--point", "1"}).code, 2);
}

TEST(Cli, Steinian) {
  CliRun r = run({"steinian", "--k", "5", "--point", "0,1,0"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j["exact"].get<bool>());
  Vec3d u = trace_branch(Rational(5), {CurveKind::Hessian, "C2"}, 64).point(20);
  char buf[128];
  std::snprintf(buf, sizeof buf, "%.17g,%.17g,1", u[0], u[1]);
  CliRun s = run({"steinian", "--k", "5", "--point", buf});
  EXPECT_EQ(s.code, 0);
  EXPECT_FALSE(nlohmann::json::parse(s.out)["exact"].get<bool>());
  EXPECT_EQ(run({"steinian", "--k", "5", "--point", "0,0,1"}).code, 2);
  EXPECT_EQ(run({"steinian", "--k", "5", "--point", "1/2,1/2,1"}).code, 2);
}

TEST(Cli, ConeComponentsAndScan) {
  CliRun r = run({"cone-components", "--k", "5"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(nlohmann::json::parse(r.out)["count"], 4);
  EXPECT_EQ(nlohmann::json::parse(run({"cone-components", "--k", "-1"}).out)["count"], 3);
  CliRun s = run({"scan", "--k", "5", "--n", "4"});
  ASSERT_EQ(s.code, 0);
  EXPECT_EQ(std::count(s.out.begin(), s.out.end(), '\n'), 2 + 16);
  EXPECT_EQ(run({"scan", "--k", "5", "--n", "1"}).code, 2);
}

TEST(Cli, PlotToFileIsDeterministic) {
  std::string a = (std::filesystem::path(testing::TempDir()) / "a.svg").string();
  std::string b = (std::filesystem::path(testing::TempDir()) / "b.svg").string();
  ASSERT_EQ(run({"plot", "--k", "5", "--resolution", "512", "--out", a}).code, 0);
  ASSERT_EQ(run({"plot", "--k", "5", "--resolution", "512", "--out", b}).code, 0);
  std::ifstream fa(a), fb(b);
  std::string sa((std::istreambuf_iterator<char>(fa)), {}), sb((std::istreambuf_iterator<char>(fb)), {});
  EXPECT_FALSE(sa.empty());
  EXPECT_EQ(sa, sb);
  EXPECT_EQ(run({"plot", "--k", "1"}).code, 2);
  EXPECT_EQ(run({"plot", "--k", "5", "--window", "1,0,0,1"}).code, 2);
  EXPECT_NE(run({"plot", "--k", "5", "--heatmap", "8"}).out.find("data-sig"), std::string::npos);
}

TEST(Cli, WallCheck) {
  std::string f12 = temp_file("mu12.txt", mu_text(ParamCubic(Rational(5)).form().scaled(Rational(12))));
  CliRun ok = run({"wall-check", "--mu-file", f12, "--p1", "0,0,0"});
  ASSERT_EQ(ok.code, 0) << ok.err;
  EXPECT_TRUE(nlohmann::json::parse(ok.out)["ok"].get<bool>());
  CliRun bad = run({"wall-check", "--mu-file", f12, "--p1", "2,0,0"});
  EXPECT_EQ(bad.code, 0);
  auto j = nlohmann::json::parse(bad.out);
  EXPECT_FALSE(j["ok"].get<bool>());
  EXPECT_EQ(j["witness"]["condition"], "mod24");
  std::string f1 = temp_file("mu1.txt", mu_text(ParamCubic(Rational(5)).form()));
  EXPECT_EQ(run({"wall-check", "--mu-file", f1, "--p1", "0,0,0"}).code, 2);
  std::string keyed = temp_file("keyed.txt", "mu111=0 mu112=0 mu113=0 mu122=0 mu123=0\nmu133=0 mu222=0 mu223=0 mu233=0 mu333=0\n");
  EXPECT_EQ(run({"wall-check", "--mu-file", keyed, "--p1", "24,0,0"}).code, 0);
  std::string shortf = temp_file("short.txt", "1 2 3\n");
  EXPECT_EQ(run({"wall-check", "--mu-file", shortf, "--p1", "0,0,0"}).code, 2);
  EXPECT_EQ(run({"wall-check", "--mu-file", "/nonexistent/mu", "--p1", "0,0,0"}).code, 2);
}

TEST(Cli, Obstruct) {
  CliRun a = run({"obstruct", "--family", "12,-3", "--p1", "0,0,0", "--b3", "6"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(nlohmann::json::parse(a.out)["verdict"], "NoCY_OneRealComponent");
  CliRun b = run({"obstruct", "--family", "12,5", "--c2", "1,1,-2", "--b3", "6"});
  ASSERT_EQ(b.code, 0) << b.err;
  auto j = nlohmann::json::parse(b.out);
  EXPECT_EQ(j["verdict"], "NoCY_C2NotPositive");
  EXPECT_EQ(j["input"]["p1"], (nlohmann::json{-24, -24, 48}));
  EXPECT_EQ(nlohmann::json::parse(run({"obstruct", "--family", "12,5", "--c2", "0,0,1", "--b3", "6"}).out)["verdict"],
            "NecessaryConditionsPass");
  EXPECT_EQ(nlohmann::json::parse(run({"obstruct", "--family", "1,5"}).out)["verdict"], "InvalidWallData");
  EXPECT_EQ(run({"obstruct", "--family", "12,5", "--b3", "3"}).code, 2);
  EXPECT_EQ(run({"obstruct", "--b3", "6"}).code, 2);
  EXPECT_EQ(run({"obstruct", "--family", "12,5", "--p1", "0,0,0", "--c2", "1,1,1"}).code, 2);
}

TEST(Cli, GenNoCy) {
  CliRun a = run({"gen-no-cy", "--k", "-3", "--m", "12", "--b3", "6"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(nlohmann::json::parse(a.out)["verdict"]["verdict"], "NoCY_OneRealComponent");
  CliRun b = run({"gen-no-cy", "--k", "5"});
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(nlohmann::json::parse(b.out)["verdict"]["verdict"], "NoCY_C2NotPositive");
  EXPECT_EQ(run({"gen-no-cy", "--k", "5", "--b3", "3"}).code, 2);
}

TEST(Cli, ConfigFile) {
  std::string cfg = temp_file("ccl.ini", "[region]\nk=5\npoint=\"-2,10\"\n");
  CliRun r = run({"--config", cfg, "region"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["label"], "R1");
}
