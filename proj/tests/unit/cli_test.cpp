#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli_frontend.hpp"
#include "hybridpir/serialization.hpp"

namespace hybridpir::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "hybridpir");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("hybridpir_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

TEST(Cli, PlanGolden) {
  const auto r = invoke({"plan", "-N", "6", "-M", "2", "-t", "5", "-K", "2"});
  EXPECT_EQ(r.code, kOk);
  EXPECT_NE(r.out.find("mu = 5/12"), std::string::npos);
  EXPECT_NE(r.out.find("R = 30"), std::string::npos);
}

TEST(Cli, PlanRejectsSpanBelowDimension) {
  const auto r = invoke({"plan", "-N", "6", "-M", "2", "-t", "2", "-K", "3"});
  EXPECT_EQ(r.code, kInvalidParameters);
  EXPECT_FALSE(r.err.empty());
}

TEST(Cli, PlanFourThreeThreeTwoJson) {
  const auto r = invoke({"plan", "-N", "4", "-M", "3", "-t", "3", "-K", "2", "--format", "json"});
  ASSERT_EQ(r.code, kOk);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["R"], 36);
}

TEST(Cli, SimulateGolden) {
  const auto r = invoke({"simulate", "-N", "6", "-M", "2", "-t", "5", "-K", "2", "--seed", "1"});
  EXPECT_EQ(r.code, kOk) << r.err;
  EXPECT_NE(r.out.find("cost 7/5 (expected 7/5), decode OK"), std::string::npos);
  EXPECT_NE(r.out.find("[14,14,14,14,14,14] total 84"), std::string::npos);
}

TEST(Cli, SimulateRequiresSeed) {
  EXPECT_EQ(invoke({"simulate", "-N", "6", "-M", "2", "-t", "5", "-K", "2"}).code,
            kInvalidParameters);
  EXPECT_EQ(invoke({"audit", "-N", "3", "-M", "2", "-t", "2", "-K", "1"}).code,
            kInvalidParameters);
}

TEST(Cli, SameSeedSameTranscript) {
  const auto dir = scratch("transcript");
  const std::vector<std::string> base{"simulate", "-N", "4", "-M", "3", "-t", "3", "-K", "2",
                                      "--seed", "77", "--output-dir", dir.string()};
  auto a = base, b = base;
  a.insert(a.end(), {"--transcript", "a.json"});
  b.insert(b.end(), {"--transcript", "b.json"});
  ASSERT_EQ(invoke(a).code, kOk);
  ASSERT_EQ(invoke(b).code, kOk);
  const auto read = [](const fs::path& p) {
    std::ifstream f(p);
    return std::string(std::istreambuf_iterator<char>(f), {});
  };
  const auto ta = read(dir / "a.json");
  EXPECT_FALSE(ta.empty());
  EXPECT_EQ(ta, read(dir / "b.json"));
  const auto j = nlohmann::json::parse(ta);
  EXPECT_EQ(j["cost"], "19/9");
  EXPECT_EQ(j["decode_ok"], true);
}

TEST(Cli, MessagesExportImport) {
  const auto dir = scratch("messages");
  const std::vector<std::string> base{"simulate", "-N", "3", "-M", "2", "-t", "2", "-K", "2",
                                      "--output-dir", dir.string()};
  auto exp = base;
  exp.insert(exp.end(), {"--seed", "3", "--export-messages", "w.bin"});
  ASSERT_EQ(invoke(exp).code, kOk);
  auto imp = base;
  imp.insert(imp.end(), {"--seed", "4", "--import-messages", "w.bin", "--theta", "2"});
  EXPECT_EQ(invoke(imp).code, kOk);
  auto wrong = std::vector<std::string>{"simulate", "-N", "6", "-M", "2", "-t", "5", "-K", "2",
                                        "--seed", "1", "--output-dir", dir.string(),
                                        "--import-messages", "w.bin"};
  EXPECT_EQ(invoke(wrong).code, kInvalidParameters);
}

TEST(Cli, SimulateSweepSmall) {
  const auto r = invoke({"simulate", "--sweep", "--max-n", "3", "--max-m", "2", "--seed", "5"});
  EXPECT_EQ(r.code, kOk) << r.out;
  EXPECT_NE(r.out.find("0 failures"), std::string::npos);
}

TEST(Cli, AuditExhaustiveAndMutation) {
  auto r = invoke({"audit", "-N", "3", "-M", "2", "-t", "2", "-K", "1", "--exhaustive",
                   "--seed", "1"});
  EXPECT_EQ(r.code, kOk) << r.out;
  EXPECT_NE(r.out.find("TV = 0"), std::string::npos);
  r = invoke({"audit", "-N", "3", "-M", "2", "-t", "2", "-K", "1", "--exhaustive", "--seed", "1",
              "--disable-permutations"});
  EXPECT_EQ(r.code, kVerificationFailure);
  r = invoke({"audit", "-N", "6", "-M", "2", "-t", "5", "-K", "2", "--exhaustive", "--seed", "1",
              "--enumeration-bound", "5"});
  EXPECT_EQ(r.code, kInvalidParameters);
  r = invoke({"audit", "-N", "3", "-M", "1", "-t", "2", "-K", "1", "--exhaustive", "--seed", "1"});
  EXPECT_EQ(r.code, kOk);
}

TEST(Cli, TradeoffImprovements) {
  const auto r = invoke({"tradeoff", "-N", "6", "-M", "2"});
  ASSERT_EQ(r.code, kOk);
  for (const auto* s : {"(5/24, 9/5)", "(5/18, 8/5)", "(5/12, 7/5)", "(2/9, 7/4)"}) {
    EXPECT_NE(r.out.find(s), std::string::npos) << s;
  }
}

TEST(Cli, TradeoffSinglePointAndCsvFiles) {
  const auto r = invoke({"tradeoff", "-N", "1", "-M", "2", "--format", "csv"});
  ASSERT_EQ(r.code, kOk);
  const auto pts = curve_from_csv(r.out);
  ASSERT_EQ(pts.size(), 1u);
  EXPECT_EQ(pts[0].mu, Rational(1));
  EXPECT_EQ(pts[0].cost, Rational(2));

  const auto dir = scratch("tradeoff");
  ASSERT_EQ(invoke({"tradeoff", "-N", "6", "-M", "2", "--write-files", "--output-dir",
                    dir.string()}).code,
            kOk);
  std::ifstream f(dir / "hybrid_hull.csv");
  const std::string text(std::istreambuf_iterator<char>(f), {});
  EXPECT_EQ(curve_from_csv(text), lower_convex_hull(hybrid_corner_points(6, 2)).points);
  EXPECT_TRUE(fs::exists(dir / "curves.json"));
}

TEST(Cli, OutputDirFromEnvironment) {
  const auto dir = scratch("env");
  ::setenv("HYBRIDPIR_OUTPUT_DIR", dir.string().c_str(), 1);
  const auto r = invoke({"tradeoff", "-N", "3", "-M", "2", "--write-files"});
  ::unsetenv("HYBRIDPIR_OUTPUT_DIR");
  EXPECT_EQ(r.code, kOk);
  EXPECT_TRUE(fs::exists(dir / "hybrid_corners.csv"));
}

TEST(Cli, GoldenTable) {
  const auto r = invoke({"golden"});
  ASSERT_EQ(r.code, kOk);
  EXPECT_NE(r.out.find("| DB1"), std::string::npos);
  EXPECT_NE(r.out.find("cost=7/5"), std::string::npos);
  EXPECT_EQ(r.out, invoke({"golden"}).out);
}

TEST(Cli, BadArguments) {
  EXPECT_EQ(invoke({}).code, kInvalidParameters);
  EXPECT_EQ(invoke({"plan", "-N", "x"}).code, kInvalidParameters);
  EXPECT_EQ(invoke({"simulate", "-N", "6", "-M", "2", "-t", "5", "-K", "2", "--seed", "1",
                    "--field", "prime:5"}).code,
            kInvalidParameters);
}

}  // namespace
}  // namespace hybridpir::cli
