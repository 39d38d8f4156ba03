#include "cli.hpp"

#include "confset/bench.hpp"
#include "confset/serialize.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace confset::cli {
namespace {

namespace fs = std::filesystem;

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("confset_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, NoArgumentsIsUsageError) {
  const CliResult r = run({});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_FALSE(r.err.empty());
}

TEST_F(CliTest, UnknownFlagAndBadValues) {
  EXPECT_EQ(run({"gen", "--n", "5", "--bogus"}).code, kExitUsage);
  EXPECT_EQ(run({"gen", "--n", "five"}).code, kExitUsage);
  EXPECT_EQ(run({"gen"}).code, kExitUsage);
  EXPECT_EQ(run({"gen", "--n", "5", "--k", "1"}).code, kExitUsage);
  EXPECT_EQ(run({"gen", "--n", "0"}).code, kExitUsage);
  EXPECT_EQ(run({"bench-plugin", "--betas", "2,10", "--k", "10"}).code, kExitUsage);
  EXPECT_EQ(run({"fit", "--rule", "se", "--beta", "2"}).code, kExitUsage);
}

TEST_F(CliTest, VersionAndHelpExitZero) {
  const CliResult v = run({"--version"});
  EXPECT_EQ(v.code, kExitOk);
  EXPECT_NE(v.out.find(kLibraryVersion), std::string::npos);
  EXPECT_EQ(run({"--help"}).code, kExitOk);
  EXPECT_EQ(run({"fit", "--help"}).code, kExitOk);
}

TEST_F(CliTest, GenWritesRequestedShape) {
  const CliResult r = run({"-q", "gen", "--n", "25", "--k", "4", "--d", "3", "--seed", "5"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "x_1,x_2,x_3,y");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 3);
  }
  EXPECT_EQ(rows, 25);
  EXPECT_TRUE(r.err.empty());
}

TEST_F(CliTest, GenUnlabeledAndPathology) {
  const CliResult u = run({"-q", "gen", "--n", "3", "--k", "3", "--d", "2", "--unlabeled"});
  ASSERT_EQ(u.code, kExitOk);
  EXPECT_EQ(u.out.substr(0, u.out.find('\n')), "x_1,x_2");
  const CliResult p = run({"-q", "gen", "--dist", "pathology", "--n", "4"});
  ASSERT_EQ(p.code, kExitOk) << p.err;
  EXPECT_EQ(p.out.substr(0, p.out.find('\n')), "x_1,x_2,y");
}

TEST_F(CliTest, GenIsDeterministic) {
  const std::vector<std::string> args{"-q", "gen", "--n", "50", "--k", "3", "--d", "2", "--seed", "9"};
  EXPECT_EQ(run(args).out, run(args).out);
  auto other = args;
  other.back() = "10";
  EXPECT_NE(run(args).out, run(other).out);
}

TEST_F(CliTest, FitEvalPipeline) {
  const std::string spec = path("spec.json"), train = path("train.csv"), pool = path("pool.csv"),
                    test = path("test.csv"), rule = path("rule.json");
  const std::vector<std::string> common{"--k", "4", "--d", "3", "--means-seed", "2"};
  auto gen = [&](std::vector<std::string> extra) {
    std::vector<std::string> a{"-q", "gen"};
    a.insert(a.end(), common.begin(), common.end());
    a.insert(a.end(), extra.begin(), extra.end());
    return run(a);
  };
  ASSERT_EQ(gen({"--n", "300", "--seed", "1", "--out", train, "--spec-out", spec}).code, kExitOk);
  ASSERT_EQ(gen({"--n", "500", "--seed", "2", "--unlabeled", "--out", pool}).code, kExitOk);
  ASSERT_EQ(gen({"--n", "2000", "--seed", "3", "--out", test}).code, kExitOk);
  EXPECT_TRUE(read_json_file(spec).contains("invocation"));

  const CliResult f = run({"-q", "fit", "--rule", "sse", "--beta", "2", "--train", train, "--unlabeled", pool, "--estimator",
                     "knn", "--seed", "4", "--out", rule});
  ASSERT_EQ(f.code, kExitOk) << f.err;
  const json fitted = read_json_file(rule);
  EXPECT_EQ(fitted.at("mode"), "threshold");
  EXPECT_EQ(fitted.at("invocation").at("rule"), "sse");
  EXPECT_EQ(fitted.at("invocation").at("seed"), 4);

  const CliResult e = run({"-q", "eval", "--rule", rule, "--test", test, "--spec", spec, "--mc-size", "100000"});
  ASSERT_EQ(e.code, kExitOk) << e.err;
  const json report = json::parse(e.out);
  for (const char* key : {"rule", "rule_digest", "mode", "beta", "threshold", "test_size", "error", "info", "theta_star",
                          "hamming", "excess", "oracle_error", "oracle_info", "invocation"})
    EXPECT_TRUE(report.contains(key)) << key;
  EXPECT_EQ(report.at("test_size"), 2000);
  EXPECT_NEAR(report.at("info").get<double>(), 2.0, 0.3);
  EXPECT_NEAR(report.at("oracle_info").get<double>(), 2.0, 0.15);
  EXPECT_EQ(report.at("rule_digest"), rule_digest(rule_from_json(fitted)));

  // fitting twice with the same arguments gives the same rule
  const std::string rule2 = path("rule2.json");
  ASSERT_EQ(run({"-q", "fit", "--rule", "sse", "--beta", "2", "--train", train, "--unlabeled", pool, "--estimator", "knn",
                 "--seed", "4", "--out", rule2})
                .code,
            kExitOk);
  json a = read_json_file(rule), b = read_json_file(rule2);
  a.erase("invocation");
  b.erase("invocation");
  EXPECT_EQ(a.dump(), b.dump());
}

TEST_F(CliTest, FitOtherRules) {
  const std::string spec = path("spec.json"), train = path("train.csv");
  ASSERT_EQ(run({"-q", "gen", "--n", "100", "--k", "3", "--d", "2", "--out", train, "--spec-out", spec}).code, kExitOk);
  const CliResult top = run({"-q", "fit", "--rule", "topbeta", "--beta", "3", "--train", train, "--estimator", "softmax",
                       "--iters", "20"});
  ASSERT_EQ(top.code, kExitOk) << top.err;
  EXPECT_TRUE(json::parse(top.out).at("threshold").is_null());
  const CliResult se = run({"-q", "fit", "--rule", "se", "--beta", "1", "--train", train, "--estimator", "oracle", "--spec", spec});
  ASSERT_EQ(se.code, kExitOk) << se.err;
  const CliResult oracle = run({"-q", "fit", "--rule", "oracle", "--beta", "1", "--spec", spec, "--mc-size", "10000"});
  ASSERT_EQ(oracle.code, kExitOk) << oracle.err;
  EXPECT_EQ(json::parse(oracle.out).at("model").at("kind"), "oracle");
  EXPECT_EQ(run({"-q", "fit", "--rule", "oracle", "--beta", "1"}).code, kExitUsage);
  EXPECT_EQ(run({"-q", "fit", "--rule", "sse", "--beta", "1", "--train", train}).code, kExitUsage);
  EXPECT_EQ(run({"-q", "fit", "--rule", "se", "--beta", "3", "--train", train}).code, kExitUsage);
}

TEST_F(CliTest, MalformedInputsAreUsageErrors) {
  const std::string bad_csv = path("bad.csv"), bad_json = path("bad.json"), test = path("test.csv");
  std::ofstream(bad_csv) << "x_1,y\nnan,1\n";
  std::ofstream(bad_json) << "{\"mode\": ";
  ASSERT_EQ(run({"-q", "gen", "--n", "10", "--k", "3", "--d", "2", "--out", test}).code, kExitOk);
  EXPECT_EQ(run({"-q", "fit", "--rule", "se", "--beta", "1", "--train", bad_csv}).code, kExitUsage);
  EXPECT_EQ(run({"-q", "eval", "--rule", bad_json, "--test", test}).code, kExitUsage);
  EXPECT_EQ(run({"-q", "eval", "--rule", path("missing.json"), "--test", test}).code, kExitUsage);
}

TEST_F(CliTest, UnwritableOutputIsRuntimeError) {
  const std::string blocker = path("file");
  std::ofstream(blocker) << "x";
  EXPECT_EQ(run({"-q", "gen", "--n", "5", "--out", blocker + "/sub/out.csv"}).code, kExitRuntime);
  EXPECT_EQ(run({"-q", "pathology", "--m", "1000", "--mc-size", "1000", "--out", blocker + "/dir"}).code, kExitRuntime);
}

TEST_F(CliTest, ConfigFileAndPrecedence) {
  const std::string cfg = path("cfg.json");
  std::ofstream(cfg) << R"({"n": 7, "k": 3, "d": 2, "seed": 11, "unlabeled": true})";
  const CliResult a = run({"-q", "--config", cfg, "gen"});
  ASSERT_EQ(a.code, kExitOk) << a.err;
  EXPECT_EQ(std::count(a.out.begin(), a.out.end(), '\n'), 8);
  EXPECT_EQ(a.out, run({"-q", "gen", "--n", "7", "--k", "3", "--d", "2", "--seed", "11", "--unlabeled"}).out);

  const CliResult b = run({"-q", "--config", cfg, "gen", "--n", "3"});
  ASSERT_EQ(b.code, kExitOk) << b.err;
  EXPECT_EQ(std::count(b.out.begin(), b.out.end(), '\n'), 4);

  std::ofstream(path("extra.json")) << R"({"n": 7, "colour": "red"})";
  EXPECT_EQ(run({"-q", "--config", path("extra.json"), "gen"}).code, kExitUsage);
  std::ofstream(path("broken.json")) << "{";
  EXPECT_EQ(run({"-q", "--config", path("broken.json"), "gen"}).code, kExitUsage);
}

TEST_F(CliTest, ConfigArraysForListOptions) {
  const std::string cfg = path("bench.json");
  std::ofstream(cfg) << R"({"betas": [1, 2], "k": 4, "d": 2, "n-unlabeled": 200, "m": 100, "reps": 2, "mc-size": 5000})";
  const CliResult r = run({"-q", "--config", cfg, "bench-oracle"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 5);
}

TEST_F(CliTest, SeedFromEnvironment) {
  const std::vector<std::string> args{"-q", "gen", "--n", "5", "--k", "3", "--d", "2"};
  const std::string seed0 = run(args).out;
  ::setenv("CONFSET_SEED", "123", 1);
  const std::string env = run(args).out;
  auto explicit_args = args;
  explicit_args.insert(explicit_args.end(), {"--seed", "123"});
  const std::string flag = run(explicit_args).out;
  ::unsetenv("CONFSET_SEED");
  EXPECT_NE(seed0, env);
  EXPECT_EQ(env, flag);
}

TEST_F(CliTest, BenchPluginWritesCsvAndJson) {
  const std::string out = path("bench");
  const CliResult r = run({"-q", "bench-plugin", "--k", "4", "--d", "2", "--betas", "1,2", "--n", "100", "--n-unlabeled", "100",
                     "--m", "100", "--reps", "2", "--estimator", "knn", "--threads", "2", "--out", out});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const std::string csv = slurp(fs::path(out) / "bench-plugin.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
  const json j = read_json_file((fs::path(out) / "bench-plugin.json").string());
  EXPECT_EQ(j.at("invocation").at("threads"), 2);
  EXPECT_EQ(j.at("experiments").size(), 1u);
}

TEST_F(CliTest, BenchStdoutIdenticalAcrossThreads) {
  const std::vector<std::string> base{"-q", "bench-plugin", "--k", "4", "--d", "2", "--betas", "1", "--n", "60",
                                      "--n-unlabeled", "50", "--m", "50", "--reps", "3", "--estimator", "softmax"};
  auto one = base, three = base;
  one.insert(one.end(), {"--threads", "1"});
  three.insert(three.end(), {"--threads", "3"});
  const CliResult a = run(one), b = run(three);
  ASSERT_EQ(a.code, kExitOk) << a.err;
  EXPECT_EQ(a.out, b.out);
}

TEST_F(CliTest, PathologyAndRatesweepJson) {
  const CliResult p = run({"-q", "pathology", "--m", "5000", "--mc-size", "50000"});
  ASSERT_EQ(p.code, kExitOk) << p.err;
  const json pj = json::parse(p.out);
  EXPECT_TRUE(pj.contains("best_topbeta_excess"));
  EXPECT_EQ(pj.at("invocation").at("beta"), 2);

  const CliResult s = run({"-q", "ratesweep", "--grid", "10,100,1000,10000", "--k", "4", "--d", "2", "--n", "40", "--m",
                     "200", "--reps", "2"});
  ASSERT_EQ(s.code, kExitOk) << s.err;
  const json sj = json::parse(s.out);
  EXPECT_EQ(sj.at("points").size(), 4u);
  EXPECT_EQ(run({"-q", "ratesweep", "--grid", "10,20,30,40"}).code, kExitUsage);
}

TEST_F(CliTest, ProgressGoesToStderrUnlessQuiet) {
  const CliResult loud = run({"gen", "--n", "3", "--k", "3", "--d", "2"});
  EXPECT_NE(loud.err.find("gen:"), std::string::npos);
  EXPECT_EQ(loud.out.find("gen:"), std::string::npos);
  EXPECT_TRUE(run({"-q", "gen", "--n", "3", "--k", "3", "--d", "2"}).err.empty());
}

class GoldenHelp : public ::testing::TestWithParam<std::string> {};

TEST_P(GoldenHelp, MatchesFile) {
  std::vector<std::string> args;
  if (GetParam() != "confset") args.push_back(GetParam());
  args.emplace_back("--help");
  const CliResult r = run(args);
  ASSERT_EQ(r.code, kExitOk);
  const fs::path golden = fs::path(CONFSET_GOLDEN_DIR) / (GetParam() + ".txt");
  if (std::getenv("CONFSET_UPDATE_GOLDEN")) {
    std::ofstream(golden) << r.out;
    GTEST_SKIP() << "rewrote " << golden;
  }
  ASSERT_TRUE(fs::exists(golden)) << golden;
  EXPECT_EQ(r.out, slurp(golden));
}

INSTANTIATE_TEST_SUITE_P(Commands, GoldenHelp,
                         ::testing::Values("confset", "gen", "fit", "eval", "bench-oracle", "bench-plugin", "pathology",
                                           "ratesweep"),
                         [](const auto& info) {
                           std::string name = info.param;
                           std::replace(name.begin(), name.end(), '-', '_');
                           return name;
                         });

}  // namespace
}  // namespace confset::cli
