#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "linlab/errors.hpp"
#include "json.hpp"

using namespace linlab;
using namespace linlab::cli;
namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    std::random_device rd;
    dir_ = fs::temp_directory_path() / ("linlab_cli_" + std::to_string(rd()));
    fs::create_directories(dir_);
  }
  void TearDown() override {
    std::error_code ec;
    fs::remove_all(dir_, ec);
  }

  int run(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return run_command(args, out_, err_);
  }

  std::string out_dir(const std::string& name) const { return (dir_ / name).string(); }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  }

  static std::vector<std::string> small_train(const std::string& out) {
    return {"train-analyze", "--arch", "dims=16,8,4,2", "--dim", "32", "--n-per-class", "64", "--batch", "16",
            "--lr", "0.05", "--steps", "50", "--out", out, "--no-timestamp"};
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

}  // namespace

TEST(FormatDouble, RoundTripsAndSpecials) {
  for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300}) EXPECT_EQ(std::stod(format_double(v)), v);
  EXPECT_EQ(format_double(std::nan("")), "nan");
  EXPECT_EQ(format_double(1.0 / 0.0), "inf");
  EXPECT_EQ(format_double(2.0), "2");
}

TEST_F(CliTest, UnknownSubcommandIsUsageError) {
  EXPECT_EQ(run({"frobnicate"}), kExitUsage);
  EXPECT_NE(err_.str().find("Usage"), std::string::npos);
  EXPECT_EQ(run({}), kExitUsage);
  EXPECT_EQ(run({"train-analyze", "--bogus"}), kExitUsage);
}

TEST_F(CliTest, ZeroStepsIsUsageError) {
  EXPECT_EQ(run({"train-analyze", "--steps", "0", "--out", out_dir("z")}), kExitUsage);
}

TEST_F(CliTest, BadFlagValuesAreUsageErrors) {
  EXPECT_EQ(run({"train-analyze", "--arch", "D", "--out", out_dir("a")}), kExitUsage);
  EXPECT_EQ(run({"train-analyze", "--arch", "dims=8,3", "--out", out_dir("a")}), kExitUsage);
  EXPECT_EQ(run({"train-analyze", "--classes", "3,3", "--out", out_dir("a")}), kExitUsage);
  EXPECT_EQ(run({"train-analyze", "--optimizer", "adam", "--out", out_dir("a")}), kExitUsage);
  EXPECT_EQ(run({"figure", "2", "--out", out_dir("a")}), kExitUsage);
}

TEST_F(CliTest, MetricsCsvShape) {
  ASSERT_EQ(run(small_train(out_dir("t"))), kExitPass) << out_.str() << err_.str();
  std::ifstream in(dir_ / "t" / "metrics.csv");
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "step,layer,mean_angle_deg,max_angle_deg,skipped_rows,sigma_ratio,oracle_residual,loss,accuracy");
  int rows = 0;
  std::string last;
  while (std::getline(in, line)) {
    ++rows;
    last = line;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 8);
    EXPECT_EQ(line.find('"'), std::string::npos);
  }
  EXPECT_EQ(rows, 200);
  EXPECT_EQ(last.rfind("50,4,", 0), 0u);
  EXPECT_EQ(slurp(dir_ / "t" / "metrics.csv").find('\r'), std::string::npos);
}

TEST_F(CliTest, ByteIdenticalReruns) {
  ASSERT_EQ(run(small_train(out_dir("r1"))), kExitPass);
  ASSERT_EQ(run(small_train(out_dir("r2"))), kExitPass);
  for (const char* f : {"metrics.csv", "verdicts.json"})
    EXPECT_EQ(slurp(dir_ / "r1" / f), slurp(dir_ / "r2" / f)) << f;
}

TEST_F(CliTest, TimestampOnlyWhenRequested) {
  auto args = small_train(out_dir("ts"));
  args.pop_back();
  ASSERT_EQ(run(args), kExitPass);
  const auto doc = nlohmann::json::parse(slurp(dir_ / "ts" / "verdicts.json"));
  EXPECT_TRUE(doc["manifest"]["timestamp"].is_string());
  ASSERT_EQ(run(small_train(out_dir("nts"))), kExitPass);
  EXPECT_TRUE(nlohmann::json::parse(slurp(dir_ / "nts" / "verdicts.json"))["manifest"]["timestamp"].is_null());
}

TEST_F(CliTest, VerdictDocumentLayout) {
  ASSERT_EQ(run(small_train(out_dir("v"))), kExitPass);
  const auto doc = nlohmann::json::parse(slurp(dir_ / "v" / "verdicts.json"));
  EXPECT_TRUE(doc["all_pass"].get<bool>());
  const auto& m = doc["manifest"];
  EXPECT_EQ(m["command"], "train-analyze");
  EXPECT_EQ(m["config"]["arch"], "dims=16,8,4,2");
  EXPECT_EQ(m["config"]["steps"], "50");
  ASSERT_EQ(doc["verdicts"].size(), 1u);
  const auto& v = doc["verdicts"][0];
  EXPECT_EQ(v["claim_id"], "C4");
  EXPECT_TRUE(v["pass"].get<bool>());
  EXPECT_TRUE(v.contains("measured"));
  EXPECT_TRUE(v.contains("thresholds"));
}

TEST_F(CliTest, DivergentRunExitsWithFailedVerdict) {
  auto args = small_train(out_dir("d"));
  args[10] = "1e200";
  ASSERT_EQ(args[9], "--lr");
  EXPECT_EQ(run(args), kExitVerdictFailed);
  const auto doc = nlohmann::json::parse(slurp(dir_ / "d" / "verdicts.json"));
  EXPECT_FALSE(doc["all_pass"].get<bool>());
}

TEST_F(CliTest, MissingCifarIsDataError) {
  EXPECT_EQ(run({"verify-claims", "--data", "cifar:/nonexistent/cifar", "--out", out_dir("c")}), kExitData);
}

TEST_F(CliTest, UnwritableOutputIsDataError) {
  const auto blocker = dir_ / "file";
  std::ofstream(blocker) << "x";
  EXPECT_EQ(run({"momentum-check", "--steps", "3", "--out", (blocker / "sub").string()}), kExitData);
}

TEST_F(CliTest, ConfigFileWithFlagOverride) {
  const auto cfg = dir_ / "run.ini";
  std::ofstream(cfg) << "arch=dims=8,2\ndim=16\nn-per-class=32\nbatch=8\nlr=0.1\nsteps=5\nseed=3\n";
  ASSERT_EQ(run({"train-analyze", "--config", cfg.string(), "--steps", "7", "--out", out_dir("cf"), "--no-timestamp"}),
            kExitPass)
      << err_.str();
  const auto doc = nlohmann::json::parse(slurp(dir_ / "cf" / "verdicts.json"));
  EXPECT_EQ(doc["manifest"]["config"]["steps"], "7");
  EXPECT_EQ(doc["manifest"]["config"]["seed"], "3");
  EXPECT_EQ(doc["manifest"]["config"]["batch"], "8");
}

TEST_F(CliTest, MomentumRunWritesVelocity) {
  auto args = small_train(out_dir("m"));
  args.insert(args.end(), {"--optimizer", "momentum"});
  ASSERT_EQ(run(args), kExitPass);
  EXPECT_TRUE(fs::exists(dir_ / "m" / "velocity.csv"));
}

TEST_F(CliTest, MomentumCheckPasses) {
  EXPECT_EQ(run({"momentum-check", "--dim", "32", "--n-per-class", "64", "--batch", "16", "--steps", "20", "--out",
                 out_dir("mc"), "--no-timestamp"}),
            kExitPass)
      << out_.str();
  EXPECT_NE(out_.str().find("MOM PASS"), std::string::npos);
}

TEST_F(CliTest, VerifyClaimsSmall) {
  EXPECT_EQ(run({"verify-claims", "--arch", "A", "--dim", "64", "--n-per-class", "128", "--out", out_dir("vc"),
                 "--no-timestamp"}),
            kExitPass)
      << out_.str();
  const auto doc = nlohmann::json::parse(slurp(dir_ / "vc" / "verdicts.json"));
  ASSERT_EQ(doc["verdicts"].size(), 4u);
}

TEST(Writers, EmptyRecordsViolateContract) {
  EXPECT_THROW(write_metrics_csv({}, fs::temp_directory_path() / "never.csv"), ContractViolation);
}

TEST(Writers, ForcedFailVerdictIsRecorded) {
  ClaimVerdict v{"C2", {}, {}, {}, false};
  v.set("mean_abs_residual", 3.1e-9);
  v.require("mean_abs_residual", Bound::AtMost, 0.0);
  v.evaluate();
  const auto path = fs::temp_directory_path() / ("linlab_forced_" + std::to_string(std::random_device{}()) + ".json");
  const std::vector<ClaimVerdict> vs{v};
  write_verdicts_json(vs, RunManifest{"test", {}, 0, std::nullopt, {}}, path);
  std::ifstream in(path);
  const auto doc = nlohmann::json::parse(in);
  fs::remove(path);
  EXPECT_FALSE(doc["all_pass"].get<bool>());
  EXPECT_FALSE(doc["verdicts"][0]["pass"].get<bool>());
}

TEST(Writers, UnwritablePathThrowsOutputError) {
  ClaimVerdict v{"X", {}, {}, {}, true};
  const std::vector<ClaimVerdict> vs{v};
  EXPECT_THROW(write_verdicts_json(vs, RunManifest{}, "/proc/linlab/nope/verdicts.json"), OutputError);
}
