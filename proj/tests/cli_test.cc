// Copyright 2026 The mcscal Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "mcscal/io.h"
#include "testing/synthetic.h"

namespace mcscal {
namespace {

namespace fs = std::filesystem;

std::string ToCsv(const PredictionSet& pred) {
  std::ostringstream out;
  out << "label";
  for (int k = 0; k < pred.num_classes(); ++k) out << ",logit_" << k;
  out << "\n";
  for (std::size_t i = 0; i < pred.size(); ++i) {
    out << pred.label(i);
    for (double z : pred.row(i)) out << "," << FormatDouble(z);
    out << "\n";
  }
  return out.str();
}

struct Result {
  int code;
  std::string out;
  std::string err;
};

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("mcscal_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Write(const std::string& name, const PredictionSet& pred) {
    const fs::path path = dir_ / name;
    WriteTextFile(path, ToCsv(pred));
    return path.string();
  }

  Result Run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::Run(args, out, err);
    return {code, out.str(), err.str()};
  }

  fs::path dir_;
};

TEST_F(CliTest, MetricsFourSample) {
  const std::string test = Write("four.csv", testing::FourSampleLogits());
  Result r = Run({"metrics", "--test", test, "--bins", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  Json json = Json::parse(r.out);
  EXPECT_NEAR(json["ece_percent"].get<double>(), 22.5, 1e-10);
  EXPECT_NEAR(json["mcs"].get<double>(), -0.075, 1e-12);
  EXPECT_NEAR(json["ece"].get<double>(), 0.225, 1e-12);
}

TEST_F(CliTest, MetricsPerfectlyCalibrated) {
  const std::string test = Write("perfect.csv", testing::PerfectlyCalibratedFixture());
  Result r = Run({"metrics", "--test", test});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(Json::parse(r.out)["ece"].get<double>(), 0.0, 1e-12);
}

TEST_F(CliTest, MissingFileExitsTwoAndNamesPath) {
  Result r = Run({"metrics", "--test", (dir_ / "absent.csv").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("absent.csv"), std::string::npos);
}

TEST_F(CliTest, BadArgumentsExitTwo) {
  EXPECT_EQ(Run({}).code, 2);
  EXPECT_EQ(Run({"frobnicate"}).code, 2);
  EXPECT_EQ(Run({"fit", "--val", "x.csv"}).code, 2);
  EXPECT_EQ(Run({"metrics", "--test", "x.csv", "--bins", "0"}).code, 2);
  EXPECT_EQ(Run({"--help"}).code, 0);
}

TEST_F(CliTest, FitIsDeterministicAndApplyKeepsAccuracy) {
  const std::string val = Write("val.csv", testing::HeterogeneousFixture(1, 600));
  const std::string test = Write("test.csv", testing::HeterogeneousFixture(2, 600));
  const std::string m1 = (dir_ / "m1.json").string();
  const std::string m2 = (dir_ / "m2.json").string();
  Result fit = Run({"fit", "--val", val, "--model", m1});
  ASSERT_EQ(fit.code, 0) << fit.err;
  EXPECT_EQ(fit.out.rfind("method=ts T=", 0), 0u);
  ASSERT_EQ(Run({"fit", "--val", val, "--model", m2}).code, 0);
  EXPECT_EQ(ReadTextFile(m1), ReadTextFile(m2));

  Result base = Run({"metrics", "--test", test});
  Result applied = Run({"apply", "--test", test, "--model", m1});
  ASSERT_EQ(applied.code, 0) << applied.err;
  EXPECT_EQ(Json::parse(base.out)["accuracy"], Json::parse(applied.out)["accuracy"]);

  Result curve = Run({"risk-coverage", "--test", test});
  ASSERT_EQ(curve.code, 0) << curve.err;
  RiskCoverageCurve parsed = CurveFromCsv(curve.out);
  EXPECT_EQ(parsed.points[0].accuracy, Json::parse(base.out)["accuracy"].get<double>());
}

TEST_F(CliTest, FitFixedPointGivesUnitTemperature) {
  PredictionSet raw = testing::CalibratedLogits(5, 1500, 4, 2.0, 3.0);
  const double t_star = FitScalar(raw, FitConfig{}).temperatures[0];
  std::vector<double> logits(raw.logits().begin(), raw.logits().end());
  for (double& z : logits) z /= t_star;
  const std::string val =
      Write("fixed.csv", PredictionSet(logits, {raw.labels().begin(), raw.labels().end()}, 4));
  const std::string model = (dir_ / "m.json").string();
  ASSERT_EQ(Run({"fit", "--val", val, "--model", model}).code, 0);
  // The CSV stores shortest round-trip decimals, so the reloaded logits are exact.
  EXPECT_NEAR(LoadModel(model).temperatures[0], 1.0, 2e-4);
}

TEST_F(CliTest, CwmcsFitWithZeroCwmcs) {
  const std::string val = Write("cc.csv", testing::ConfidentCorrectFixture(3));
  const std::string model = (dir_ / "m.json").string();
  Result r = Run({"fit", "--val", val, "--model", model, "--method", "cwmcs-ts"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(Json::parse(ReadTextFile(model))["gamma"].get<double>(), 0.0);
  EXPECT_NE(r.out.find("gamma=0"), std::string::npos);
}

TEST_F(CliTest, ClassCountMismatchNamesBoth) {
  const std::string val = Write("v.csv", testing::ConfidentCorrectFixture(3));
  const std::string test = Write("t.csv", testing::ConfidentCorrectFixture(4));
  Result r = Run({"compare", "--val", val, "--test", test});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("K = 3"), std::string::npos);
  EXPECT_NE(r.err.find("K = 4"), std::string::npos);

  const std::string model = (dir_ / "m.json").string();
  ASSERT_EQ(Run({"fit", "--val", val, "--model", model, "--method", "cwmcs-ts"}).code, 0);
  r = Run({"apply", "--test", test, "--model", model});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("K = 3"), std::string::npos);
  EXPECT_NE(r.err.find("K = 4"), std::string::npos);
}

TEST_F(CliTest, CompareHeterogeneous) {
  const std::string val = Write("val.csv", testing::HeterogeneousFixture(1, 1500));
  const std::string test = Write("test.csv", testing::HeterogeneousFixture(1001, 1500));
  const std::string out = (dir_ / "cmp.json").string();
  Result r = Run({"compare", "--val", val, "--test", test, "--out", out});
  ASSERT_EQ(r.code, 0) << r.err;
  Json json = Json::parse(ReadTextFile(out));
  const double ts = json["methods"]["ts"]["report"]["ece"].get<double>();
  const double cw = json["methods"]["cwmcs_ts"]["report"]["ece"].get<double>();
  EXPECT_LE(cw, ts);
  EXPECT_TRUE(json["methods"]["baseline"]["model"].is_null());
}

TEST_F(CliTest, ReliabilityCsv) {
  const std::string test = Write("four.csv", testing::FourSampleLogits());
  Result r = Run({"reliability", "--test", test, "--bins", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "lo,hi,count,confidence,accuracy,gap");
  EXPECT_NE(r.out.find("\n0,0.5,1,"), std::string::npos);
}

#ifdef MCSCAL_CLI_PATH
int Shell(const std::string& command) {
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST_F(CliTest, BinaryExitCodesAndDeterminism) {
  const std::string bin = MCSCAL_CLI_PATH;
  const std::string test = Write("t.csv", testing::HeterogeneousFixture(3, 200));
  const std::string a = (dir_ / "a.json").string();
  const std::string b = (dir_ / "b.json").string();
  EXPECT_EQ(Shell(bin + " metrics --test " + test + " --out " + a), 0);
  EXPECT_EQ(Shell(bin + " metrics --test " + test + " --out " + b), 0);
  EXPECT_EQ(ReadTextFile(a), ReadTextFile(b));
  EXPECT_EQ(Shell(bin + " metrics --test " + (dir_ / "none.csv").string() + " 2>/dev/null"), 2);
  WriteTextFile(dir_ / "bad.csv", "label,logit_0\n3,0\n");
  EXPECT_EQ(Shell(bin + " metrics --test " + (dir_ / "bad.csv").string() + " 2>/dev/null"), 2);
}
#endif

}  // namespace
}  // namespace mcscal
