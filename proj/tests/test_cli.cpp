#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "brt_cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "brt");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = brt::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("brt_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    table_ = std::string(BRT_DATA_DIR) + "/standin_model_table.csv";
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string train_small() {
    const Result r = run({"train", table_, "--trees", "300", "--learn-rate", "0.05", "--out",
                          dir_.string()});
    EXPECT_EQ(r.code, 0) << r.err;
    return (dir_ / "model.brtm").string();
  }

  fs::path dir_;
  std::string table_;
};

}  // namespace

TEST_F(CliTest, TrainWritesArtifactsAndSummary) {
  train_small();
  for (const char* f : {"model.brtm", "metrics.csv", "predictions.csv", "predictions.svg",
                        "staged_mse.csv", "staged_mse.svg"}) {
    EXPECT_TRUE(fs::exists(dir_ / f)) << f;
  }
  const std::string metrics = slurp(dir_ / "metrics.csv");
  EXPECT_EQ(metrics.rfind("metric,value\nn,25\nmse,", 0), 0u);
  const Result again = run({"evaluate", (dir_ / "model.brtm").string(), table_});
  EXPECT_EQ(again.code, 0);
  EXPECT_NE(again.out.find("MSE   (mean squared error)"), std::string::npos);
  EXPECT_NE(again.out.find("R-sq"), std::string::npos);
}

TEST_F(CliTest, ReportWritesTables) {
  const std::string model = train_small();
  const Result r = run({"report", model, table_, "--out", dir_.string(), "--top", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string imp = slurp(dir_ / "importance.csv");
  EXPECT_EQ(imp.rfind("predictor,relative_influence\n", 0), 0u);
  const std::string pairs = slurp(dir_ / "pairwise_interactions.csv");
  EXPECT_EQ(std::count(pairs.begin(), pairs.end(), '\n'), 5);
  EXPECT_TRUE(fs::exists(dir_ / "overall_interactions.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "importance.svg"));
}

TEST_F(CliTest, PdpOutputsAndUsageErrors) {
  const std::string model = train_small();
  EXPECT_EQ(run({"pdp", model, table_, "--feature", "MSP", "--out", dir_.string()}).code, 0);
  EXPECT_TRUE(fs::exists(dir_ / "pdp_MSP.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "pdp_MSP.svg"));
  EXPECT_EQ(run({"pdp", model, table_, "--feature", "MSP", "--feature2", "MonsDev", "--grid", "5",
                 "--out", dir_.string()})
                .code,
            0);
  const std::string surface = slurp(dir_ / "pdp_MSP_MonsDev.csv");
  EXPECT_EQ(std::count(surface.begin(), surface.end(), '\n'), 26);

  const Result same = run({"pdp", model, table_, "--feature", "MSP", "--feature2", "MSP"});
  EXPECT_EQ(same.code, 2);
  EXPECT_NE(same.err.find("features must differ"), std::string::npos);
  const Result unknown = run({"pdp", model, table_, "--feature", "Rain"});
  EXPECT_EQ(unknown.code, 2);
  EXPECT_NE(unknown.err.find("valid names: MonsDev MSP"), std::string::npos);
  EXPECT_EQ(run({"pdp", model, table_, "--all", "--out", dir_.string()}).code, 0);
  EXPECT_TRUE(fs::exists(dir_ / "pdp_ProteinExp.csv"));
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"train"}).code, 2);
  EXPECT_EQ(run({"train", "/nonexistent.csv"}).code, 2);
  EXPECT_EQ(run({"train", table_, "--learn-rate", "2"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);

  const fs::path bad = dir_ / "bad.brtm";
  std::ofstream(bad) << "brtm/9\n";
  const Result r = run({"evaluate", bad.string(), table_});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("unsupported model version"), std::string::npos);
}

TEST_F(CliTest, ModelWarningsGoToStderr) {
  const std::string model = train_small();
  std::string text = slurp(model);
  text.insert(text.find("seed"), "note hello\n");
  std::ofstream(model, std::ios::binary) << text;
  const Result r = run({"evaluate", model, table_});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.err.find("warning"), std::string::npos);
}

TEST_F(CliTest, FeatureMismatchIsListed) {
  const std::string model = train_small();
  const fs::path other = dir_ / "other.csv";
  std::ofstream(other) << "year,FCPI,a,b\n2000,1,2,3\n2001,2,3,4\n";
  const Result r = run({"report", model, other.string(), "--schema", "open"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("only in model: MonsDev"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("only in data: a b"), std::string::npos) << r.err;
}

TEST_F(CliTest, BuildDataAndSweep) {
  const Result b = run({"build-data", std::string(BRT_FIXTURE_DIR) + "/raw_toy", "--first-year",
                        "2004", "--last-year", "2006", "--out", dir_.string()});
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_NE(b.out.find("drought years: FY04"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir_ / "provenance.csv"));
  const std::string table = slurp(dir_ / "model_table.csv");
  EXPECT_NE(table.find("2006,0,10,"), std::string::npos);

  fs::create_directories(dir_ / "empty");
  const Result missing = run({"build-data", (dir_ / "empty").string()});
  EXPECT_EQ(missing.code, 1);
  EXPECT_NE(missing.err.find("missing series: cpi_food"), std::string::npos);

  const Result s = run({"sweep", table_, "--trees", "100", "--learn-rate", "0.05", "--to", "5",
                        "--out", dir_.string()});
  ASSERT_EQ(s.code, 0) << s.err;
  const std::string c = slurp(dir_ / "complexity.csv");
  EXPECT_EQ(std::count(c.begin(), c.end(), '\n'), 4);
}

TEST_F(CliTest, ZeroTreesPredictsTheMean) {
  const Result r = run({"train", table_, "--trees", "0", "--out", dir_.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("R-sq  (R-squared)                0.00000\n"), std::string::npos) << r.out;
}

TEST_F(CliTest, TwoFeatureModelHasOnePair) {
  const fs::path table = dir_ / "two.csv";
  {
    std::ofstream t(table);
    t << "year,y,a,b\n";
    for (int i = 0; i < 12; ++i) t << 2000 + i << ',' << (i % 3) * (i % 4) << ',' << i % 3 << ',' << i % 4 << '\n';
  }
  const std::vector<std::string> open = {"--schema", "open", "--response", "y", "--out", dir_.string()};
  auto with = [&](std::vector<std::string> v) {
    v.insert(v.end(), open.begin(), open.end());
    return v;
  };
  ASSERT_EQ(run(with({"train", table.string(), "--trees", "200", "--learn-rate", "0.1", "--min-leaf", "1"})).code, 0);
  const Result r = run(with({"interact", (dir_ / "model.brtm").string(), table.string()}));
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string pairs = slurp(dir_ / "pairwise_interactions.csv");
  EXPECT_EQ(std::count(pairs.begin(), pairs.end(), '\n'), 2);
  EXPECT_FALSE(fs::exists(dir_ / "importance.csv"));
}

TEST_F(CliTest, CorruptModelIsAParseError) {
  const std::string model = train_small();
  std::string text = slurp(model);
  text.replace(text.find("stage "), 6, "stagx ");
  std::ofstream(model, std::ios::binary) << text;
  const Result r = run({"report", model, table_});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("model parse error"), std::string::npos) << r.err;
}

TEST_F(CliTest, BuiltTableFeedsTrain) {
  ASSERT_EQ(run({"build-data", std::string(BRT_FIXTURE_DIR) + "/raw_toy", "--first-year", "2004",
                 "--last-year", "2006", "--out", dir_.string()})
                .code,
            0);
  const Result r = run({"train", (dir_ / "model_table.csv").string(), "--trees", "50", "--min-leaf",
                        "1", "--out", dir_.string()});
  EXPECT_EQ(r.code, 0) << r.err;
}

TEST_F(CliTest, SynthDataMatchesBundledTable) {
  ASSERT_EQ(run({"synth-data", "--out", dir_.string()}).code, 0);
  EXPECT_EQ(slurp(dir_ / "standin_model_table.csv"), slurp(table_));
}
