// Copyright 2026 The PSNN Authors
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

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "psnn/coding.h"
#include "psnn/io.h"
#include "psnn/random.h"
#include "psnn/raster.h"

namespace psnn {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun Cli(std::vector<std::string> args) {
  args.insert(args.begin(), "psnn");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = CliMain(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("psnn_cli_" + std::string(::testing::UnitTest::GetInstance()
                                          ->current_test_info()
                                          ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Path(const std::string& name) const { return (dir_ / name).string(); }
  std::string Write(const std::string& name, const std::string& text) const {
    WriteTextFile(Path(name), text);
    return Path(name);
  }

  fs::path dir_;
};

TEST_F(CliTest, UnknownSubcommandIsUsageError) {
  const CliRun r = Cli({"frobnicate"});
  EXPECT_EQ(r.code, kExitConfig);
  EXPECT_NE(r.err.find("train-batch"), std::string::npos);
  EXPECT_EQ(Cli({}).code, kExitConfig);
  EXPECT_EQ(Cli({"train-online", "--bogus"}).code, kExitConfig);
}

TEST_F(CliTest, MalformedConfigKeyNamesKey) {
  const std::string cfg = Write("bad.cfg", "network.hiddden = 3\n");
  const CliRun r = Cli({"--config", cfg, "train-online"});
  EXPECT_EQ(r.code, kExitConfig);
  EXPECT_NE(r.err.find("network.hiddden"), std::string::npos);
  EXPECT_EQ(Cli({"--config", Path("missing.cfg"), "train-online"}).code, kExitConfig);
}

TEST_F(CliTest, DataErrorsExitTwo) {
  const CliRun r = Cli({"--out", Path("o"), "decode", "--input", Path("none.csv")});
  EXPECT_EQ(r.code, kExitData);
  const std::string bad = Write("bad.csv", "t,n0\n0,5\n");
  EXPECT_EQ(Cli({"decode", "--input", bad}).code, kExitData);
  const std::string cfg = Write("b.cfg", "task = batch-classify\nbatch.data = " +
                                             Path("absent.csv") + "\n");
  EXPECT_EQ(Cli({"--config", cfg, "train-batch"}).code, kExitData);
}

TEST_F(CliTest, EncodeDecodeRoundTrip) {
  const std::string values = Write("values.txt", "0\n0.25\n0.5\n1\n");
  ASSERT_EQ(Cli({"--out", dir_.string(), "encode", "--input", values}).code, kExitOk);
  const SpikeRaster r = ReadRaster(Path("encoded.csv"));
  EXPECT_EQ(r.num_neurons(), 9);
  EXPECT_EQ(r.num_steps(), 20);
  ASSERT_EQ(Cli({"--out", dir_.string(), "decode", "--input", Path("encoded.csv")}).code,
            kExitOk);
  ValueCoder coder(CodingScheme::kRate, 9, 5);
  std::istringstream decoded(ReadTextFile(Path("decoded.txt")));
  for (double v : {0.0, 0.25, 0.5, 1.0}) {
    double d = -1;
    ASSERT_TRUE(decoded >> d);
    EXPECT_NEAR(d, coder.Decode(coder.Encode(v)), 1e-15) << v;
    EXPECT_NEAR(d, v, 0.1) << v;
  }
}

TEST_F(CliTest, SimulateFullyClampedEchoesInput) {
  Rng rng(3);
  SpikeRaster r(11, 30);
  for (int i = 0; i < 11; ++i) {
    for (int t = 0; t < 30; ++t) r.set(i, t, Bernoulli(0.3, rng));
  }
  const std::string input = Write("in.csv", RasterToCsv(r));
  ASSERT_EQ(Cli({"simulate", "--input", input, "--output", Path("sim.csv")}).code,
            kExitOk);
  EXPECT_EQ(ReadTextFile(Path("sim.csv")), ReadTextFile(input));
}

TEST_F(CliTest, SimulateFreeRunAndCheckpoint) {
  ASSERT_EQ(Cli({"--seed", "4", "simulate", "--steps", "12", "--output",
                 Path("free.csv")})
                .code,
            kExitOk);
  EXPECT_EQ(ReadRaster(Path("free.csv")).num_steps(), 12);
  EXPECT_EQ(Cli({"simulate"}).code, kExitConfig);
  const std::string bad_params = Write("p.csv", "theta\n1\n2\n");
  EXPECT_EQ(Cli({"simulate", "--steps", "3", "--params", bad_params}).code, kExitData);
}

TEST_F(CliTest, OracleElbo) {
  const std::string cfg = Write("tiny.cfg",
                                "network.observed = 1\n"
                                "network.hidden = 1\n"
                                "kernel.ff.durations = 1, 2\n"
                                "kernel.fb.durations = 1, 2\n"
                                "kernel.ff.normalize = peak\n"
                                "kernel.fb.normalize = peak\n"
                                "coding.dt = 1\n");
  const std::string x = Write("x.csv", "t,n0\n0,1\n1,0\n2,1\n");
  const CliRun r = Cli({"--config", cfg, "--seed", "2", "--out", dir_.string(),
                     "oracle-elbo", "--input", x});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "elbo,log_likelihood");
  const std::string row = r.out.substr(r.out.find('\n') + 1);
  const double elbo = std::stod(row.substr(0, row.find(',')));
  const double ll = std::stod(row.substr(row.find(',') + 1));
  EXPECT_LE(elbo, ll + 1e-10);

  const std::string wide = Write("wide.csv", "t,n0\n" + [] {
    std::string s;
    for (int t = 0; t < 30; ++t) s += std::to_string(t) + ",0\n";
    return s;
  }());
  EXPECT_EQ(Cli({"--config", cfg, "oracle-elbo", "--input", wide}).code, kExitData);
}

TEST_F(CliTest, SameSeedSameOutputs) {
  const std::string cfg = Write("small.cfg",
                                "online.samples = 200\n"
                                "online.mae_window = 50\n");
  for (const char* sub : {"a", "b"}) {
    ASSERT_EQ(Cli({"--config", cfg, "--seed", "9", "--out", Path(sub), "train-online"})
                  .code,
              kExitOk);
  }
  for (const char* f : {"online_metrics.csv", "online_samples.csv",
                        "learning_signal.csv", "params.csv"}) {
    EXPECT_EQ(ReadTextFile(Path(std::string("a/") + f)),
              ReadTextFile(Path(std::string("b/") + f)))
        << f;
  }
  ASSERT_EQ(Cli({"--config", cfg, "--seed", "10", "--out", Path("c"), "train-online"})
                .code,
            kExitOk);
  EXPECT_NE(ReadTextFile(Path("a/online_samples.csv")),
            ReadTextFile(Path("c/online_samples.csv")));
}

TEST_F(CliTest, TrainBatchWritesTables) {
  const std::string cfg = Write("batch.cfg",
                                "train.epochs = 2\n"
                                "batch.horizons = 5, 10\n"
                                "batch.train_size = 10\n"
                                "batch.test_size = 6\n");
  const CliRun r = Cli({"--config", cfg, "--out", dir_.string(), "train-batch"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "T,accuracy");
  EXPECT_TRUE(fs::exists(Path("train_T5.csv")));
  EXPECT_TRUE(fs::exists(Path("params_T10.csv")));
  const std::string train = ReadTextFile(Path("train_T10.csv"));
  EXPECT_EQ(train.substr(0, train.find('\n')), "epoch,loglik");
}

}  // namespace
}  // namespace psnn
