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

#include "psnn/train_observed.h"

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.h"
#include "psnn/error.h"
#include "psnn/kernels.h"
#include "test_networks.h"

namespace psnn {
namespace {

using testing::RandomNetwork;
using testing::RandomRaster;

Network SingleNeuron() {
  return Network(Topology({{}}, {}),
                 MakeRaisedCosineBank(std::vector<double>{2}),
                 MakeRaisedCosineBank(std::vector<double>{2, 4}, BankRole::kFeedback));
}

double MaxAbsDiff(const NetworkParams& a, const NetworkParams& b) {
  const std::vector<double> x = Flatten(a), y = Flatten(b);
  double m = 0.0;
  for (std::size_t n = 0; n < x.size(); ++n) m = std::max(m, std::abs(x[n] - y[n]));
  return m;
}

// Per-step local gradient of neuron i, built from the oracle's explicit
// convolutions.
NeuronParams OracleStepGradient(const Network& net, const NetworkParams& p,
                                const SpikeRaster& r, int i, int t) {
  const double u = oracle::Potential(net, p, r, i, t);
  const double bw = net.bandwidth();
  const double err = (r.at(i, t) - 1.0 / (1.0 + std::exp(-u / bw))) / bw;
  NeuronParams g = p[i];
  g.bias = err;
  const BasisBank& ff = net.feedforward_bank();
  const std::vector<int>& pre = net.topology().presynaptic(i);
  for (std::size_t m = 0; m < pre.size(); ++m) {
    for (int k = 0; k < ff.size(); ++k) {
      g.feedforward[m * ff.size() + k] =
          err * oracle::Convolve(ff, k, r, pre[m], t - 1);
    }
  }
  for (int k = 0; k < net.feedback_bank().size(); ++k) {
    g.feedback[k] = err * oracle::Convolve(net.feedback_bank(), k, r, i, t - 1);
  }
  return g;
}

TEST(BatchSgdStepTest, ZeroRateLeavesParams) {
  Rng rng(1);
  const Network net = RandomNetwork(3, 0, 2, rng);
  NetworkParams p = net.UniformParams(-1, 1, rng);
  const NetworkParams before = p;
  BatchSgdStep(net, p, RandomRaster(3, 8, 0.5, rng), 0.0);
  EXPECT_EQ(p, before);
}

TEST(BatchSgdStepTest, BernoulliRateConverges) {
  for (double rate : {0.1, 0.5, 0.9}) {
    Rng rng(static_cast<std::uint64_t>(rate * 100));
    // A silent feedback kernel leaves the bias as the only free parameter.
    // With a live basis the fitted feedback weights pick up sampling noise
    // and sigma(bias) drifts from the rate by about 0.01 at p = 0.9.
    const Network net(Topology({{}}, {}), MakeRaisedCosineBank(std::vector<double>{2}),
                      MakeSingleKernelBank(Kernel{{0.0}}, BankRole::kFeedback));
    const SpikeRaster r = RandomRaster(1, 5000, rate, rng);
    const double empirical = r.Count() / 5000.0;
    NetworkParams p = net.ZeroParams();
    for (int it = 0; it < 300; ++it) BatchSgdStep(net, p, r, 1e-3);
    EXPECT_NEAR(FiringProb(p[0].bias), rate, 0.02);
    EXPECT_NEAR(FiringProb(p[0].bias), empirical, 0.01);
  }
}

TEST(BatchSgdStepTest, EqualsDeferredOnlinePass) {
  Rng rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const Network net = RandomNetwork(3, 0, 3, rng);
    const NetworkParams init = net.UniformParams(-1, 1, rng);
    const SpikeRaster r = RandomRaster(3, 9, 0.4, rng);
    NetworkParams batch = init;
    BatchSgdStep(net, batch, r, 0.05);
    OnlineTrainer online(net, init, 0.05, 0.0, r.num_steps());
    for (int t = 0; t < r.num_steps(); ++t) online.Step(r.column(t));
    EXPECT_LT(MaxAbsDiff(batch, online.params()), 1e-12);
  }
}

TEST(BatchSgdStepTest, HomeostaticBiasSign) {
  // Data fires more often than the model's rate, so the bias gradient is
  // positive, and vice versa.
  Rng rng(3);
  const Network net = SingleNeuron();
  NetworkParams p = net.ZeroParams();
  p[0].bias = -2.0;  // rate ~0.12
  EXPECT_GT(LogLikelihoodGradient(net, p, RandomRaster(1, 2000, 0.6, rng))[0].bias, 0.0);
  p[0].bias = 2.0;
  EXPECT_LT(LogLikelihoodGradient(net, p, RandomRaster(1, 2000, 0.3, rng))[0].bias, 0.0);
}

TEST(MiniBatchTest, SumsGradients) {
  Rng rng(5);
  const Network net = RandomNetwork(2, 0, 2, rng);
  const NetworkParams init = net.UniformParams(-1, 1, rng);
  const SpikeRaster a = RandomRaster(2, 6, 0.5, rng), b = RandomRaster(2, 6, 0.5, rng);
  NetworkParams mini = init;
  const SpikeRaster* batch[] = {&a, &b};
  MiniBatchSgdStep(net, mini, batch, 0.1);
  NetworkParams expected = init;
  AddScaled(expected, 0.1, LogLikelihoodGradient(net, init, a));
  AddScaled(expected, 0.1, LogLikelihoodGradient(net, init, b));
  EXPECT_LT(MaxAbsDiff(mini, expected), 1e-14);
}

TEST(EligibilityTest, ZeroKappaIsInstantaneous) {
  NeuronParams e{3.0, {1.0, 2.0}, {4.0}};
  const NeuronParams g{0.5, {-1.0, 0.25}, {2.0}};
  UpdateEligibility(e, 0.0, g);
  EXPECT_EQ(e, g);
}

TEST(EligibilityTest, NearUnitKappaTracksConstantGradient) {
  const double kappa = 1 - 1e-3;
  NeuronParams e{0.0, {0.0}, {0.0}};
  const NeuronParams g{0.7, {-1.3}, {2.2}};
  for (int n = 0; n < 30000; ++n) UpdateEligibility(e, kappa, g);
  EXPECT_NEAR(e.bias, g.bias, 1e-6);
  EXPECT_NEAR(e.feedforward[0], g.feedforward[0], 1e-6);
  EXPECT_NEAR(e.feedback[0], g.feedback[0], 1e-6);
}

TEST(EligibilityTest, MatchesUnrolledSum) {
  Rng rng(23);
  const double kappa = 0.6;
  const Network net = RandomNetwork(3, 0, 3, rng);
  const NetworkParams p = net.UniformParams(-1, 1, rng);
  const SpikeRaster r = RandomRaster(3, 40, 0.4, rng);
  // eta = 0 keeps the parameters fixed so every g_t is reproducible.
  OnlineTrainer trainer(net, p, 0.0, kappa);
  for (int t = 0; t < r.num_steps(); ++t) {
    trainer.Step(r.column(t));
    for (int i = 0; i < 3; ++i) {
      NeuronParams sum = p[i];
      SetZero(sum);
      for (int l = 0; l <= t; ++l) {
        AddScaled(sum, (1 - kappa) * std::pow(kappa, l),
                  OracleStepGradient(net, p, r, i, t - l));
      }
      const std::vector<double> got = Flatten({trainer.eligibility()[i]});
      const std::vector<double> want = Flatten({sum});
      for (std::size_t k = 0; k < got.size(); ++k) {
        EXPECT_NEAR(got[k], want[k], 1e-12);
      }
    }
  }
}

TEST(OnlineTrainerTest, ReturnsLogProbAndUsesPreUpdateParams) {
  Rng rng(29);
  const Network net = RandomNetwork(2, 0, 2, rng);
  NetworkParams p = net.UniformParams(-1, 1, rng);
  const SpikeRaster r = RandomRaster(2, 10, 0.5, rng);
  OnlineTrainer trainer(net, p, 0.1, 0.5);
  for (int t = 0; t < r.num_steps(); ++t) {
    // Reference step: gradients from the current params, then update.
    double ll = 0.0;
    for (int i = 0; i < 2; ++i) {
      ll += oracle::LogBernoulli(r.at(i, t), oracle::Potential(net, p, r, i, t),
                                 net.bandwidth());
    }
    EXPECT_NEAR(trainer.Step(r.column(t)), ll, 1e-12);
    for (int i = 0; i < 2; ++i) AddScaled(p[i], 0.1, trainer.eligibility()[i]);
    EXPECT_LT(MaxAbsDiff(p, trainer.params()), 1e-12);
  }
}

TEST(OnlineTrainerTest, PeriodDefersUpdates) {
  Rng rng(2);
  const Network net = RandomNetwork(2, 0, 2, rng);
  const NetworkParams p = net.UniformParams(-1, 1, rng);
  const SpikeRaster r = RandomRaster(2, 6, 0.5, rng);
  OnlineTrainer trainer(net, p, 0.1, 0.3, 3);
  trainer.Step(r.column(0));
  trainer.Step(r.column(1));
  EXPECT_EQ(trainer.params(), p);
  trainer.Step(r.column(2));
  EXPECT_NE(trainer.params(), p);
}

TEST(TrainEpochsTest, EmptyDatasetIsDataError) {
  const Network net = SingleNeuron();
  try {
    TrainEpochs(net, net.ZeroParams(), {}, TrainConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kData);
  }
}

TEST(TrainEpochsTest, IdenticalRastersImproveMonotonically) {
  Rng rng(41);
  const Network net = RandomNetwork(3, 0, 2, rng);
  const SpikeRaster r = RandomRaster(3, 12, 0.3, rng);
  const std::vector<SpikeRaster> data(5, r);
  TrainConfig config;
  config.eta = 0.01;
  config.epochs = 40;
  const TrainResult result =
      TrainEpochs(net, net.UniformParams(-1, 1, rng), data, config);
  ASSERT_EQ(result.epoch_log_likelihood.size(), 40u);
  for (std::size_t e = 1; e < 40; ++e) {
    EXPECT_GE(result.epoch_log_likelihood[e], result.epoch_log_likelihood[e - 1]);
  }
}

TEST(TrainEpochsTest, SingleExampleEqualsRepeatedSteps) {
  Rng rng(43);
  const Network net = RandomNetwork(3, 0, 2, rng);
  const SpikeRaster r = RandomRaster(3, 7, 0.4, rng);
  const NetworkParams init = net.UniformParams(-1, 1, rng);
  TrainConfig config;
  config.eta = 0.03;
  config.epochs = 6;
  const std::vector<SpikeRaster> data = {r};
  const TrainResult result = TrainEpochs(net, init, data, config);
  NetworkParams p = init;
  for (int e = 0; e < 6; ++e) BatchSgdStep(net, p, r, 0.03);
  EXPECT_LT(MaxAbsDiff(p, result.params), 1e-13);
}

TEST(TrainEpochsTest, ReproducibleWithSeed) {
  Rng rng(47);
  const Network net = RandomNetwork(3, 0, 2, rng);
  std::vector<SpikeRaster> data;
  for (int n = 0; n < 6; ++n) data.push_back(RandomRaster(3, 8, 0.4, rng));
  const NetworkParams init = net.UniformParams(-1, 1, rng);
  TrainConfig config;
  config.epochs = 4;
  config.seed = 99;
  const TrainResult a = TrainEpochs(net, init, data, config);
  const TrainResult b = TrainEpochs(net, init, data, config);
  EXPECT_EQ(a.params, b.params);
  EXPECT_EQ(a.epoch_log_likelihood, b.epoch_log_likelihood);
}

TEST(TrainEpochsTest, MaskFreezesUntrainedNeurons) {
  Rng rng(53);
  const Network net = RandomNetwork(3, 0, 2, rng);
  std::vector<SpikeRaster> data = {RandomRaster(3, 8, 0.4, rng)};
  const NetworkParams init = net.UniformParams(-1, 1, rng);
  TrainConfig config;
  config.epochs = 3;
  config.trained = {1, 0, 1};
  const TrainResult result = TrainEpochs(net, init, data, config);
  EXPECT_EQ(result.params[1], init[1]);
  EXPECT_NE(result.params[0], init[0]);
  config.trained = {1};
  EXPECT_THROW(TrainEpochs(net, init, data, config), Error);
}

TEST(TrainConfigTest, Validation) {
  TrainConfig c;
  c.kappa = 1.0;
  EXPECT_THROW(c.Validate(), Error);
  c = TrainConfig{};
  c.eta = -1;
  EXPECT_THROW(c.Validate(), Error);
}

}  // namespace
}  // namespace psnn
