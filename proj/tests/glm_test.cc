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

#include "psnn/glm.h"

#include <cmath>
#include <cstdint>
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
using testing::UniformInt;

Network SingleNeuron(double bandwidth = 1.0) {
  return Network(Topology({{}}, {}),
                 MakeRaisedCosineBank(std::vector<double>{2}),
                 MakeRaisedCosineBank(std::vector<double>{2}, BankRole::kFeedback),
                 bandwidth);
}

TEST(TopologyTest, RejectsSelfAndDuplicateSynapses) {
  auto kind = [](auto&& make) {
    try {
      make();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::kConfig;
  };
  EXPECT_EQ(kind([] { Topology({{0}}, {}); }), ErrorKind::kStructural);
  EXPECT_EQ(kind([] { Topology({{1, 1}, {}}, {}); }), ErrorKind::kStructural);
  EXPECT_EQ(kind([] { Topology({{2}, {}}, {}); }), ErrorKind::kStructural);
  EXPECT_EQ(kind([] { Topology({{}, {}}, {5}); }), ErrorKind::kStructural);
}

TEST(TopologyTest, PartitionAndCycles) {
  const Topology topo({{1}, {0, 2}, {1}}, {2});
  EXPECT_EQ(topo.observed(), (std::vector<int>{0, 1}));
  EXPECT_EQ(topo.hidden(), (std::vector<int>{2}));
  const Topology two = Topology::TwoLayer(3, 2);
  EXPECT_TRUE(two.presynaptic(0).empty());
  EXPECT_EQ(two.presynaptic(4), (std::vector<int>{0, 1, 2}));
}

TEST(MembranePotentialTest, Examples) {
  NeuronParams p{0.7, {1.0, -2.0}, {0.5}};
  const std::vector<double> zeros2(2, 0.0), zeros1(1, 0.0);
  EXPECT_EQ(MembranePotential(p, zeros2, zeros1), 0.7);

  NeuronParams q{0.0, {2.0}, {0.0}};
  const std::vector<double> ff = {0.5}, fb = {0.9};
  EXPECT_DOUBLE_EQ(MembranePotential(q, ff, fb), 1.0);

  NeuronParams r{0.3, {1.5, -0.25}, {2.0}};
  const std::vector<double> a = {0.2, 0.7}, b = {-0.4};
  const double u = MembranePotential(r, a, b);
  NeuronParams r2 = r;
  AddScaled(r2, 1.0, r);
  EXPECT_DOUBLE_EQ(MembranePotential(r2, a, b), 2 * u);
  EXPECT_THROW(MembranePotential(r, b, b), Error);
}

TEST(FiringProbTest, Examples) {
  EXPECT_EQ(FiringProb(0.0, 1.0), 0.5);
  EXPECT_EQ(FiringProb(0.0, 3.0), 0.5);
  EXPECT_NEAR(FiringProb(2.0, 1.0), 0.8807970779778823, 1e-15);
  EXPECT_DOUBLE_EQ(FiringProb(1.0, 0.5), FiringProb(2.0, 1.0));
  EXPECT_THROW(FiringProb(1.0, 0.0), Error);
  EXPECT_THROW(FiringProb(1.0, -1.0), Error);
  for (double u : {-30.0, -3.0, 0.0, 4.0, 30.0}) {
    EXPECT_GT(FiringProb(u), 0.0);
    EXPECT_LT(FiringProb(u), 1.0);
    EXPECT_LT(FiringProb(u), FiringProb(u + 0.5));
  }
}

TEST(SampleSpikeTest, Rates) {
  Rng rng(1);
  int ones = 0;
  for (int n = 0; n < 10000; ++n) ones += SampleSpike(-1e9, 1.0, rng);
  EXPECT_LT(ones / 1e4, 1e-3);
  ones = 0;
  for (int n = 0; n < 100000; ++n) ones += SampleSpike(0.0, 1.0, rng);
  EXPECT_NEAR(ones / 1e5, 0.5, 0.01);
}

TEST(SampleSpikeTest, OneDrawAndReproducible) {
  Rng a(77), b(77), c(77);
  std::vector<int> first, second;
  for (int n = 0; n < 100; ++n) {
    first.push_back(SampleSpike(0.3, 1.0, a));
    second.push_back(SampleSpike(0.3, 1.0, b));
    c();
  }
  EXPECT_EQ(first, second);
  EXPECT_EQ(a(), c());
}

TEST(CondLogProbTest, Examples) {
  EXPECT_NEAR(CondLogProb(1, 0.0), std::log(0.5), 1e-15);
  EXPECT_NEAR(CondLogProb(0, 0.0), std::log(0.5), 1e-15);
  EXPECT_NEAR(CondLogProb(1, -50.0), -50.0, 1e-12);
  EXPECT_NEAR(CondLogProb(0, 50.0), -50.0, 1e-12);
  for (double u : {-700.0, -100.0, 100.0, 700.0}) {
    EXPECT_TRUE(std::isfinite(CondLogProb(0, u)));
    EXPECT_TRUE(std::isfinite(CondLogProb(1, u)));
  }
  EXPECT_NEAR(CondLogProb(1, 3.0, 2.0), oracle::LogBernoulli(1, 3.0, 2.0), 1e-15);
}

TEST(LogLikelihoodTest, SingleBernoulliFactor) {
  const Network net = SingleNeuron();
  SpikeRaster r(1, 1);
  r.set(0, 0, 1);
  EXPECT_NEAR(LogLikelihood(net, net.ZeroParams(), r), std::log(0.5), 1e-15);
}

TEST(LogLikelihoodTest, TwoNeuronsByHand) {
  // Neuron 1 receives neuron 0 through an exponential kernel; both have
  // exponential feedback. T = 1, so four conditionals.
  const double tau = 2.0;
  const Network net(
      Topology({{}, {0}}, {}),
      MakeSingleKernelBank(MakeKernel(KernelFamily::kExponential, {tau, 1, 1}, 3)),
      MakeSingleKernelBank(
          MakeKernel(KernelFamily::kFeedbackExponential, {1, 1, tau}, 3),
          BankRole::kFeedback));
  NetworkParams p = net.ZeroParams();
  p[0] = {-0.4, {}, {1.3}};
  p[1] = {0.2, {0.8}, {-0.6}};
  SpikeRaster r(2, 2);
  r.set(0, 0, 1);
  r.set(1, 1, 1);
  r.set(0, 1, 0);
  auto sig = [](double u) { return 1.0 / (1.0 + std::exp(-u)); };
  // t = 0: no history. t = 1: neuron 0 spiked at 0 with kernel value 1.
  const double p00 = sig(-0.4);            // s_{0,0} = 1
  const double p10 = 1 - sig(0.2);         // s_{1,0} = 0
  const double p01 = 1 - sig(-0.4 - 1.3);  // s_{0,1} = 0, fb = -1
  const double p11 = sig(0.2 + 0.8);       // s_{1,1} = 1
  EXPECT_NEAR(LogLikelihood(net, p, r),
              std::log(p00) + std::log(p10) + std::log(p01) + std::log(p11),
              1e-14);
}

TEST(LogLikelihoodTest, MatchesOracleAndFactorizes) {
  Rng rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = UniformInt(1, 4, rng);
    const Network net = RandomNetwork(n, 0, 3, rng, trial % 3 ? 1.0 : 0.7);
    const NetworkParams p = net.UniformParams(-1.5, 1.5, rng);
    const SpikeRaster r = RandomRaster(n, UniformInt(1, 11, rng), 0.4, rng);
    const double ll = LogLikelihood(net, p, r);
    EXPECT_LE(ll, 0.0);
    EXPECT_NEAR(ll, oracle::LogLikelihood(net, p, r), 1e-10);
    const RasterTraces traces(net, r);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += NeuronLogLikelihood(net, p, traces, r, i);
    EXPECT_NEAR(ll, sum, 1e-12);
  }
}

TEST(LogLikelihoodTest, ShapeMismatchIsStructural) {
  const Network net = SingleNeuron();
  try {
    LogLikelihood(net, net.ZeroParams(), SpikeRaster(2, 3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kStructural);
  }
}

TEST(GradLocalTest, Examples) {
  NeuronParams p{0.0, {0.3, 0.1}, {0.2}};
  const std::vector<double> ff(2, 0.0), fb(1, 0.0);
  NeuronParams g = GradLocal(p, 1, 0.0, ff, fb, 1.0);
  EXPECT_EQ(g.bias, 0.5);
  for (double v : g.feedforward) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(g.feedback[0], 0.0);

  const std::vector<double> a = {1.0, 2.0}, b = {3.0};
  g = GradLocal(p, 1, 60.0, a, b, 1.0);
  EXPECT_NEAR(g.bias, 0.0, 1e-20);
  EXPECT_NEAR(g.feedforward[1], 0.0, 1e-20);

  // Two-factor form: each weight entry is trace times the error term.
  g = GradLocal(p, 0, 0.4, a, b, 2.0);
  const double err = (0 - 1.0 / (1.0 + std::exp(-0.2))) / 2.0;
  EXPECT_DOUBLE_EQ(g.bias, err);
  EXPECT_DOUBLE_EQ(g.feedforward[0], a[0] * err);
  EXPECT_DOUBLE_EQ(g.feedforward[1], a[1] * err);
  EXPECT_DOUBLE_EQ(g.feedback[0], b[0] * err);
}

TEST(GradientTest, MatchesFiniteDifferences) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = UniformInt(1, 4, rng);
    const Network net = RandomNetwork(n, 0, 3, rng, trial % 2 ? 1.0 : 1.7);
    NetworkParams p = net.UniformParams(-1.0, 1.0, rng);
    const SpikeRaster r = RandomRaster(n, UniformInt(1, 11, rng), 0.4, rng);
    NetworkParams grad = net.ZeroParams();
    AccumulateLogLikelihoodGradient(net, p, RasterTraces(net, r), r, 1.0, grad);
    const std::vector<double> analytic = Flatten(grad);
    const std::vector<double> numeric = oracle::CentralDifference(
        [&](std::span<const double> x) {
          NetworkParams q = p;
          Unflatten(x, q);
          return oracle::LogLikelihood(net, q, r);
        },
        Flatten(p), 1e-5);
    ASSERT_EQ(analytic.size(), numeric.size());
    for (std::size_t e = 0; e < analytic.size(); ++e) {
      EXPECT_LT(oracle::RelativeError(analytic[e], numeric[e]), 1e-5)
          << "trial " << trial << " entry " << e;
    }
  }
}

TEST(GradientTest, IncludeMaskSkipsNeurons) {
  Rng rng(8);
  const Network net = RandomNetwork(3, 0, 2, rng);
  const NetworkParams p = net.UniformParams(-1, 1, rng);
  const SpikeRaster r = RandomRaster(3, 6, 0.5, rng);
  NetworkParams grad = net.ZeroParams();
  const std::vector<std::uint8_t> mask = {0, 1, 0};
  const double ll =
      AccumulateLogLikelihoodGradient(net, p, RasterTraces(net, r), r, 1.0, grad, mask);
  EXPECT_NEAR(ll, oracle::NeuronLogLikelihood(net, p, r, 1), 1e-12);
  EXPECT_EQ(grad[0], net.ZeroParams()[0]);
  EXPECT_EQ(grad[2], net.ZeroParams()[2]);
}

TEST(FlattenTest, RoundTripAndOrder) {
  const Network net(Topology({{1}, {0}}, {}),
                    MakeRaisedCosineBank(std::vector<double>{2, 4}),
                    MakeRaisedCosineBank(std::vector<double>{3}, BankRole::kFeedback));
  NetworkParams p = net.ZeroParams();
  p[0] = {1, {2, 3}, {4}};
  p[1] = {5, {6, 7}, {8}};
  const std::vector<double> flat = Flatten(p);
  EXPECT_EQ(flat, (std::vector<double>{1, 2, 3, 4, 5, 6, 7, 8}));
  NetworkParams q = net.ZeroParams();
  Unflatten(flat, q);
  EXPECT_EQ(p, q);
}

TEST(NetworkStateTest, TracesMatchRasterTraces) {
  Rng rng(13);
  const Network net = RandomNetwork(4, 0, 3, rng);
  const NetworkParams p = net.UniformParams(-1, 1, rng);
  const SpikeRaster r = RandomRaster(4, 15, 0.4, rng);
  const RasterTraces traces(net, r);
  NetworkState state(net);
  std::vector<double> ff_state, ff_raster;
  for (int t = 0; t < r.num_steps(); ++t) {
    for (int i = 0; i < 4; ++i) {
      state.GatherFeedforward(i, ff_state);
      traces.GatherFeedforward(net.topology(), i, t - 1, ff_raster);
      ASSERT_EQ(ff_state.size(), ff_raster.size());
      for (std::size_t k = 0; k < ff_state.size(); ++k) {
        EXPECT_NEAR(ff_state[k], ff_raster[k], 1e-12);
      }
      EXPECT_NEAR(state.Potential(i, p[i]), oracle::Potential(net, p, r, i, t),
                  1e-12);
    }
    state.Advance(r.column(t));
  }
}

TEST(RollForwardTest, FullyClampedEchoes) {
  Rng rng(2);
  const Network net = RandomNetwork(3, 0, 2, rng);
  const NetworkParams p = net.UniformParams(-1, 1, rng);
  const SpikeRaster r = RandomRaster(3, 9, 0.5, rng);
  const std::vector<int> rows = {0, 1, 2};
  EXPECT_EQ(RollForward(net, p, ClampedRaster::Rows(r, rows), rng), r);
}

TEST(RollForwardTest, SilentBiasGivesZeros) {
  Rng rng(2);
  const Network net = RandomNetwork(4, 0, 2, rng);
  NetworkParams p = net.ZeroParams();
  for (auto& n : p) n.bias = -1e9;
  EXPECT_EQ(RollForward(net, p, ClampedRaster::Free(4, 20), rng).Count(), 0);
}

TEST(RollForwardTest, DeterministicAndClampPreserving) {
  Rng setup(31);
  const Network net = RandomNetwork(4, 0, 3, setup);
  const NetworkParams p = net.UniformParams(-2, 2, setup);
  const SpikeRaster values = RandomRaster(4, 12, 0.5, setup);
  ClampedRaster clamp = ClampedRaster::Free(4, 12);
  for (int i = 0; i < 4; ++i) {
    for (int t = 0; t < 12; ++t) {
      if (Bernoulli(0.5, setup)) clamp.Clamp(i, t, values.at(i, t));
    }
  }
  Rng a(5), b(5);
  const SpikeRaster x = RollForward(net, p, clamp, a);
  const SpikeRaster y = RollForward(net, p, clamp, b);
  EXPECT_EQ(x, y);
  for (int i = 0; i < 4; ++i) {
    for (int t = 0; t < 12; ++t) {
      if (clamp.clamped(i, t)) EXPECT_EQ(x.at(i, t), values.at(i, t));
    }
  }
}

TEST(RollForwardTest, NonBinaryClampIsDataError) {
  Rng rng(1);
  const Network net = SingleNeuron();
  ClampedRaster clamp = ClampedRaster::Free(1, 3);
  clamp.bits.set(0, 1, 2);
  clamp.mask[1] = 1;
  try {
    RollForward(net, net.ZeroParams(), clamp, rng);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kData);
  }
}

TEST(FreeRunTest, ContinuesFromState) {
  Rng setup(3);
  const Network net = RandomNetwork(3, 0, 2, setup);
  const NetworkParams p = net.UniformParams(-1, 1, setup);
  // Free-running from a primed state equals rolling forward with the prefix
  // clamped, given the same draws for the free cells.
  const SpikeRaster prefix = RandomRaster(3, 5, 0.5, setup);
  NetworkState state(net);
  for (int t = 0; t < 5; ++t) state.Advance(prefix.column(t));
  Rng a(9);
  const SpikeRaster tail = FreeRun(net, p, state, 7, a);

  ClampedRaster clamp = ClampedRaster::Free(3, 12);
  for (int i = 0; i < 3; ++i) {
    for (int t = 0; t < 5; ++t) clamp.Clamp(i, t, prefix.at(i, t));
  }
  Rng b(9);
  const SpikeRaster full = RollForward(net, p, clamp, b);
  for (int i = 0; i < 3; ++i) {
    for (int t = 0; t < 7; ++t) EXPECT_EQ(tail.at(i, t), full.at(i, t + 5));
  }
  EXPECT_EQ(state.time(), 12);
}

}  // namespace
}  // namespace psnn
