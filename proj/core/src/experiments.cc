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

#include "psnn/experiments.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "psnn/coding.h"
#include "psnn/error.h"
#include "psnn/train_observed.h"
#include "psnn/train_variational.h"

namespace psnn {
namespace {

// Substream ids; every random quantity in a run derives from config.seed.
constexpr std::uint64_t kDataStream = 1;
constexpr std::uint64_t kInitStream = 2;
constexpr std::uint64_t kEncodeStream = 3;
constexpr std::uint64_t kTrainStream = 4;
constexpr std::uint64_t kEvalStream = 5;

std::uint64_t HorizonStream(std::uint64_t base, int horizon) {
  return base + 16 * static_cast<std::uint64_t>(horizon);
}

std::vector<double> MinMaxNormalize(std::vector<double> v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  const double min = *lo, range = *hi - *lo;
  for (double& x : v) x = range > 0 ? (x - min) / range : 0.0;
  return v;
}

SpikeRaster Rows(const SpikeRaster& raster, std::span<const int> rows) {
  SpikeRaster out(static_cast<int>(rows.size()), raster.num_steps());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (int t = 0; t < raster.num_steps(); ++t) {
      out.set(static_cast<int>(r), t, raster.at(rows[r], t));
    }
  }
  return out;
}

SpikeRaster EncodeExample(std::span<const double> pixels, int label,
                          int num_classes, int horizon, Rng& rng) {
  const SpikeRaster input = ImageRateEncode(pixels, horizon, rng);
  const SpikeRaster target = LabelRateEncode(label, num_classes, horizon);
  SpikeRaster out(input.num_neurons() + num_classes, horizon + 1);
  for (int t = 0; t <= horizon; ++t) {
    for (int i = 0; i < input.num_neurons(); ++i) out.set(i, t, input.at(i, t));
    for (int c = 0; c < num_classes; ++c) {
      out.set(input.num_neurons() + c, t, target.at(c, t));
    }
  }
  return out;
}

}  // namespace

GeneratedSequence GenSequence(std::span<const double> a,
                              std::span<const double> b, int length, Rng& rng,
                              double zero_prob) {
  Require(a.size() == kTemplateLength && b.size() == kTemplateLength,
          ErrorKind::kData, "templates must have 25 values each");
  Require(length >= 0 && length % kTemplateLength == 0, ErrorKind::kData,
          "sequence length must be a multiple of 25");
  Require(zero_prob >= 0 && zero_prob <= 1, ErrorKind::kParameter,
          "zero-block probability must lie in [0, 1]");
  GeneratedSequence seq;
  seq.values.reserve(length);
  const double split = zero_prob + 0.5 * (1.0 - zero_prob);
  for (int block = 0; block < length / kTemplateLength; ++block) {
    const double u = UniformUnit(rng);
    BlockKind kind = BlockKind::kZero;
    if (u >= zero_prob) kind = u < split ? BlockKind::kTemplateA : BlockKind::kTemplateB;
    seq.blocks.push_back(kind);
    for (int k = 0; k < kTemplateLength; ++k) {
      double v = 0.0;
      if (kind == BlockKind::kTemplateA) v = a[k];
      if (kind == BlockKind::kTemplateB) v = b[k];
      seq.values.push_back(v);
    }
  }
  return seq;
}

std::vector<std::vector<double>> DefaultTemplates() {
  // Lobed profiles under a half-sine envelope, loosely shaped like serrated
  // leaf outlines. Both start and end at zero.
  std::vector<double> a(kTemplateLength), b(kTemplateLength);
  for (int k = 0; k < kTemplateLength; ++k) {
    const double x = 2.0 * std::numbers::pi * k / 24.0;
    const double envelope = std::sin(std::numbers::pi * k / 24.0);
    a[k] = envelope * (0.55 + 0.45 * std::sin(4.0 * x));
    b[k] = std::pow(envelope, 0.7) * (0.55 + 0.45 * std::cos(3.0 * x + 2.0));
  }
  return {MinMaxNormalize(a), MinMaxNormalize(b)};
}

double PersistentPredict(std::span<const double> prefix, int num_levels) {
  if (prefix.empty()) return 0.0;
  return QuantizeValue(std::clamp(prefix.back(), 0.0, 1.0), num_levels);
}

ImageDataset SyntheticImages(int count, Rng& rng) {
  Require(count >= 0, ErrorKind::kParameter, "image count must be >= 0");
  ImageDataset data;
  data.num_classes = 2;
  for (int n = 0; n < count; ++n) {
    const int label = n % 2;
    std::vector<double> pixels(kImagePixels);
    for (int r = 0; r < 16; ++r) {
      for (int c = 0; c < 16; ++c) {
        const bool bright = (c < 8) == (label == 0);
        const double u = UniformUnit(rng);
        pixels[r * 16 + c] = bright ? 0.5 + 0.5 * u : 0.3 * u;
      }
    }
    data.images.push_back(std::move(pixels));
    data.labels.push_back(label);
  }
  return data;
}

Network BuildNetwork(const ExperimentConfig& config, double unit) {
  return Network(Topology::FullyConnected(config.num_observed, config.num_hidden),
                 BuildBank(config.feedforward, BankRole::kFeedforward, unit),
                 BuildBank(config.feedback, BankRole::kFeedback, unit),
                 config.bandwidth);
}

NetworkParams InitialParams(const ExperimentConfig& config,
                            const Network& network, Rng& rng) {
  if (config.init == "uniform") {
    return network.UniformParams(-config.init_scale, config.init_scale, rng);
  }
  return network.NormalParams(0.0, config.init_scale, rng);
}

BatchResult RunBatchClassify(const ExperimentConfig& config) {
  config.Validate();
  ImageDataset data;
  if (config.data_path.empty()) {
    Rng rng = SubStream(config.seed, kDataStream);
    data = SyntheticImages(config.train_size + config.test_size, rng);
  } else {
    data = DatasetFromCsv(ReadTextFile(config.data_path));
  }
  const int total = static_cast<int>(data.images.size());
  Require(total > config.train_size, ErrorKind::kData,
          "dataset has " + std::to_string(total) + " rows; need more than " +
              std::to_string(config.train_size));
  const int num_train = config.train_size;
  const int num_test = std::min(config.test_size, total - num_train);
  const int num_classes = data.num_classes;

  std::vector<int> inputs(kImagePixels), outputs(num_classes);
  for (int i = 0; i < kImagePixels; ++i) inputs[i] = i;
  for (int c = 0; c < num_classes; ++c) outputs[c] = kImagePixels + c;

  BatchResult result;
  for (int horizon : config.horizons) {
    const Network network(Topology::TwoLayer(kImagePixels, num_classes),
                          BuildBank(config.feedforward, BankRole::kFeedforward,
                                    horizon),
                          BuildBank(config.feedback, BankRole::kFeedback, horizon),
                          config.bandwidth);
    Rng init_rng = SubStream(config.seed, HorizonStream(kInitStream, horizon));
    NetworkParams init = InitialParams(config, network, init_rng);

    Rng encode_rng = SubStream(config.seed, HorizonStream(kEncodeStream, horizon));
    std::vector<SpikeRaster> train;
    train.reserve(num_train);
    for (int n = 0; n < num_train; ++n) {
      train.push_back(EncodeExample(data.images[n], data.labels[n], num_classes,
                                    horizon, encode_rng));
    }

    TrainConfig train_config;
    train_config.eta = config.eta;
    train_config.kappa = config.kappa;
    train_config.epochs = config.epochs;
    train_config.batch_size = config.batch_size;
    // Inputs are always clamped, so only the outputs are fit.
    train_config.trained.assign(kImagePixels + num_classes, 0);
    for (int c : outputs) train_config.trained[c] = 1;
    train_config.seed =
        SubStream(config.seed, HorizonStream(kTrainStream, horizon))();
    TrainResult trained = TrainEpochs(network, std::move(init), train, train_config);

    Rng eval_rng = SubStream(config.seed, HorizonStream(kEvalStream, horizon));
    int correct = 0;
    for (int n = num_train; n < num_train + num_test; ++n) {
      const SpikeRaster example = EncodeExample(
          data.images[n], data.labels[n], num_classes, horizon, eval_rng);
      const ClampedRaster clamp = ClampedRaster::Rows(example, inputs);
      const SpikeRaster out = RollForward(network, trained.params, clamp, eval_rng);
      if (ClassifyDecode(Rows(out, outputs)) == data.labels[n]) ++correct;
    }
    const double accuracy = static_cast<double>(correct) / num_test;
    result.accuracy.AddRow({static_cast<double>(horizon), accuracy});
    result.accuracies.push_back(accuracy);
    CsvTable log({"epoch", "loglik"});
    for (std::size_t e = 0; e < trained.epoch_log_likelihood.size(); ++e) {
      log.AddRow({static_cast<double>(e), trained.epoch_log_likelihood[e]});
    }
    result.training.push_back(std::move(log));
    result.params.push_back(std::move(trained.params));
  }
  return result;
}

OnlineResult RunOnlinePredict(const ExperimentConfig& config) {
  config.Validate();
  std::vector<std::vector<double>> templates =
      config.templates_path.empty()
          ? DefaultTemplates()
          : SequencesFromText(ReadTextFile(config.templates_path));
  Require(templates.size() == 2, ErrorKind::kData,
          "templates file must hold exactly two sequences");

  const int num_samples = config.num_samples;
  const int padded =
      (num_samples + kTemplateLength - 1) / kTemplateLength * kTemplateLength;
  Rng data_rng = SubStream(config.seed, kDataStream);
  const GeneratedSequence seq =
      GenSequence(templates[0], templates[1], padded, data_rng);

  const Network network = BuildNetwork(config, config.dt);
  Rng init_rng = SubStream(config.seed, kInitStream);
  VariationalConfig vconfig;
  vconfig.eta = config.eta;
  vconfig.eta_phi = config.eta_phi;
  vconfig.kappa = config.kappa;
  vconfig.alpha = config.alpha;
  vconfig.rate = config.rate;
  vconfig.use_baseline = config.baseline;
  vconfig.baseline_const = config.baseline_const;
  vconfig.num_samples = config.samples;
  OnlineVariationalTrainer trainer(network, InitialParams(config, network, init_rng),
                                   vconfig);
  Rng train_rng = SubStream(config.seed, kTrainStream);
  Rng eval_rng = SubStream(config.seed, kEvalStream);

  ValueCoder coder(config.scheme, config.num_observed, config.dt);
  const std::vector<int>& observed = network.topology().observed();
  const int num_hidden = config.num_hidden;
  const int window = config.mae_window;
  const int tail_begin = std::max(0, num_samples - window);

  OnlineResult result;
  std::vector<double> err_snn(num_samples), err_pers(num_samples);
  double sum_snn = 0.0, sum_pers = 0.0;
  double tail_hidden = 0.0;
  double zero_spikes = 0.0, template_spikes = 0.0;
  int zero_count = 0, template_count = 0;
  std::vector<std::uint8_t> column(config.num_observed);
  int t = 0;
  for (int l = 0; l < num_samples; ++l) {
    const double value = seq.values[l];
    const BlockKind kind = seq.blocks[l / kTemplateLength];

    // Predict value l from the history up to l - 1.
    double prediction = 0.0, prediction_spikes = 0.0;
    for (int r = 0; r < config.rollouts; ++r) {
      NetworkState copy = trainer.state();
      const SpikeRaster run =
          FreeRun(network, trainer.params(), copy, config.dt, eval_rng);
      prediction += coder.Decode(Rows(run, observed));
      prediction_spikes += run.Count();
    }
    prediction /= config.rollouts;
    prediction_spikes /= config.rollouts;
    const double persistent = PersistentPredict(
        std::span<const double>(seq.values.data(), l), config.num_observed);
    err_snn[l] = std::fabs(prediction - value);
    err_pers[l] = std::fabs(persistent - value);
    sum_snn += err_snn[l];
    sum_pers += err_pers[l];
    if (l >= window) {
      sum_snn -= err_snn[l - window];
      sum_pers -= err_pers[l - window];
    }
    const int in_window = std::min(l + 1, window);

    // Learn value l.
    const SpikeRaster block = coder.Encode(value);
    int hidden_spikes = 0;
    for (int s = 0; s < config.dt; ++s, ++t) {
      for (int i = 0; i < config.num_observed; ++i) column[i] = block.at(i, s);
      const auto report = trainer.Step(column, train_rng);
      hidden_spikes += report.hidden_spikes;
      result.signal.AddRow({static_cast<double>(t), report.learning_signal,
                            report.baseline,
                            static_cast<double>(report.hidden_spikes)});
    }

    result.metrics.AddRow({static_cast<double>(l), sum_snn / in_window,
                           sum_pers / in_window, prediction_spikes});
    result.samples.AddRow({static_cast<double>(l), static_cast<double>(kind),
                           value, prediction, persistent,
                           static_cast<double>(block.Count()),
                           static_cast<double>(hidden_spikes), prediction_spikes});
    if (l >= tail_begin) {
      tail_hidden += hidden_spikes;
      if (kind == BlockKind::kZero) {
        zero_spikes += prediction_spikes;
        ++zero_count;
      } else {
        template_spikes += prediction_spikes;
        ++template_count;
      }
    }
    result.total_prediction_spikes += prediction_spikes;
  }

  const int tail = num_samples - tail_begin;
  double tail_snn = 0.0, tail_pers = 0.0;
  for (int l = tail_begin; l < num_samples; ++l) {
    tail_snn += err_snn[l];
    tail_pers += err_pers[l];
  }
  result.mae_snn = tail_snn / tail;
  result.mae_persistent = tail_pers / tail;
  result.hidden_rate =
      num_hidden > 0 ? tail_hidden / (static_cast<double>(num_hidden) * tail * config.dt)
                     : 0.0;
  result.zero_block_spike_rate =
      zero_count ? zero_spikes / (static_cast<double>(zero_count) * config.dt) : 0.0;
  result.template_block_spike_rate =
      template_count
          ? template_spikes / (static_cast<double>(template_count) * config.dt)
          : 0.0;
  result.params = trainer.params();
  result.clipped = coder.clipped();
  return result;
}

}  // namespace psnn
