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

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "psnn/coding.h"
#include "psnn/config.h"
#include "psnn/error.h"
#include "psnn/experiments.h"
#include "psnn/glm.h"
#include "psnn/io.h"
#include "psnn/train_variational.h"

namespace psnn {
namespace {

struct GlobalOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
};

ExperimentConfig LoadConfig(const GlobalOptions& options, Task default_task) {
  // A missing task key falls back to the subcommand's task.
  std::string text = std::string("task = ") + TaskName(default_task) + "\n";
  if (!options.config_path.empty()) {
    std::string file;
    try {
      file = ReadTextFile(options.config_path);
    } catch (const Error&) {
      Fail(ErrorKind::kConfig,
           "cannot read config file '" + options.config_path + "'");
    }
    text += file;
  }
  ExperimentConfig config = ParseConfig(text);
  if (options.seed) config.seed = *options.seed;
  config.Validate();
  return config;
}

std::string OutPath(const GlobalOptions& options, const std::string& name) {
  std::filesystem::create_directories(options.out_dir);
  return (std::filesystem::path(options.out_dir) / name).string();
}

// Parameters from a checkpoint, or the configured initialization.
NetworkParams LoadParams(const ExperimentConfig& config, const Network& network,
                         const std::string& path) {
  if (path.empty()) {
    Rng rng = SubStream(config.seed, 0);
    return InitialParams(config, network, rng);
  }
  NetworkParams params = network.ZeroParams();
  ParamsFromCsv(ReadTextFile(path), params);
  return params;
}

std::string Format17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

int RunTrainBatch(const GlobalOptions& options, std::ostream& out) {
  const ExperimentConfig config = LoadConfig(options, Task::kBatchClassify);
  const BatchResult result = RunBatchClassify(config);
  WriteTextFile(OutPath(options, "accuracy.csv"), result.accuracy.ToString());
  for (std::size_t h = 0; h < config.horizons.size(); ++h) {
    const std::string suffix = "_T" + std::to_string(config.horizons[h]) + ".csv";
    WriteTextFile(OutPath(options, "train" + suffix),
                  result.training[h].ToString());
    WriteTextFile(OutPath(options, "params" + suffix),
                  ParamsToCsv(result.params[h]));
  }
  out << result.accuracy.ToString();
  return kExitOk;
}

int RunTrainOnline(const GlobalOptions& options, std::ostream& out) {
  const ExperimentConfig config = LoadConfig(options, Task::kOnlinePredict);
  const OnlineResult result = RunOnlinePredict(config);
  WriteTextFile(OutPath(options, "online_metrics.csv"), result.metrics.ToString());
  WriteTextFile(OutPath(options, "online_samples.csv"), result.samples.ToString());
  WriteTextFile(OutPath(options, "learning_signal.csv"), result.signal.ToString());
  WriteTextFile(OutPath(options, "params.csv"), ParamsToCsv(result.params));
  out << "mae_snn=" << FormatNumber(result.mae_snn, 6)
      << " mae_persistent=" << FormatNumber(result.mae_persistent, 6)
      << " hidden_rate=" << FormatNumber(result.hidden_rate, 6) << '\n';
  return kExitOk;
}

int RunEncode(const GlobalOptions& options, const std::string& input,
              std::string output, std::ostream& out) {
  const ExperimentConfig config = LoadConfig(options, Task::kOnlinePredict);
  std::vector<double> values;
  for (const auto& line : SequencesFromText(ReadTextFile(input))) {
    values.insert(values.end(), line.begin(), line.end());
  }
  ValueCoder coder(config.scheme, config.num_observed, config.dt);
  SpikeRaster raster(config.num_observed,
                     static_cast<int>(values.size()) * config.dt);
  for (std::size_t l = 0; l < values.size(); ++l) {
    const SpikeRaster block = coder.Encode(values[l]);
    for (int i = 0; i < block.num_neurons(); ++i) {
      for (int s = 0; s < config.dt; ++s) {
        raster.set(i, static_cast<int>(l) * config.dt + s, block.at(i, s));
      }
    }
  }
  Require(raster.num_steps() > 0, ErrorKind::kData, "values file is empty");
  if (output.empty()) output = OutPath(options, "encoded.csv");
  WriteRaster(output, raster);
  if (coder.clipped() > 0) {
    out << "clipped " << coder.clipped() << " values to [0, 1]\n";
  }
  return kExitOk;
}

int RunDecode(const GlobalOptions& options, const std::string& input,
              std::string output, std::ostream&) {
  const ExperimentConfig config = LoadConfig(options, Task::kOnlinePredict);
  const SpikeRaster raster = ReadRaster(input);
  Require(raster.num_neurons() == config.num_observed, ErrorKind::kData,
          "raster has " + std::to_string(raster.num_neurons()) +
              " neurons, config expects " + std::to_string(config.num_observed));
  Require(raster.num_steps() % config.dt == 0, ErrorKind::kData,
          "raster length is not a multiple of coding.dt");
  const ValueCoder coder(config.scheme, config.num_observed, config.dt);
  std::string text;
  for (int l = 0; l < raster.num_steps() / config.dt; ++l) {
    SpikeRaster block(config.num_observed, config.dt);
    for (int i = 0; i < config.num_observed; ++i) {
      for (int s = 0; s < config.dt; ++s) {
        block.set(i, s, raster.at(i, l * config.dt + s));
      }
    }
    text += Format17(coder.Decode(block)) + '\n';
  }
  if (output.empty()) output = OutPath(options, "decoded.txt");
  WriteTextFile(output, text);
  return kExitOk;
}

int RunSimulate(const GlobalOptions& options, const std::string& input,
                const std::string& params_path, int steps, std::string output,
                std::ostream&) {
  const ExperimentConfig config = LoadConfig(options, Task::kOnlinePredict);
  const Network network = BuildNetwork(config, config.dt);
  const NetworkParams params = LoadParams(config, network, params_path);
  ClampedRaster clamp;
  if (input.empty()) {
    Require(steps >= 1, ErrorKind::kConfig,
            "simulate needs --input or a positive --steps");
    clamp = ClampedRaster::Free(network.num_neurons(), steps);
  } else {
    const SpikeRaster values = ReadRaster(input);
    Require(values.num_neurons() <= network.num_neurons(), ErrorKind::kData,
            "raster has more neurons than the network");
    SpikeRaster padded(network.num_neurons(), values.num_steps());
    std::vector<int> rows;
    for (int i = 0; i < values.num_neurons(); ++i) {
      rows.push_back(i);
      for (int t = 0; t < values.num_steps(); ++t) padded.set(i, t, values.at(i, t));
    }
    clamp = ClampedRaster::Rows(padded, rows);
  }
  Rng rng = SubStream(config.seed, 1);
  const SpikeRaster result = RollForward(network, params, clamp, rng);
  if (output.empty()) output = OutPath(options, "simulated.csv");
  WriteRaster(output, result);
  return kExitOk;
}

int RunOracleElbo(const GlobalOptions& options, const std::string& input,
                  const std::string& params_path, std::ostream& out) {
  const ExperimentConfig config = LoadConfig(options, Task::kOnlinePredict);
  const Network network = BuildNetwork(config, config.dt);
  const NetworkParams params = LoadParams(config, network, params_path);
  const SpikeRaster observed = ReadRaster(input);
  Require(observed.num_neurons() == config.num_observed, ErrorKind::kData,
          "raster has " + std::to_string(observed.num_neurons()) +
              " neurons, config expects " + std::to_string(config.num_observed));
  const ElboValues values = ElboExhaustive(network, params, observed);
  const std::string text = "elbo,log_likelihood\n" + Format17(values.elbo) +
                           "," + Format17(values.log_likelihood) + "\n";
  WriteTextFile(OutPath(options, "elbo.csv"), text);
  out << text;
  return kExitOk;
}

int ExitCodeFor(ErrorKind kind) {
  return kind == ErrorKind::kData || kind == ErrorKind::kCapacity ? kExitData
                                                                  : kExitConfig;
}

}  // namespace

int CliMain(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Probabilistic spiking neural network experiments"};
  app.require_subcommand(1);
  GlobalOptions options;
  std::uint64_t seed = 0;
  app.option_defaults()->always_capture_default();
  app.add_option("--config", options.config_path, "Config file (key = value)");
  CLI::Option* seed_option =
      app.add_option("--seed", seed, "Random seed, overrides the config");
  app.add_option("--out", options.out_dir, "Output directory");
  app.fallthrough();

  std::string input, output, params_path;
  int steps = 0;
  CLI::App* train_batch =
      app.add_subcommand("train-batch", "Batch image classification study");
  CLI::App* train_online =
      app.add_subcommand("train-online", "Online sequence prediction study");
  CLI::App* encode = app.add_subcommand("encode", "Encode values to a raster");
  encode->add_option("--input", input, "Values file")->required();
  encode->add_option("--output", output, "Raster CSV");
  CLI::App* decode = app.add_subcommand("decode", "Decode a raster to values");
  decode->add_option("--input", input, "Raster CSV")->required();
  decode->add_option("--output", output, "Values file");
  CLI::App* simulate =
      app.add_subcommand("simulate", "Roll a network forward with clamps");
  simulate->add_option("--input", input, "Raster CSV of clamped leading neurons");
  simulate->add_option("--params", params_path, "Parameter checkpoint");
  simulate->add_option("--steps", steps, "Steps when no input is given");
  simulate->add_option("--output", output, "Raster CSV");
  CLI::App* oracle =
      app.add_subcommand("oracle-elbo", "Exact ELBO by hidden enumeration");
  oracle->add_option("--input", input, "Raster CSV of observed neurons")
      ->required();
  oracle->add_option("--params", params_path, "Parameter checkpoint");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << app.help();
    return kExitConfig;
  }
  if (seed_option->count() > 0) options.seed = seed;

  try {
    if (train_batch->parsed()) return RunTrainBatch(options, out);
    if (train_online->parsed()) return RunTrainOnline(options, out);
    if (encode->parsed()) return RunEncode(options, input, output, out);
    if (decode->parsed()) return RunDecode(options, input, output, out);
    if (simulate->parsed()) {
      return RunSimulate(options, input, params_path, steps, output, out);
    }
    if (oracle->parsed()) return RunOracleElbo(options, input, params_path, out);
  } catch (const Error& e) {
    err << "error: " << ErrorKindName(e.kind()) << ": " << e.what() << '\n';
    return ExitCodeFor(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: data: " << e.what() << '\n';
    return kExitData;
  }
  err << app.help();
  return kExitConfig;
}

}  // namespace psnn
