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

// Experiment configuration. The file format is flat "key = value" text with
// dotted section names and '#' comments, e.g.
//
//   task = online-predict
//   network.hidden = 2
//   train.eta = 0.01
//   kernel.ff.durations = 0.5, 1, 3, 5, 10
//
// Unknown keys and unparsable values are config errors naming the key.

#ifndef PSNN_CONFIG_H_
#define PSNN_CONFIG_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "psnn/coding.h"
#include "psnn/kernels.h"

namespace psnn {

enum class Task { kBatchClassify, kOnlinePredict };
Task ParseTask(const std::string& name);
const char* TaskName(Task task);

// One basis bank. Durations are multiples of the task's time unit: the
// horizon T for batch-classify, dt for online-predict, one step otherwise.
struct KernelConfig {
  KernelFamily family = KernelFamily::kRaisedCosine;
  // Raised-cosine member durations; when empty, `basis` members are spaced
  // linearly up to `duration`.
  std::vector<double> durations;
  int basis = 5;
  double duration = 1.0;
  TimeConstants constants;
  int stdp_delay = 1;  // in steps
  // Rescale every member to unit Euclidean norm after construction.
  bool l2_normalize = false;
};

struct ExperimentConfig {
  Task task = Task::kOnlinePredict;
  std::uint64_t seed = 0;

  // network.*
  int num_observed = 9;
  int num_hidden = 2;
  double bandwidth = 1.0;

  // kernel.ff.* / kernel.fb.*
  KernelConfig feedforward;
  KernelConfig feedback;

  // coding.*
  CodingScheme scheme = CodingScheme::kRate;
  int dt = 5;

  // train.*
  double eta = 0.01;
  double eta_phi = 0.01;
  double kappa = 0.5;
  double alpha = 1.0;
  double rate = 0.1;
  bool baseline = true;
  double baseline_const = 0.01;
  int epochs = 100;
  int batch_size = 1;
  int samples = 1;
  std::string init = "normal";  // normal | uniform
  double init_scale = 0.1;      // stddev (normal) or half-width (uniform)

  // batch.*
  std::vector<int> horizons = {5, 10, 20, 40};
  int train_size = 100;
  int test_size = 50;
  std::string data_path;  // image CSV; synthetic images when empty

  // online.*
  int num_samples = 20000;
  int mae_window = 2500;
  int rollouts = 1;
  std::string templates_path;  // two rows of 25 values; built-in when empty

  // Throws a parameter error on out-of-range values.
  void Validate() const;
};

// Defaults for a task, following the published hyperparameters where they
// exist.
ExperimentConfig DefaultConfig(Task task);

// Raw key/value pairs in file order of last assignment.
std::map<std::string, std::string> ParseKeyValues(const std::string& text);

// Applies `text` on top of the defaults for its `task` key (online-predict
// when absent).
ExperimentConfig ParseConfig(const std::string& text);
ExperimentConfig LoadConfigFile(const std::string& path);

// Every recognized key, for documentation and usage messages.
std::vector<std::string> ConfigKeys();

BasisBank BuildBank(const KernelConfig& config, BankRole role, double unit);

}  // namespace psnn

#endif  // PSNN_CONFIG_H_
