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

#include "psnn/config.h"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <utility>

#include "psnn/error.h"

namespace psnn {
namespace {

std::string Trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

[[noreturn]] void BadValue(const std::string& key, const std::string& value) {
  Fail(ErrorKind::kConfig, "invalid value '" + value + "' for key '" + key + "'");
}

double ToDouble(const std::string& key, const std::string& value) {
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(value.c_str(), &end);
  if (value.empty() || *end != '\0' || errno != 0 || !std::isfinite(v)) {
    BadValue(key, value);
  }
  return v;
}

long long ToInt(const std::string& key, const std::string& value) {
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(value.c_str(), &end, 10);
  if (value.empty() || *end != '\0' || errno != 0) BadValue(key, value);
  return v;
}

bool ToBool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "on") return true;
  if (value == "false" || value == "0" || value == "off") return false;
  BadValue(key, value);
}

std::vector<std::string> SplitList(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(Trim(item));
  return out;
}

template <typename T, typename Convert>
std::vector<T> ToList(const std::string& key, const std::string& value,
                      Convert convert) {
  std::vector<T> out;
  for (const std::string& item : SplitList(value)) {
    out.push_back(static_cast<T>(convert(key, item)));
  }
  if (out.empty()) BadValue(key, value);
  return out;
}

using Setter = std::function<void(ExperimentConfig&, const std::string& key,
                                  const std::string& value)>;

void AddKernelKeys(std::map<std::string, Setter>& keys, const std::string& prefix,
                   KernelConfig ExperimentConfig::*member) {
  keys[prefix + "family"] = [member](ExperimentConfig& c, const std::string& k,
                                     const std::string& v) {
    try {
      (c.*member).family = ParseKernelFamily(v);
    } catch (const Error&) {
      BadValue(k, v);
    }
  };
  keys[prefix + "durations"] = [member](ExperimentConfig& c,
                                        const std::string& k,
                                        const std::string& v) {
    (c.*member).durations = ToList<double>(k, v, ToDouble);
  };
  keys[prefix + "basis"] = [member](ExperimentConfig& c, const std::string& k,
                                    const std::string& v) {
    (c.*member).basis = static_cast<int>(ToInt(k, v));
  };
  keys[prefix + "duration"] = [member](ExperimentConfig& c,
                                       const std::string& k,
                                       const std::string& v) {
    (c.*member).duration = ToDouble(k, v);
  };
  keys[prefix + "tau1"] = [member](ExperimentConfig& c, const std::string& k,
                                   const std::string& v) {
    (c.*member).constants.tau1 = ToDouble(k, v);
  };
  keys[prefix + "tau2"] = [member](ExperimentConfig& c, const std::string& k,
                                   const std::string& v) {
    (c.*member).constants.tau2 = ToDouble(k, v);
  };
  keys[prefix + "tau_m"] = [member](ExperimentConfig& c, const std::string& k,
                                    const std::string& v) {
    (c.*member).constants.tau_m = ToDouble(k, v);
  };
  keys[prefix + "normalize"] = [member](ExperimentConfig& c,
                                        const std::string& k,
                                        const std::string& v) {
    if (v != "peak" && v != "l2") BadValue(k, v);
    (c.*member).l2_normalize = v == "l2";
  };
  keys[prefix + "delay"] = [member](ExperimentConfig& c, const std::string& k,
                                    const std::string& v) {
    (c.*member).stdp_delay = static_cast<int>(ToInt(k, v));
  };
}

#define PSNN_DOUBLE_KEY(name, field)                                   keys[name] = [](ExperimentConfig& c, const std::string& k,                           const std::string& v) { c.field = ToDouble(k, v); }
#define PSNN_INT_KEY(name, field)                                      keys[name] = [](ExperimentConfig& c, const std::string& k,                           const std::string& v) {                                c.field = static_cast<int>(ToInt(k, v));                           }

const std::map<std::string, Setter>& KeyTable() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> keys;
    keys["task"] = [](ExperimentConfig& c, const std::string& k,
                      const std::string& v) {
      try {
        c.task = ParseTask(v);
      } catch (const Error&) {
        BadValue(k, v);
      }
    };
    keys["seed"] = [](ExperimentConfig& c, const std::string& k,
                      const std::string& v) {
      const long long s = ToInt(k, v);
      if (s < 0) BadValue(k, v);
      c.seed = static_cast<std::uint64_t>(s);
    };
    PSNN_INT_KEY("network.observed", num_observed);
    PSNN_INT_KEY("network.hidden", num_hidden);
    PSNN_DOUBLE_KEY("network.bandwidth", bandwidth);
    AddKernelKeys(keys, "kernel.ff.", &ExperimentConfig::feedforward);
    AddKernelKeys(keys, "kernel.fb.", &ExperimentConfig::feedback);
    keys["coding.scheme"] = [](ExperimentConfig& c, const std::string& k,
                               const std::string& v) {
      try {
        c.scheme = ParseCodingScheme(v);
      } catch (const Error&) {
        BadValue(k, v);
      }
    };
    PSNN_INT_KEY("coding.dt", dt);
    PSNN_DOUBLE_KEY("train.eta", eta);
    PSNN_DOUBLE_KEY("train.eta_phi", eta_phi);
    PSNN_DOUBLE_KEY("train.kappa", kappa);
    PSNN_DOUBLE_KEY("train.alpha", alpha);
    PSNN_DOUBLE_KEY("train.rate", rate);
    keys["train.baseline"] = [](ExperimentConfig& c, const std::string& k,
                                const std::string& v) {
      c.baseline = ToBool(k, v);
    };
    PSNN_DOUBLE_KEY("train.baseline_const", baseline_const);
    PSNN_INT_KEY("train.epochs", epochs);
    PSNN_INT_KEY("train.batch_size", batch_size);
    PSNN_INT_KEY("train.samples", samples);
    keys["train.init"] = [](ExperimentConfig& c, const std::string& k,
                            const std::string& v) {
      if (v != "normal" && v != "uniform") BadValue(k, v);
      c.init = v;
    };
    PSNN_DOUBLE_KEY("train.init_scale", init_scale);
    keys["batch.horizons"] = [](ExperimentConfig& c, const std::string& k,
                                const std::string& v) {
      c.horizons = ToList<int>(k, v, ToInt);
    };
    PSNN_INT_KEY("batch.train_size", train_size);
    PSNN_INT_KEY("batch.test_size", test_size);
    keys["batch.data"] = [](ExperimentConfig& c, const std::string&,
                            const std::string& v) { c.data_path = v; };
    PSNN_INT_KEY("online.samples", num_samples);
    PSNN_INT_KEY("online.mae_window", mae_window);
    PSNN_INT_KEY("online.rollouts", rollouts);
    keys["online.templates"] = [](ExperimentConfig& c, const std::string&,
                                  const std::string& v) {
      c.templates_path = v;
    };
    return keys;
  }();
  return table;
}

#undef PSNN_DOUBLE_KEY
#undef PSNN_INT_KEY

}  // namespace

Task ParseTask(const std::string& name) {
  if (name == "batch-classify") return Task::kBatchClassify;
  if (name == "online-predict") return Task::kOnlinePredict;
  Fail(ErrorKind::kConfig, "unknown task '" + name + "'");
}

const char* TaskName(Task task) {
  return task == Task::kBatchClassify ? "batch-classify" : "online-predict";
}

void ExperimentConfig::Validate() const {
  auto check = [](bool ok, const std::string& what) {
    Require(ok, ErrorKind::kParameter, what);
  };
  check(num_observed >= 1, "network.observed must be >= 1");
  check(num_hidden >= 0, "network.hidden must be >= 0");
  check(bandwidth > 0, "network.bandwidth must be > 0");
  check(dt >= 1, "coding.dt must be >= 1");
  check(eta >= 0 && eta_phi >= 0, "learning rates must be >= 0");
  check(kappa >= 0 && kappa < 1, "train.kappa must lie in [0, 1)");
  check(alpha >= 0, "train.alpha must be >= 0");
  check(rate > 0 && rate < 1, "train.rate must lie in (0, 1)");
  check(baseline_const > 0 && baseline_const <= 1,
        "train.baseline_const must lie in (0, 1]");
  check(epochs >= 0, "train.epochs must be >= 0");
  check(batch_size >= 1, "train.batch_size must be >= 1");
  check(samples >= 1, "train.samples must be >= 1");
  check(init_scale >= 0, "train.init_scale must be >= 0");
  check(!horizons.empty(), "batch.horizons must not be empty");
  for (int h : horizons) check(h >= 1, "batch.horizons entries must be >= 1");
  check(train_size >= 1 && test_size >= 1, "batch sizes must be >= 1");
  check(num_samples >= 2, "online.samples must be >= 2");
  check(mae_window >= 1, "online.mae_window must be >= 1");
  check(rollouts >= 1, "online.rollouts must be >= 1");
  for (const KernelConfig* k : {&feedforward, &feedback}) {
    check(k->basis >= 1, "kernel basis count must be >= 1");
    check(k->duration > 0, "kernel duration must be > 0");
  }
}

ExperimentConfig DefaultConfig(Task task) {
  ExperimentConfig c;
  c.task = task;
  if (task == Task::kBatchClassify) {
    // Two-layer 256 -> 2 network, K = 8 raised cosines spanning the horizon.
    c.num_observed = 258;
    c.num_hidden = 0;
    c.feedforward.basis = 8;
    c.feedback.basis = 8;
    // About 2000 long-kernel traces feed each output; a wider bandwidth and
    // a smaller step keep the first epochs from overshooting.
    c.bandwidth = 10.0;
    c.eta = 0.001;
    c.eta_phi = 0.001;
    c.epochs = 100;
    c.init = "uniform";
    c.init_scale = 1.0;
    c.alpha = 0.0;
  } else {
    const std::vector<double> durations = {0.5, 1, 3, 5, 10};
    c.feedforward.durations = durations;
    c.feedback.durations = durations;
    // With peak-one members this long, early updates tend to lock hidden
    // neurons on.
    c.feedforward.l2_normalize = c.feedback.l2_normalize = true;
    c.feedforward.basis = c.feedback.basis = 5;
  }
  return c;
}

std::map<std::string, std::string> ParseKeyValues(const std::string& text) {
  std::map<std::string, std::string> out;
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      Fail(ErrorKind::kConfig, "line " + std::to_string(line_no) +
                                   ": expected 'key = value', got '" + line + "'");
    }
    const std::string key = Trim(line.substr(0, eq));
    if (key.empty()) {
      Fail(ErrorKind::kConfig,
           "line " + std::to_string(line_no) + ": missing key");
    }
    out[key] = Trim(line.substr(eq + 1));
  }
  return out;
}

ExperimentConfig ParseConfig(const std::string& text) {
  const std::map<std::string, std::string> values = ParseKeyValues(text);
  const auto& table = KeyTable();
  for (const auto& [key, value] : values) {
    if (!table.count(key)) Fail(ErrorKind::kConfig, "unknown key '" + key + "'");
  }
  Task task = Task::kOnlinePredict;
  if (auto it = values.find("task"); it != values.end()) {
    try {
      task = ParseTask(it->second);
    } catch (const Error&) {
      BadValue("task", it->second);
    }
  }
  ExperimentConfig config = DefaultConfig(task);
  for (const auto& [key, value] : values) table.at(key)(config, key, value);
  return config;
}

ExperimentConfig LoadConfigFile(const std::string& path) {
  std::ifstream in(path);
  Require(in.good(), ErrorKind::kConfig, "cannot read config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseConfig(buffer.str());
}

std::vector<std::string> ConfigKeys() {
  std::vector<std::string> keys;
  for (const auto& entry : KeyTable()) keys.push_back(entry.first);
  return keys;
}

namespace {

BasisBank BuildRawBank(const KernelConfig& config, BankRole role, double unit) {
  const int steps = std::max(1, static_cast<int>(std::ceil(config.duration * unit)));
  switch (config.family) {
    case KernelFamily::kRaisedCosine: {
      std::vector<double> durations;
      if (!config.durations.empty()) {
        for (double d : config.durations) durations.push_back(d * unit);
      } else {
        for (int k = 1; k <= config.basis; ++k) {
          durations.push_back(config.duration * unit * k / config.basis);
        }
      }
      return MakeRaisedCosineBank(durations, role);
    }
    case KernelFamily::kStdp:
      return MakeStdpBank(config.stdp_delay, steps, role);
    case KernelFamily::kExponential:
    case KernelFamily::kDiffExponential:
    case KernelFamily::kFeedbackExponential:
      return MakeSingleKernelBank(
          MakeKernel(config.family, config.constants, steps), role);
    case KernelFamily::kCustom:
      break;
  }
  Fail(ErrorKind::kParameter, "custom kernels cannot be built from a config");
}

}  // namespace

BasisBank BuildBank(const KernelConfig& config, BankRole role, double unit) {
  Require(unit > 0, ErrorKind::kParameter, "time unit must be > 0");
  BasisBank bank = BuildRawBank(config, role, unit);
  return config.l2_normalize ? L2NormalizedBank(bank) : bank;
}

}  // namespace psnn
