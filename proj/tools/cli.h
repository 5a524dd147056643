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

// Command line front end. Subcommands:
//
//   train-batch    batch classification study, writes accuracy.csv
//   train-online   online prediction study, writes online_metrics.csv
//   encode         values file -> raster CSV
//   decode         raster CSV -> values file
//   simulate       roll a network forward with the input raster clamped
//   oracle-elbo    exact ELBO and log-likelihood of an observed raster
//
// Global flags: --config <path>, --seed <u64>, --out <dir>.
// Exit codes: 0 success, 1 usage or config error, 2 data error.

#ifndef PSNN_TOOLS_CLI_H_
#define PSNN_TOOLS_CLI_H_

#include <iosfwd>

namespace psnn {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitData = 2;

int CliMain(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace psnn

#endif  // PSNN_TOOLS_CLI_H_
