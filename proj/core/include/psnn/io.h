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

// Text formats. Rasters are CSV with a "t,n0,n1,..." header and one
// time-major row per step. Checkpoints are a "theta" header followed by one
// parameter per line in Flatten() order: for each neuron, bias, feedforward
// weights (presynaptic order, basis-minor), then feedback weights.

#ifndef PSNN_IO_H_
#define PSNN_IO_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "psnn/glm.h"
#include "psnn/raster.h"

namespace psnn {

std::string ReadTextFile(const std::string& path);
void WriteTextFile(const std::string& path, const std::string& text);

std::string RasterToCsv(const SpikeRaster& raster);
// Throws a data error on malformed headers, non-binary cells or
// nonconsecutive time indices.
SpikeRaster RasterFromCsv(const std::string& text);
SpikeRaster ReadRaster(const std::string& path);
void WriteRaster(const std::string& path, const SpikeRaster& raster);

std::string ParamsToCsv(const NetworkParams& params);
// Fills `params`, whose shape must already match the file.
void ParamsFromCsv(const std::string& text, NetworkParams& params);

struct ImageDataset {
  std::vector<std::vector<double>> images;  // 256 pixels each, in [0, 1]
  std::vector<int> labels;                  // 0 .. num_classes - 1
  int num_classes = 0;
};

inline constexpr int kImagePixels = 256;

// One image per row: 256 pixel values then a label. A non-numeric first row
// is skipped as a header. Distinct labels are mapped to 0, 1, ... in sorted
// order.
ImageDataset DatasetFromCsv(const std::string& text);

// Comma- or whitespace-separated numbers, one sequence per nonempty line.
std::vector<std::vector<double>> SequencesFromText(const std::string& text);

// Fixed-column numeric table written with a header and a fixed precision.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns, int precision = 6);
  void AddRow(const std::vector<double>& values);
  std::string ToString() const;
  int num_rows() const { return static_cast<int>(rows_.size()); }
  const std::vector<std::string>& columns() const { return columns_; }

 private:
  std::vector<std::string> columns_;
  int precision_;
  std::vector<std::vector<double>> rows_;
};

// Integers print without a fractional part.
std::string FormatNumber(double value, int precision);

}  // namespace psnn

#endif  // PSNN_IO_H_
