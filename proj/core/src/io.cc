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

#include "psnn/io.h"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "psnn/error.h"

namespace psnn {
namespace {

std::vector<std::string> SplitFields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) {
    const auto b = field.find_first_not_of(" \t\r");
    const auto e = field.find_last_not_of(" \t\r");
    fields.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
  }
  return fields;
}

std::vector<std::string> Lines(const std::string& text) {
  std::vector<std::string> lines;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    lines.push_back(line);
  }
  return lines;
}

bool ParseDouble(const std::string& s, double* out) {
  if (s.empty()) return false;
  char* end = nullptr;
  errno = 0;
  *out = std::strtod(s.c_str(), &end);
  return *end == '\0' && errno == 0 && std::isfinite(*out);
}

}  // namespace

std::string ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  Require(in.good(), ErrorKind::kData, "cannot read file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteTextFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  Require(out.good(), ErrorKind::kData, "cannot write file '" + path + "'");
  out << text;
  Require(out.good(), ErrorKind::kData, "write failed for '" + path + "'");
}

std::string RasterToCsv(const SpikeRaster& raster) {
  std::string out = "t";
  for (int i = 0; i < raster.num_neurons(); ++i) {
    out += ",n" + std::to_string(i);
  }
  out += '\n';
  for (int t = 0; t < raster.num_steps(); ++t) {
    out += std::to_string(t);
    for (int i = 0; i < raster.num_neurons(); ++i) {
      out += raster.at(i, t) ? ",1" : ",0";
    }
    out += '\n';
  }
  return out;
}

SpikeRaster RasterFromCsv(const std::string& text) {
  const std::vector<std::string> lines = Lines(text);
  Require(!lines.empty(), ErrorKind::kData, "raster CSV is empty");
  const std::vector<std::string> header = SplitFields(lines[0]);
  Require(header.size() >= 2 && header[0] == "t", ErrorKind::kData,
          "raster CSV header must be 't,n0,n1,...'");
  const int num_neurons = static_cast<int>(header.size()) - 1;
  for (int i = 0; i < num_neurons; ++i) {
    Require(header[i + 1] == "n" + std::to_string(i), ErrorKind::kData,
            "raster CSV header column " + std::to_string(i + 1) +
                " must be 'n" + std::to_string(i) + "'");
  }
  const int num_steps = static_cast<int>(lines.size()) - 1;
  Require(num_steps >= 1, ErrorKind::kData, "raster CSV has no rows");
  SpikeRaster raster(num_neurons, num_steps);
  for (int t = 0; t < num_steps; ++t) {
    const std::vector<std::string> fields = SplitFields(lines[t + 1]);
    const std::string where = "raster CSV row " + std::to_string(t + 1);
    Require(static_cast<int>(fields.size()) == num_neurons + 1, ErrorKind::kData,
            where + ": expected " + std::to_string(num_neurons + 1) + " fields");
    Require(fields[0] == std::to_string(t), ErrorKind::kData,
            where + ": time index must be " + std::to_string(t));
    for (int i = 0; i < num_neurons; ++i) {
      const std::string& cell = fields[i + 1];
      Require(cell == "0" || cell == "1", ErrorKind::kData,
              where + ": cell '" + cell + "' is not 0 or 1");
      raster.set(i, t, cell == "1" ? 1 : 0);
    }
  }
  return raster;
}

SpikeRaster ReadRaster(const std::string& path) {
  return RasterFromCsv(ReadTextFile(path));
}

void WriteRaster(const std::string& path, const SpikeRaster& raster) {
  WriteTextFile(path, RasterToCsv(raster));
}

std::string ParamsToCsv(const NetworkParams& params) {
  std::string out = "theta\n";
  char buf[64];
  for (double v : Flatten(params)) {
    std::snprintf(buf, sizeof(buf), "%.17g\n", v);
    out += buf;
  }
  return out;
}

void ParamsFromCsv(const std::string& text, NetworkParams& params) {
  const std::vector<std::string> lines = Lines(text);
  Require(!lines.empty() && lines[0] == "theta", ErrorKind::kData,
          "checkpoint header must be 'theta'");
  std::vector<double> flat;
  for (std::size_t n = 1; n < lines.size(); ++n) {
    double v;
    Require(ParseDouble(lines[n], &v), ErrorKind::kData,
            "checkpoint line " + std::to_string(n + 1) + " is not a number");
    flat.push_back(v);
  }
  std::size_t expected = 0;
  for (const NeuronParams& p : params) expected += p.size();
  Require(flat.size() == expected, ErrorKind::kData,
          "checkpoint has " + std::to_string(flat.size()) +
              " values, network expects " + std::to_string(expected));
  Unflatten(flat, params);
}

ImageDataset DatasetFromCsv(const std::string& text) {
  const std::vector<std::string> lines = Lines(text);
  ImageDataset data;
  std::vector<double> raw_labels;
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const std::vector<std::string> fields = SplitFields(lines[n]);
    std::vector<double> values(fields.size());
    bool numeric = true;
    for (std::size_t k = 0; k < fields.size(); ++k) {
      numeric = numeric && ParseDouble(fields[k], &values[k]);
    }
    if (!numeric && n == 0) continue;
    const std::string where = "dataset row " + std::to_string(n + 1);
    Require(numeric, ErrorKind::kData, where + " is not numeric");
    Require(static_cast<int>(values.size()) == kImagePixels + 1,
            ErrorKind::kData,
            where + ": expected " + std::to_string(kImagePixels + 1) + " fields");
    for (int k = 0; k < kImagePixels; ++k) {
      Require(values[k] >= 0.0 && values[k] <= 1.0, ErrorKind::kData,
              where + ": pixel values must lie in [0, 1]");
    }
    raw_labels.push_back(values.back());
    values.pop_back();
    data.images.push_back(std::move(values));
  }
  Require(!data.images.empty(), ErrorKind::kData, "dataset has no rows");
  std::vector<double> distinct = raw_labels;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  Require(distinct.size() >= 2, ErrorKind::kData,
          "dataset needs at least two classes");
  for (double label : raw_labels) {
    data.labels.push_back(static_cast<int>(
        std::lower_bound(distinct.begin(), distinct.end(), label) -
        distinct.begin()));
  }
  data.num_classes = static_cast<int>(distinct.size());
  return data;
}

std::vector<std::vector<double>> SequencesFromText(const std::string& text) {
  std::vector<std::vector<double>> out;
  int line_no = 0;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    ++line_no;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::stringstream fields(line);
    std::string field;
    std::vector<double> values;
    while (fields >> field) {
      double v;
      Require(ParseDouble(field, &v), ErrorKind::kData,
              "line " + std::to_string(line_no) + ": '" + field +
                  "' is not a number");
      values.push_back(v);
    }
    if (!values.empty()) out.push_back(std::move(values));
  }
  return out;
}

CsvTable::CsvTable(std::vector<std::string> columns, int precision)
    : columns_(std::move(columns)), precision_(precision) {}

void CsvTable::AddRow(const std::vector<double>& values) {
  Require(values.size() == columns_.size(), ErrorKind::kStructural,
          "row width does not match the table header");
  for (double v : values) {
    Require(std::isfinite(v), ErrorKind::kData, "metric values must be finite");
  }
  rows_.push_back(values);
}

std::string CsvTable::ToString() const {
  std::string out;
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    if (c) out += ',';
    out += columns_[c];
  }
  out += '\n';
  for (const auto& row : rows_) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += FormatNumber(row[c], precision_);
    }
    out += '\n';
  }
  return out;
}

std::string FormatNumber(double value, int precision) {
  char buf[64];
  if (value == std::floor(value) && std::fabs(value) < 1e15) {
    std::snprintf(buf, sizeof(buf), "%.0f", value);
  } else {
    std::snprintf(buf, sizeof(buf), "%.*f", precision, value);
  }
  std::string s = buf;
  // Values that round to zero print without a sign.
  if (s[0] == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

}  // namespace psnn
