// Copyright 2026 The locshap Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LOCSHAP_IO_H_
#define LOCSHAP_IO_H_

#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "locshap/analysis.h"
#include "locshap/result.h"

namespace locshap {

// Reads a CSV with a header row, numeric feature columns, an integer `label`
// column and an optional `split` column (train/test). Without `split` the
// rows are divided 70:30 per class, shuffled by `seed`. Parse errors carry
// the source name and line number.
Instance ingest_csv(const std::filesystem::path& path, std::uint64_t seed = 0);
Instance parse_csv(std::istream& in, std::string_view source,
                   std::uint64_t seed = 0);

// Writes `instance` in the format ingest_csv reads, with a split column.
std::string to_csv(const Instance& instance);

struct SyntheticSpec {
  int blobs = 2;  // one class per blob
  int points_per_class = 20;
  int tests_per_class = 5;
  double sigma = 1.0;
  int dim = 2;
  // Blob centres are drawn uniformly from [-spread, spread]^dim.
  double spread = 5.0;
  // Added to every coordinate of every test point.
  double shift = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

Instance generate_synthetic(const SyntheticSpec& spec);

// Per-column z-score with training statistics, applied to train and test.
void normalize_features(Instance& instance);

// Writes through a temporary file in the same directory and renames it into
// place. Throws IoError naming the path.
void write_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

// result.json body. `config_json` is a serialized JSON object echoed under
// "config".
std::string result_to_json(const ValuationResult& result,
                           const std::string& config_json);
// Values of a result.json, dense by training id.
std::vector<double> values_from_json(std::string_view json_text,
                                     std::string_view source);

std::string trace_csv(const ValuationResult& result);
std::string curve_csv(const SelectionCurve& curve);
std::string ladder_csv(const CostLadder& ladder);
std::string scaling_csv(const std::vector<ScalingRow>& rows);

}  // namespace locshap

#endif  // LOCSHAP_IO_H_
