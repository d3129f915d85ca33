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

#ifndef LOCSHAP_CLI_H_
#define LOCSHAP_CLI_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "locshap/analysis.h"
#include "locshap/io.h"

namespace locshap {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitSizeLimit = 3;
inline constexpr int kExitIo = 4;

// Everything one run depends on. Serialized flat; every key can also be set
// with a flag of the same name (underscores become dashes).
struct RunConfig {
  std::string data;  // CSV path; empty selects synthetic data
  SyntheticSpec synthetic;
  bool normalize = false;

  std::string model = "wknn";
  int k = 5;
  int max_depth = 8;
  int min_samples_split = 2;
  int min_samples_leaf = 1;
  double gamma = 1.0;
  double threshold = 0.5;

  // Optional second family that defines the supports; empty reuses `model`.
  std::string support_model;
  int support_k = 5;
  int support_max_depth = 8;
  double support_gamma = 1.0;
  double support_threshold = 0.5;

  std::string method = "lsmr";
  SamplerConfig sampler;
  int enumeration_limit = 20;
  std::string out = "out";

  ModelFamily utility_family() const;
  ModelFamily support_family() const;
  ExactOptions exact_options() const;
  // Flat JSON object with every key.
  std::string to_json() const;
  void validate() const;
};

// Applies the keys of a flat JSON object onto `config`. Unknown keys and
// mistyped values raise ValidationError.
void apply_config_json(RunConfig& config, const std::string& json_text,
                       const std::string& source);
RunConfig load_config(const std::filesystem::path& path);

// Loads or generates the instance described by `config`.
Instance load_instance(const RunConfig& config);

// Entry point behind the locshap executable; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace locshap

#endif  // LOCSHAP_CLI_H_
