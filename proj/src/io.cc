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

#include "locshap/io.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <system_error>

#include "json.hpp"
#include "locshap/rng.h"

namespace locshap {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string where(std::string_view source, int line) {
  return std::string(source) + ":" + std::to_string(line) + ": ";
}

// Shortest text that round-trips.
std::string format_double(double x) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

struct Row {
  std::vector<double> features;
  int label;
  int line;
  int split;  // -1 unspecified, 0 train, 1 test
};

// 70:30 per class: floor quotas, then the remaining test slots go to the
// largest remainders (lowest class id on ties).
std::vector<int> stratified_test_flags(const std::vector<Row>& rows,
                                       int num_classes, std::uint64_t seed) {
  std::vector<std::vector<int>> by_class(num_classes);
  for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
    by_class[rows[i].label].push_back(i);
  }
  const int total = static_cast<int>(rows.size());
  const int target = (total * 30 + 50) / 100;
  std::vector<int> quota(num_classes);
  std::vector<int> remainder(num_classes);
  int assigned = 0;
  for (int c = 0; c < num_classes; ++c) {
    const int n = static_cast<int>(by_class[c].size());
    quota[c] = n * 30 / 100;
    remainder[c] = n * 30 % 100;
    assigned += quota[c];
  }
  std::vector<int> classes(num_classes);
  std::iota(classes.begin(), classes.end(), 0);
  std::stable_sort(classes.begin(), classes.end(),
                   [&](int a, int b) { return remainder[a] > remainder[b]; });
  for (int c : classes) {
    if (assigned >= target) break;
    if (quota[c] < static_cast<int>(by_class[c].size())) {
      ++quota[c];
      ++assigned;
    }
  }
  std::vector<int> is_test(rows.size(), 0);
  for (int c = 0; c < num_classes; ++c) {
    Rng rng = Rng::for_stream(seed, static_cast<std::uint64_t>(c));
    rng.shuffle(std::span<int>(by_class[c]));
    for (int i = 0; i < quota[c]; ++i) is_test[by_class[c][i]] = 1;
  }
  return is_test;
}

}  // namespace

Instance parse_csv(std::istream& in, std::string_view source,
                   std::uint64_t seed) {
  std::string line;
  int line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      for (auto f : split_fields(line)) header.emplace_back(f);
      break;
    }
  }
  if (header.empty()) throw ValidationError(std::string(source) + ": empty file");
  int label_col = -1, split_col = -1;
  std::vector<int> feature_cols;
  for (int i = 0; i < static_cast<int>(header.size()); ++i) {
    if (header[i] == "label") {
      label_col = i;
    } else if (header[i] == "split") {
      split_col = i;
    } else {
      feature_cols.push_back(i);
    }
  }
  if (label_col < 0) {
    throw ValidationError(where(source, line_no) + "missing required column 'label'");
  }

  std::vector<Row> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_fields(line);
    if (fields.size() != header.size()) {
      throw ValidationError(where(source, line_no) + "expected " +
                            std::to_string(header.size()) + " fields, found " +
                            std::to_string(fields.size()));
    }
    Row row{{}, 0, line_no, -1};
    for (int c : feature_cols) {
      std::string text(fields[c]);
      char* end = nullptr;
      const double v = std::strtod(text.c_str(), &end);
      if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(v)) {
        throw ValidationError(where(source, line_no) + "non-numeric value '" + text +
                              "' in column '" + header[c] + "'");
      }
      row.features.push_back(v);
    }
    auto lf = fields[label_col];
    auto [ptr, ec] = std::from_chars(lf.data(), lf.data() + lf.size(), row.label);
    if (ec != std::errc() || ptr != lf.data() + lf.size() || row.label < 0) {
      throw ValidationError(where(source, line_no) + "label '" + std::string(lf) +
                            "' is not a non-negative integer");
    }
    if (split_col >= 0) {
      auto s = fields[split_col];
      if (s == "train") {
        row.split = 0;
      } else if (s == "test") {
        row.split = 1;
      } else {
        throw ValidationError(where(source, line_no) + "split must be 'train' or 'test', got '" +
                              std::string(s) + "'");
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ValidationError(std::string(source) + ": no data rows");

  int num_classes = 0;
  for (const Row& r : rows) num_classes = std::max(num_classes, r.label + 1);
  std::vector<int> is_test;
  if (split_col >= 0) {
    for (const Row& r : rows) is_test.push_back(r.split);
  } else {
    is_test = stratified_test_flags(rows, num_classes, seed);
  }
  std::vector<bool> seen_in_train(num_classes, false);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!is_test[i]) seen_in_train[rows[i].label] = true;
  }

  Instance inst;
  inst.data.num_classes = num_classes;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    Row& r = rows[i];
    if (is_test[i]) {
      if (split_col >= 0 && !seen_in_train[r.label]) {
        throw ValidationError(where(source, r.line) + "unknown label " +
                              std::to_string(r.label) +
                              " (absent from training rows)");
      }
      inst.tests.push_back({static_cast<int>(inst.tests.size()),
                            std::move(r.features), r.label});
    } else {
      inst.data.points.push_back({inst.data.size(), std::move(r.features), r.label});
    }
  }
  inst.data.validate();
  validate_tests(inst.data, inst.tests);
  return inst;
}

Instance ingest_csv(const std::filesystem::path& path, std::uint64_t seed) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_csv(in, path.string(), seed);
}

std::string to_csv(const Instance& inst) {
  std::ostringstream os;
  const int dim = inst.data.dim();
  for (int i = 0; i < dim; ++i) os << "x" << i << ",";
  os << "label,split\n";
  auto emit = [&](const std::vector<double>& f, int label, const char* split) {
    for (double v : f) os << format_double(v) << ",";
    os << label << "," << split << "\n";
  };
  for (const auto& p : inst.data.points) emit(p.features, p.label, "train");
  for (const auto& t : inst.tests) emit(t.features, t.label, "test");
  return os.str();
}

void SyntheticSpec::validate() const {
  if (blobs < 1 || points_per_class < 1 || tests_per_class < 0 || dim < 1) {
    throw ValidationError("synthetic: counts and dimension must be positive");
  }
  if (!(sigma >= 0.0) || !(spread >= 0.0)) {
    throw ValidationError("synthetic: sigma and spread must be >= 0");
  }
}

Instance generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  std::vector<std::vector<double>> centers(spec.blobs, std::vector<double>(spec.dim));
  for (auto& c : centers) {
    for (double& x : c) x = spec.spread * (2.0 * rng.uniform01() - 1.0);
  }
  Instance inst;
  inst.data.num_classes = spec.blobs;
  auto sample = [&](const std::vector<double>& center, double offset) {
    std::vector<double> x(center);
    for (double& v : x) {
      const double noise = spec.sigma > 0.0 ? spec.sigma * rng.normal() : 0.0;
      v += offset + noise;
    }
    return x;
  };
  for (int c = 0; c < spec.blobs; ++c) {
    for (int i = 0; i < spec.points_per_class; ++i) {
      inst.data.points.push_back({inst.data.size(), sample(centers[c], 0.0), c});
    }
  }
  for (int c = 0; c < spec.blobs; ++c) {
    for (int i = 0; i < spec.tests_per_class; ++i) {
      inst.tests.push_back({static_cast<int>(inst.tests.size()),
                            sample(centers[c], spec.shift), c});
    }
  }
  return inst;
}

void normalize_features(Instance& inst) {
  const int dim = inst.data.dim();
  const int n = inst.data.size();
  if (n == 0) return;
  for (int j = 0; j < dim; ++j) {
    double mean = 0.0;
    for (const auto& p : inst.data.points) mean += p.features[j];
    mean /= n;
    double var = 0.0;
    for (const auto& p : inst.data.points) {
      var += (p.features[j] - mean) * (p.features[j] - mean);
    }
    const double sd = std::sqrt(var / n);
    const double scale = sd > 0.0 ? 1.0 / sd : 1.0;
    for (auto& p : inst.data.points) p.features[j] = (p.features[j] - mean) * scale;
    for (auto& t : inst.tests) t.features[j] = (t.features[j] - mean) * scale;
  }
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() +
                          ": " + ec.message());
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move result into " + path.string());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string result_to_json(const ValuationResult& result,
                           const std::string& config_json) {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["method"] = result.method;
  j["seed"] = result.seed;
  j["samples"] = result.samples_used;
  j["fits"] = result.trainings;
  j["evaluations"] = result.evaluations;
  j["seconds"] = result.elapsed_seconds;
  j["converged"] = result.converged;
  nlohmann::ordered_json values = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < result.values.size(); ++i) {
    values[std::to_string(i)] = result.values[i];
  }
  j["values"] = std::move(values);
  j["config"] = nlohmann::ordered_json::parse(config_json);
  return j.dump(2) + "\n";
}

std::vector<double> values_from_json(std::string_view json_text,
                                     std::string_view source) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string(source) + ": " + e.what());
  }
  if (!j.is_object() || !j.contains("values") || !j["values"].is_object()) {
    throw ValidationError(std::string(source) + ": missing 'values' object");
  }
  std::map<int, double> by_id;
  for (auto& [key, value] : j["values"].items()) {
    int id = -1;
    auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), id);
    if (ec != std::errc() || ptr != key.data() + key.size() || id < 0 ||
        !value.is_number()) {
      throw ValidationError(std::string(source) + ": bad value entry '" + key + "'");
    }
    by_id[id] = value.get<double>();
  }
  std::vector<double> out;
  for (const auto& [id, v] : by_id) {
    if (id != static_cast<int>(out.size())) {
      throw ValidationError(std::string(source) + ": value ids are not 0..n-1");
    }
    out.push_back(v);
  }
  return out;
}

std::string trace_csv(const ValuationResult& result) {
  std::ostringstream os;
  os << "samples,criterion\n";
  for (const Checkpoint& c : result.trace) {
    os << c.samples << "," << format_double(c.criterion) << "\n";
  }
  return os.str();
}

std::string curve_csv(const SelectionCurve& curve) {
  std::ostringstream os;
  os << "fraction,accuracy\n";
  for (std::size_t i = 0; i < curve.fractions.size(); ++i) {
    os << format_double(curve.fractions[i]) << ","
       << format_double(curve.accuracies[i]) << "\n";
  }
  return os.str();
}

std::string ladder_csv(const CostLadder& ladder) {
  std::ostringstream os;
  os << "method,fits,evaluations,samples,seconds\n";
  for (const CostRow& r : ladder) {
    os << r.method << "," << r.fits << "," << r.evaluations << "," << r.samples
       << "," << format_double(r.seconds) << "\n";
  }
  return os.str();
}

std::string scaling_csv(const std::vector<ScalingRow>& rows) {
  std::ostringstream os;
  os << "num_training,method,fits,evaluations,seconds\n";
  for (const ScalingRow& r : rows) {
    os << r.num_training << "," << r.method << "," << r.fits << ","
       << r.evaluations << "," << format_double(r.seconds) << "\n";
  }
  return os.str();
}

}  // namespace locshap
