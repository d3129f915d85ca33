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

#include "locshap/cli.h"

#include <charconv>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "locshap/exact.h"

namespace locshap {
namespace {

using Json = nlohmann::ordered_json;

struct Field {
  std::string key;
  std::function<void(RunConfig&, const Json&)> set;
  std::function<Json(const RunConfig&)> get;
  std::function<Json(const std::string&)> parse_flag;
};

template <typename T>
Json parse_flag_value(const std::string& key, const std::string& text) {
  auto bad = [&] {
    return ValidationError("flag --" + key + ": cannot parse '" + text + "'");
  };
  if constexpr (std::is_same_v<T, std::string>) {
    return text;
  } else if constexpr (std::is_same_v<T, bool>) {
    if (text == "true" || text == "1") return true;
    if (text == "false" || text == "0") return false;
    throw bad();
  } else if constexpr (std::is_floating_point_v<T>) {
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size()) throw bad();
    return v;
  } else {
    T v{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) throw bad();
    return v;
  }
}

template <typename T, typename Access>
Field make_field(std::string key, Access access) {
  Field f;
  f.key = key;
  f.set = [access, key](RunConfig& c, const Json& v) {
    bool ok;
    if constexpr (std::is_same_v<T, std::string>) {
      ok = v.is_string();
    } else if constexpr (std::is_same_v<T, bool>) {
      ok = v.is_boolean();
    } else if constexpr (std::is_floating_point_v<T>) {
      ok = v.is_number();
    } else if constexpr (std::is_unsigned_v<T>) {
      ok = v.is_number_unsigned();
    } else {
      ok = v.is_number_integer();
    }
    if (!ok) throw ValidationError("config key '" + key + "' has the wrong type");
    access(c) = v.template get<T>();
  };
  f.get = [access](const RunConfig& c) {
    const auto& value = access(c);
    if constexpr (std::is_floating_point_v<T>) {
      // JSON has no infinity; echo it as a string the flag parser accepts.
      if (!std::isfinite(value)) return Json(value > 0 ? "inf" : "-inf");
    }
    return Json(value);
  };
  f.parse_flag = [key](const std::string& text) {
    return parse_flag_value<T>(key, text);
  };
  return f;
}

#define LOCSHAP_FIELD(type, key, expr) \
  make_field<type>(key, [](auto& c) -> auto& { return expr; })

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      LOCSHAP_FIELD(std::string, "data", c.data),
      LOCSHAP_FIELD(int, "blobs", c.synthetic.blobs),
      LOCSHAP_FIELD(int, "points_per_class", c.synthetic.points_per_class),
      LOCSHAP_FIELD(int, "tests_per_class", c.synthetic.tests_per_class),
      LOCSHAP_FIELD(double, "sigma", c.synthetic.sigma),
      LOCSHAP_FIELD(int, "dim", c.synthetic.dim),
      LOCSHAP_FIELD(double, "spread", c.synthetic.spread),
      LOCSHAP_FIELD(double, "shift", c.synthetic.shift),
      LOCSHAP_FIELD(std::uint64_t, "data_seed", c.synthetic.seed),
      LOCSHAP_FIELD(bool, "normalize", c.normalize),
      LOCSHAP_FIELD(std::string, "model", c.model),
      LOCSHAP_FIELD(int, "k", c.k),
      LOCSHAP_FIELD(int, "max_depth", c.max_depth),
      LOCSHAP_FIELD(int, "min_samples_split", c.min_samples_split),
      LOCSHAP_FIELD(int, "min_samples_leaf", c.min_samples_leaf),
      LOCSHAP_FIELD(double, "gamma", c.gamma),
      LOCSHAP_FIELD(double, "threshold", c.threshold),
      LOCSHAP_FIELD(std::string, "support_model", c.support_model),
      LOCSHAP_FIELD(int, "support_k", c.support_k),
      LOCSHAP_FIELD(int, "support_max_depth", c.support_max_depth),
      LOCSHAP_FIELD(double, "support_gamma", c.support_gamma),
      LOCSHAP_FIELD(double, "support_threshold", c.support_threshold),
      LOCSHAP_FIELD(std::string, "method", c.method),
      LOCSHAP_FIELD(std::int64_t, "samples", c.sampler.max_samples),
      LOCSHAP_FIELD(double, "tau", c.sampler.tau),
      LOCSHAP_FIELD(int, "check_every", c.sampler.check_every),
      LOCSHAP_FIELD(double, "eps_guard", c.sampler.eps_guard),
      LOCSHAP_FIELD(std::uint64_t, "seed", c.sampler.seed),
      LOCSHAP_FIELD(double, "tmc_perf_tol", c.sampler.tmc_perf_tol),
      LOCSHAP_FIELD(int, "tmc_stable_runs", c.sampler.tmc_stable_runs),
      LOCSHAP_FIELD(bool, "stop_on_convergence", c.sampler.stop_on_convergence),
      LOCSHAP_FIELD(int, "workers", c.sampler.workers),
      LOCSHAP_FIELD(int, "enumeration_limit", c.enumeration_limit),
      LOCSHAP_FIELD(std::string, "out", c.out),
  };
  return table;
}

#undef LOCSHAP_FIELD

ModelFamily family_for(const std::string& name, int k, int max_depth,
                       int min_split, int min_leaf, double gamma,
                       double threshold) {
  if (name == "wknn") return ModelFamily::wknn(k);
  if (name == "tree") return ModelFamily::tree({max_depth, min_split, min_leaf});
  if (name == "kernel") return ModelFamily::kernel(gamma, threshold);
  return ModelFamily::from_name(name);  // throws with the list of names
}

template <typename T>
std::vector<T> parse_list(const std::string& text, const std::string& what) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(parse_flag_value<T>(what, item).template get<T>());
  }
  if (out.empty()) throw ValidationError("--" + what + ": empty list");
  return out;
}

std::string summary(const ValuationResult& r) {
  std::ostringstream os;
  os << "method=" << r.method << " fits=" << r.trainings
     << " evaluations=" << r.evaluations << " samples=" << r.samples_used
     << " seconds=" << r.elapsed_seconds;
  return os.str();
}

}  // namespace

ModelFamily RunConfig::utility_family() const {
  return family_for(model, k, max_depth, min_samples_split, min_samples_leaf,
                    gamma, threshold);
}

ModelFamily RunConfig::support_family() const {
  if (support_model.empty()) return utility_family();
  return family_for(support_model, support_k, support_max_depth,
                    min_samples_split, min_samples_leaf, support_gamma,
                    support_threshold);
}

ExactOptions RunConfig::exact_options() const {
  ExactOptions o;
  o.enumeration_limit = enumeration_limit;
  o.workers = sampler.workers;
  return o;
}

std::string RunConfig::to_json() const {
  Json j = Json::object();
  for (const Field& f : fields()) j[f.key] = f.get(*this);
  return j.dump();
}

void RunConfig::validate() const {
  utility_family();
  support_family();
  sampler.validate();
  if (!is_method(method)) {
    throw ValidationError("unknown method '" + method + "'");
  }
  if (enumeration_limit < 0 || enumeration_limit > 62) {
    throw ValidationError("enumeration_limit must be in 0..62");
  }
  if (sampler.workers < 1) throw ValidationError("workers must be >= 1");
  if (data.empty()) synthetic.validate();
}

void apply_config_json(RunConfig& config, const std::string& json_text,
                       const std::string& source) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(source + ": " + e.what());
  }
  if (!j.is_object()) throw ValidationError(source + ": config must be a JSON object");
  for (auto& [key, value] : j.items()) {
    auto it = std::find_if(fields().begin(), fields().end(),
                           [&](const Field& f) { return f.key == key; });
    if (it == fields().end()) {
      throw ValidationError(source + ": unknown config key '" + key + "'");
    }
    // Infinite tolerances round-trip as strings.
    if (value.is_string() && (value == "inf" || value == "-inf") &&
        it->get(config).is_number()) {
      it->set(config, it->parse_flag(value.get<std::string>()));
    } else {
      it->set(config, Json(value));
    }
  }
}

RunConfig load_config(const std::filesystem::path& path) {
  RunConfig config;
  apply_config_json(config, read_file(path), path.string());
  return config;
}

Instance load_instance(const RunConfig& config) {
  Instance inst = config.data.empty() ? generate_synthetic(config.synthetic)
                                      : ingest_csv(config.data, config.synthetic.seed);
  if (config.normalize) normalize_features(inst);
  return inst;
}

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Local Shapley data valuation"};
  app.require_subcommand(1);

  std::string config_path;
  std::map<std::string, std::string> overrides;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "flat JSON run configuration");
    for (const Field& f : fields()) {
      std::string flag = "--" + f.key;
      std::replace(flag.begin(), flag.end(), '_', '-');
      sub->add_option_function<std::string>(
          flag, [&overrides, key = f.key](const std::string& v) { overrides[key] = v; },
          "override config key " + f.key);
    }
  };

  CLI::App* value = app.add_subcommand("value", "value training points with --method");
  CLI::App* oracle = app.add_subcommand("oracle", "exact global values by enumeration");
  CLI::App* compare = app.add_subcommand("compare", "correlate two result files");
  CLI::App* select = app.add_subcommand("select", "data-selection accuracy curve");
  CLI::App* bench = app.add_subcommand("bench", "cost ladder across methods");
  CLI::App* scale = app.add_subcommand("scale", "fits versus training-set size");
  CLI::App* subsets = app.add_subcommand("subsets", "count distinct support subsets");
  CLI::App* gen = app.add_subcommand("gen", "write a synthetic dataset as CSV");
  for (CLI::App* sub : {value, oracle, compare, select, bench, scale, subsets, gen}) {
    add_common(sub);
  }

  std::string first_result, second_result;
  compare->add_option("first", first_result, "result.json")->required();
  compare->add_option("second", second_result, "result.json")->required();
  std::string values_path;
  std::string fractions = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1.0";
  select->add_option("--values", values_path, "result.json to rank by")->required();
  select->add_option("--fractions", fractions, "comma-separated, increasing");
  std::string bench_methods =
      "oracle,local-baseline,subset-centric,lsmr,local-mc,lsmr-a";
  bench->add_option("--methods", bench_methods, "comma-separated method names");
  std::string sizes = "100,200,400,800,1600";
  std::string scale_methods = "lsmr-a,global-mc";
  scale->add_option("--sizes", sizes, "comma-separated training-set sizes");
  scale->add_option("--methods", scale_methods, "comma-separated method names");
  std::string gen_output;
  gen->add_option("--output", gen_output, "CSV path (default <out>/data.csv)");

  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e, out, err);
      return code == 0 ? kExitOk : kExitValidation;
    }

    RunConfig config = config_path.empty() ? RunConfig{} : load_config(config_path);
    for (const auto& [key, text] : overrides) {
      auto it = std::find_if(fields().begin(), fields().end(),
                             [&](const Field& f) { return f.key == key; });
      it->set(config, it->parse_flag(text));
    }
    if (oracle->parsed()) config.method = "oracle";
    config.validate();
    const std::filesystem::path out_dir = config.out;

    if (gen->parsed()) {
      const std::filesystem::path path =
          gen_output.empty() ? out_dir / "data.csv" : std::filesystem::path(gen_output);
      write_atomic(path, to_csv(generate_synthetic(config.synthetic)));
      out << "wrote " << path.string() << "\n";
      return kExitOk;
    }

    if (compare->parsed()) {
      auto a = values_from_json(read_file(first_result), first_result);
      auto b = values_from_json(read_file(second_result), second_result);
      const double r = pearson(a, b);
      const double rho = spearman(a, b);
      Json j;
      j["first"] = first_result;
      j["second"] = second_result;
      j["pearson"] = r;
      j["spearman"] = rho;
      write_atomic(out_dir / "compare.json", j.dump(2) + "\n");
      out << "pearson=" << r << " spearman=" << rho << "\n";
      return kExitOk;
    }

    const Instance inst = load_instance(config);

    if (scale->parsed()) {
      std::vector<Instance> instances;
      for (int size : parse_list<int>(sizes, "sizes")) {
        SyntheticSpec spec = config.synthetic;
        spec.points_per_class = std::max(1, size / spec.blobs);
        instances.push_back(generate_synthetic(spec));
      }
      auto methods = parse_list<std::string>(scale_methods, "methods");
      auto rows = scaling_study(config.utility_family(), instances, methods,
                                config.exact_options(), config.sampler);
      write_atomic(out_dir / "scaling.csv", scaling_csv(rows));
      out << scaling_csv(rows);
      return kExitOk;
    }

    const SupportMap supports =
        build_support_map(config.support_family(), inst.data, inst.tests);

    if (subsets->parsed()) {
      const SubsetFamily family =
          enumerate_distinct_subsets(supports, config.enumeration_limit);
      double per_test_sum = 0.0;
      for (int t = 0; t < supports.num_tests(); ++t) {
        per_test_sum += std::ldexp(1.0, static_cast<int>(supports.of(t).size()));
      }
      const double full = std::ldexp(1.0, inst.data.size());
      out << "distinct_subsets=" << family.size()
          << " sum_power_sets=" << per_test_sum << " power_set_of_D=" << full
          << " bound=" << std::min(per_test_sum, full) << "\n";
      return kExitOk;
    }

    ModelOracle game(config.utility_family(), inst.data, inst.tests);

    if (bench->parsed()) {
      auto methods = parse_list<std::string>(bench_methods, "methods");
      CostLadder ladder =
          cost_ladder(game, supports, methods, config.exact_options(), config.sampler);
      write_atomic(out_dir / "ladder.csv", ladder_csv(ladder));
      out << ladder_csv(ladder);
      return kExitOk;
    }

    if (select->parsed()) {
      auto values = values_from_json(read_file(values_path), values_path);
      auto fr = parse_list<double>(fractions, "fractions");
      SelectionCurve curve = selection_curve(values, config.utility_family(),
                                             inst.data, inst.tests, fr);
      write_atomic(out_dir / "curve.csv", curve_csv(curve));
      out << curve_csv(curve);
      return kExitOk;
    }

    ValuationResult result = run_method(config.method, game, supports,
                                        config.exact_options(), config.sampler);
    result.seed = config.sampler.seed;
    write_atomic(out_dir / "result.json", result_to_json(result, config.to_json()));
    write_atomic(out_dir / "trace.csv", trace_csv(result));
    out << summary(result) << "\nwrote " << (out_dir / "result.json").string() << "\n";
    return kExitOk;
  } catch (const SizeLimitError& e) {
    err << "error: " << e.what() << "\n";
    return kExitSizeLimit;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}

}  // namespace locshap
