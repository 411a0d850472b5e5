// Copyright 2026 The sagdiv Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sagdiv/config.hpp"

#include <algorithm>
#include <fstream>
#include <type_traits>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sagdiv/error.hpp"
#include "sagdiv/rng.hpp"

namespace sagdiv {
namespace {

using json = nlohmann::json;

// Collects every problem before reporting, so one run lists all bad keys.
class SchemaCheck {
 public:
  void unknown_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : obj.items()) {
      if (!ok.count(key)) problems_.push_back(where + key + " (unknown key)");
    }
  }
  void add(const std::string& problem) { problems_.push_back(problem); }
  void raise_if_any() const {
    if (problems_.empty()) return;
    std::string msg = "invalid configuration:";
    for (const auto& p : problems_) msg += "\n  " + p;
    throw SchemaError(msg);
  }

 private:
  std::vector<std::string> problems_;
};

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("configuration is not valid JSON: ") + e.what());
  }
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <typename T>
std::optional<T> get_number(const json& obj, const char* key, const std::string& where,
                            SchemaCheck& check) {
  if (!obj.contains(key)) return std::nullopt;
  const json& v = obj.at(key);
  if constexpr (std::is_floating_point_v<T>) {
    if (!v.is_number()) {
      check.add(where + key + " (expected a number)");
      return std::nullopt;
    }
  } else if constexpr (std::is_unsigned_v<T>) {
    if (!v.is_number_unsigned()) {
      check.add(where + key + " (expected a nonnegative integer)");
      return std::nullopt;
    }
  } else {
    if (!v.is_number_integer()) {
      check.add(where + key + " (expected an integer)");
      return std::nullopt;
    }
  }
  return v.get<T>();
}

std::optional<bool> get_bool(const json& obj, const char* key, const std::string& where,
                             SchemaCheck& check) {
  if (!obj.contains(key)) return std::nullopt;
  if (!obj.at(key).is_boolean()) {
    check.add(where + key + " (expected true or false)");
    return std::nullopt;
  }
  return obj.at(key).get<bool>();
}

std::optional<std::string> get_string(const json& obj, const char* key, const std::string& where,
                                      SchemaCheck& check) {
  if (!obj.contains(key)) return std::nullopt;
  if (!obj.at(key).is_string()) {
    check.add(where + key + " (expected a string)");
    return std::nullopt;
  }
  return obj.at(key).get<std::string>();
}

// Reads the method keys shared by run and fit configs into `settings`.
void read_method_settings(const json& obj, const std::string& where, MethodSettings& settings,
                          SchemaCheck& check) {
  if (auto v = get_number<Index>(obj, "warmup", where, check)) {
    if (*v < 0) check.add(where + "warmup (must be nonnegative)");
    settings.warmup = *v;
  }
  if (auto v = get_number<double>(obj, "bound", where, check)) {
    if (!(*v > 0.0)) check.add(where + "bound (must be positive)");
    settings.bound = *v;
  }
  if (auto v = get_number<double>(obj, "learning_rate", where, check)) {
    if (!(*v > 0.0)) check.add(where + "learning_rate (must be positive)");
    settings.learning_rate = *v;
  }
  if (auto v = get_number<double>(obj, "ratio_cap", where, check)) {
    if (!(*v > 0.0)) check.add(where + "ratio_cap (must be positive)");
    settings.ratio_cap = *v;
  }
  if (auto v = get_number<Index>(obj, "ratio_basis", where, check)) {
    if (*v < 1) check.add(where + "ratio_basis (must be positive)");
    settings.ratio_basis = *v;
  }
  if (auto v = get_number<int>(obj, "folds", where, check)) {
    if (*v < 2) check.add(where + "folds (must be at least 2)");
    settings.folds = *v;
  }
}

std::optional<Method> read_method_name(const std::string& name, const std::string& where,
                                       SchemaCheck& check) {
  try {
    return parse_method(name);
  } catch (const InvalidInput&) {
    check.add(where + " (unknown method '" + name + "')");
    return std::nullopt;
  }
}

std::uint64_t canonical_hash(const json& doc) { return fnv1a64(doc.dump()); }

}  // namespace

RunOptions RunConfig::run_options() const {
  RunOptions opts;
  opts.repetitions = repetitions;
  opts.master_seed = seed;
  opts.threads = threads;
  opts.record_timing = record_timing;
  opts.defaults.stream_ratio = stream_ratio;
  opts.overrides = overrides;
  for (auto& [method, settings] : opts.overrides) settings.stream_ratio = stream_ratio;
  opts.emit_curves = curves;
  return opts;
}

RunConfig parse_run_config(const std::string& text) {
  const json doc = parse_json(text);
  if (!doc.is_object()) throw SchemaError("invalid configuration:\n  top level must be an object");
  SchemaCheck check;
  check.unknown_keys(doc, "",
                     {"scenarios", "methods", "repetitions", "seed", "budget", "stream_ratio",
                      "test_size", "output_dir", "record_timing", "threads", "curves"});
  RunConfig cfg;
  cfg.hash = canonical_hash(doc);

  if (auto v = get_number<int>(doc, "repetitions", "", check)) {
    if (*v < 1) check.add("repetitions (must be at least 1)");
    cfg.repetitions = *v;
  }
  if (auto v = get_number<std::uint64_t>(doc, "seed", "", check)) cfg.seed = *v;
  if (auto v = get_number<Index>(doc, "stream_ratio", "", check)) {
    if (*v < 1) check.add("stream_ratio (must be at least 1)");
    cfg.stream_ratio = *v;
  }
  if (auto v = get_number<Index>(doc, "test_size", "", check)) {
    if (*v < 1) check.add("test_size (must be positive)");
    cfg.test_size = *v;
  }
  if (auto v = get_string(doc, "output_dir", "", check)) cfg.output_dir = *v;
  if (auto v = get_bool(doc, "record_timing", "", check)) cfg.record_timing = *v;
  if (auto v = get_number<int>(doc, "threads", "", check)) {
    if (*v < 1) check.add("threads (must be at least 1)");
    cfg.threads = *v;
  }
  if (auto v = get_bool(doc, "curves", "", check)) cfg.curves = *v;

  if (doc.contains("budget")) {
    const json& b = doc.at("budget");
    if (b.is_string() && b.get<std::string>() == "paper") {
      cfg.budget_name = "paper";
      cfg.budget = kPaperBudget;
    } else if (b.is_string() && b.get<std::string>() == "half") {
      cfg.budget_name = "half";
      cfg.budget = kHalfBudget;
    } else if (b.is_number_integer() && b.get<long long>() > 0) {
      cfg.budget = b.get<Index>();
      cfg.budget_name = std::to_string(cfg.budget);
    } else {
      check.add("budget (expected \"paper\", \"half\" or a positive integer)");
    }
  }
  if (cfg.budget < 3 + cfg.stream_ratio) check.add("budget (too small for the stream ratio)");

  if (!doc.contains("scenarios") || !doc.at("scenarios").is_array() || doc.at("scenarios").empty()) {
    check.add("scenarios (required non-empty list)");
  } else {
    std::size_t i = 0;
    for (const json& s : doc.at("scenarios")) {
      const std::string where = "scenarios[" + std::to_string(i++) + "].";
      if (!s.is_object()) {
        check.add(where.substr(0, where.size() - 1) + " (expected an object)");
        continue;
      }
      check.unknown_keys(s, where, {"outcome", "response", "beta"});
      ScenarioSpec spec;
      try {
        if (auto v = get_string(s, "outcome", where, check)) spec.outcome = parse_outcome(*v);
        if (auto v = get_string(s, "response", where, check)) {
          spec.response = parse_response(*v);
        } else {
          check.add(where + "response (required)");
        }
      } catch (const InvalidInput& e) {
        check.add(where + " (" + e.what() + ")");
      }
      if (auto v = get_number<double>(s, "beta", where, check)) {
        if (!(*v > 0.0)) check.add(where + "beta (must be positive)");
        spec.beta = *v;
      }
      if (spec.outcome == OutcomeKind::Binary && spec.response != Response::Linear &&
          spec.response != Response::Sin) {
        check.add(where + "response (binary outcomes support only linear and sin)");
      }
      cfg.scenarios.push_back(spec);
    }
  }

  if (!doc.contains("methods") || !doc.at("methods").is_array() || doc.at("methods").empty()) {
    check.add("methods (required non-empty list)");
  } else {
    std::size_t i = 0;
    for (const json& m : doc.at("methods")) {
      const std::string where = "methods[" + std::to_string(i++) + "]";
      std::optional<Method> method;
      if (m.is_string()) {
        method = read_method_name(m.get<std::string>(), where, check);
      } else if (m.is_object()) {
        check.unknown_keys(m, where + ".",
                           {"name", "warmup", "bound", "learning_rate", "ratio_cap",
                            "ratio_basis", "folds"});
        if (auto name = get_string(m, "name", where + ".", check)) {
          method = read_method_name(*name, where, check);
        } else {
          check.add(where + ".name (required)");
        }
        if (method) {
          MethodSettings settings;
          read_method_settings(m, where + ".", settings, check);
          cfg.overrides[*method] = settings;
        }
      } else {
        check.add(where + " (expected a name or an object)");
      }
      if (method) {
        if (std::find(cfg.methods.begin(), cfg.methods.end(), *method) != cfg.methods.end()) {
          check.add(where + " (duplicate method)");
        } else {
          cfg.methods.push_back(*method);
        }
      }
    }
  }
  check.raise_if_any();

  const SampleSizes sizes = SampleSizes::from_budget(cfg.budget, cfg.stream_ratio, cfg.test_size);
  for (auto& s : cfg.scenarios) s.sizes = sizes;
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  return parse_run_config(read_text(path));
}

FitConfig parse_fit_config(const std::string& text) {
  const json doc = parse_json(text);
  if (!doc.is_object()) throw SchemaError("invalid configuration:\n  top level must be an object");
  SchemaCheck check;
  check.unknown_keys(doc, "", {"method", "loss", "seed"});
  FitConfig cfg;
  cfg.hash = canonical_hash(doc);
  if (auto v = get_number<std::uint64_t>(doc, "seed", "", check)) cfg.seed = *v;

  if (doc.contains("method")) {
    const json& m = doc.at("method");
    if (m.is_string()) {
      if (auto method = read_method_name(m.get<std::string>(), "method", check)) cfg.method = *method;
    } else if (m.is_object()) {
      check.unknown_keys(m, "method.",
                         {"name", "warmup", "bound", "learning_rate", "ratio_cap", "ratio_basis",
                          "folds", "stream_ratio"});
      if (auto name = get_string(m, "name", "method.", check)) {
        if (auto method = read_method_name(*name, "method", check)) cfg.method = *method;
      } else {
        check.add("method.name (required)");
      }
      read_method_settings(m, "method.", cfg.settings, check);
      if (auto v = get_number<Index>(m, "stream_ratio", "method.", check)) {
        if (*v < 1) check.add("method.stream_ratio (must be at least 1)");
        cfg.settings.stream_ratio = *v;
      }
    } else {
      check.add("method (expected a name or an object)");
    }
  }

  if (doc.contains("loss")) {
    const json& l = doc.at("loss");
    if (!l.is_object()) {
      check.add("loss (expected an object)");
    } else {
      check.unknown_keys(l, "loss.", {"kind", "beta"});
      const auto kind = get_string(l, "kind", "loss.", check).value_or("quadratic");
      const auto beta = get_number<double>(l, "beta", "loss.", check);
      if (kind == "quadratic") {
        if (beta) check.add("loss.beta (only valid for the logistic loss)");
      } else if (kind == "logistic") {
        const double b = beta.value_or(ScenarioSpec{}.beta);
        if (!(b > 0.0)) {
          check.add("loss.beta (must be positive)");
        } else {
          cfg.loss = LossSpec::logistic_bce(b);
        }
      } else {
        check.add("loss.kind (expected \"quadratic\" or \"logistic\")");
      }
    }
  }
  check.raise_if_any();
  return cfg;
}

FitConfig load_fit_config(const std::filesystem::path& path) {
  return parse_fit_config(read_text(path));
}

}  // namespace sagdiv
