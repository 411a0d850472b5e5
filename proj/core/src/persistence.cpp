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

#include "sagdiv/persistence.hpp"

#include <fstream>
#include <sstream>
#include <type_traits>

#include <nlohmann/json.hpp>

#include "sagdiv/error.hpp"

namespace sagdiv {
namespace {

using json = nlohmann::json;

json to_json(const Matrix& m) {
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(m.size()));
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
  }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

json to_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Matrix matrix_from(const json& j) {
  const auto rows = j.at("rows").get<Index>();
  const auto cols = j.at("cols").get<Index>();
  const auto data = j.at("data").get<std::vector<double>>();
  if (rows < 0 || cols < 0 || static_cast<Index>(data.size()) != rows * cols) {
    throw SchemaError("matrix shape does not match its data");
  }
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j2 = 0; j2 < cols; ++j2) m(i, j2) = data[static_cast<std::size_t>(i * cols + j2)];
  }
  return m;
}

Vector vector_from(const json& j) {
  const auto data = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(data.data(), static_cast<Index>(data.size()));
}

json to_json(const KernelBlock& b) {
  return json{{"mean", to_json(b.standardizer.mean())},
              {"scale", to_json(b.standardizer.scale())},
              {"lengthscale", b.kernel.lengthscale()}};
}

KernelBlock block_from(const json& j) {
  return KernelBlock{Standardizer(vector_from(j.at("mean")), vector_from(j.at("scale"))),
                     KernelSpec(j.at("lengthscale").get<double>())};
}

json to_json(const RidgeModel& r) {
  return json{{"block", to_json(r.block)},
              {"inputs", to_json(r.inputs)},
              {"coef", to_json(r.coef)},
              {"lambda", r.lambda}};
}

RidgeModel ridge_from(const json& j) {
  return RidgeModel{block_from(j.at("block")), matrix_from(j.at("inputs")),
                    vector_from(j.at("coef")), j.at("lambda").get<double>()};
}

json to_json(const DensityRatioModel& d) {
  return json{{"x_block", to_json(d.x_block)},       {"z_block", to_json(d.z_block)},
              {"centers_x", to_json(d.centers_x)},   {"centers_z", to_json(d.centers_z)},
              {"weights", to_json(d.weights)},       {"cap", d.cap},
              {"lambda", d.lambda}};
}

DensityRatioModel ratio_from(const json& j) {
  DensityRatioModel d;
  d.x_block = block_from(j.at("x_block"));
  d.z_block = block_from(j.at("z_block"));
  d.centers_x = matrix_from(j.at("centers_x"));
  d.centers_z = matrix_from(j.at("centers_z"));
  d.weights = vector_from(j.at("weights"));
  d.cap = j.at("cap").get<double>();
  d.lambda = j.at("lambda").get<double>();
  return d;
}

json params_to_json(const FittedModel& model) {
  return std::visit(
      [](const auto& m) -> json {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, SAGDModel>) {
          return json{{"ratio", to_json(m.ratio())},
                      {"anchors", to_json(m.anchors())},
                      {"rates", to_json(m.rates())},
                      {"gradients", to_json(m.gradients())},
                      {"bound", m.bound()},
                      {"warmup", m.warmup()},
                      {"cached_x", to_json(m.cached_x())},
                      {"cached_average", to_json(m.cached_average())}};
        } else if constexpr (std::is_same_v<T, TSLSModel>) {
          return json{{"first_stage", to_json(m.first_stage)},
                      {"second_stage", to_json(m.second_stage)}};
        } else if constexpr (std::is_same_v<T, KIVModel>) {
          return json{{"x_block", to_json(m.x_block)}, {"stage1_x", to_json(m.stage1_x)},
                      {"alpha", to_json(m.alpha)},     {"lambda", m.lambda},
                      {"xi", m.xi},                    {"stage1_size", m.stage1_size},
                      {"stage2_size", m.stage2_size}};
        } else if constexpr (std::is_same_v<T, NaiveModel>) {
          return json{{"ridge", to_json(m.ridge)}};
        } else {
          return json{{"x_dim", m.x_dim}};
        }
      },
      model);
}

FittedModel params_from(Method method, const json& p) {
  switch (method) {
    case Method::SagdKernel:
    case Method::SagdRawY:
      return SAGDModel(ratio_from(p.at("ratio")), matrix_from(p.at("anchors")),
                       vector_from(p.at("rates")), vector_from(p.at("gradients")),
                       p.at("bound").get<double>(), p.at("warmup").get<Index>(),
                       matrix_from(p.at("cached_x")), vector_from(p.at("cached_average")));
    case Method::TwoSLS:
      return TSLSModel{matrix_from(p.at("first_stage")), vector_from(p.at("second_stage"))};
    case Method::KIV:
      return KIVModel{block_from(p.at("x_block")), matrix_from(p.at("stage1_x")),
                      vector_from(p.at("alpha")),  p.at("lambda").get<double>(),
                      p.at("xi").get<double>(),    p.at("stage1_size").get<Index>(),
                      p.at("stage2_size").get<Index>()};
    case Method::Naive:
      return NaiveModel{ridge_from(p.at("ridge"))};
    case Method::Zero:
      return ZeroModel{p.at("x_dim").get<Index>()};
  }
  throw SchemaError("unknown method");
}

bool matches(Method method, const FittedModel& model) {
  switch (method) {
    case Method::SagdKernel:
    case Method::SagdRawY: return std::holds_alternative<SAGDModel>(model);
    case Method::TwoSLS: return std::holds_alternative<TSLSModel>(model);
    case Method::KIV: return std::holds_alternative<KIVModel>(model);
    case Method::Naive: return std::holds_alternative<NaiveModel>(model);
    case Method::Zero: return std::holds_alternative<ZeroModel>(model);
  }
  return false;
}

}  // namespace

std::string serialize_model(const PersistedModel& model) {
  if (!matches(model.method, model.model)) throw InvalidInput("method tag does not match the model");
  const json doc{{"format", "sagdiv-model"},
                 {"version", kModelFormatVersion},
                 {"method", std::string(to_string(model.method))},
                 {"provenance",
                  {{"config_hash", model.provenance.config_hash}, {"seed", model.provenance.seed}}},
                 {"parameters", params_to_json(model.model)}};
  return doc.dump(1) + "\n";
}

PersistedModel deserialize_model(const std::string& text) {
  try {
    const json doc = json::parse(text);
    if (doc.at("format").get<std::string>() != "sagdiv-model") throw SchemaError("not a model file");
    const int version = doc.at("version").get<int>();
    if (version != kModelFormatVersion) {
      throw SchemaError("unsupported model format version " + std::to_string(version));
    }
    PersistedModel out;
    out.method = parse_method(doc.at("method").get<std::string>());
    out.provenance.config_hash = doc.at("provenance").at("config_hash").get<std::uint64_t>();
    out.provenance.seed = doc.at("provenance").at("seed").get<std::uint64_t>();
    out.model = params_from(out.method, doc.at("parameters"));
    return out;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("malformed model file: ") + e.what());
  }
}

void save_model(const PersistedModel& model, const std::filesystem::path& path) {
  const std::string text = serialize_model(model);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidInput("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw InvalidInput("failed writing '" + path.string() + "'");
}

PersistedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return deserialize_model(ss.str());
}

}  // namespace sagdiv
