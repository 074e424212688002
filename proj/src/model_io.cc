// Copyright 2026 The PrivaTree Authors
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

#include "privatree/model_io.h"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "privatree/errors.h"

namespace privatree {
namespace {

using nlohmann::json;

json EncodeReal(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double DecodeReal(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw DecodeError("expected a number, got \"" + s + "\"");
  }
  if (!j.is_number()) throw DecodeError("expected a number");
  return j.get<double>();
}

json EncodeNode(const std::vector<Node>& nodes, int i) {
  const Node& n = nodes[i];
  if (n.is_leaf()) return {{"kind", "leaf"}, {"class", n.label}};
  json out;
  if (const auto* num = std::get_if<NumericalRule>(&*n.rule)) {
    out = {{"kind", "num"},
           {"feature", num->feature},
           {"threshold", EncodeReal(num->threshold)}};
  } else {
    const auto& cat = std::get<CategoricalRule>(*n.rule);
    out = {{"kind", "cat"}, {"feature", cat.feature}, {"left_set", cat.left_set}};
  }
  out["left"] = EncodeNode(nodes, n.left);
  out["right"] = EncodeNode(nodes, n.right);
  return out;
}

int DecodeNode(const json& j, std::vector<Node>& nodes, int depth) {
  if (depth > 64) throw DecodeError("tree nesting too deep");
  if (!j.is_object()) throw DecodeError("node must be an object");
  const int index = static_cast<int>(nodes.size());
  nodes.emplace_back();
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "leaf") {
    nodes[index].label = j.at("class").get<int>();
    return index;
  }
  const int feature = j.at("feature").get<int>();
  if (kind == "num") {
    nodes[index].rule = NumericalRule{feature, DecodeReal(j.at("threshold"))};
  } else if (kind == "cat") {
    nodes[index].rule =
        CategoricalRule{feature, j.at("left_set").get<std::vector<int>>()};
  } else {
    throw DecodeError("unknown node kind '" + kind + "'");
  }
  const int left = DecodeNode(j.at("left"), nodes, depth + 1);
  const int right = DecodeNode(j.at("right"), nodes, depth + 1);
  nodes[index].left = left;
  nodes[index].right = right;
  return index;
}

}  // namespace

json ModelToJson(const TreeModel& model) {
  const ModelMetadata& m = model.metadata();
  json edges = json::array();
  for (const auto& e : m.bin_edges) {
    edges.push_back(e ? json(e->edges) : json(nullptr));
  }
  return {
      {"format_version", kModelFormatVersion},
      {"params",
       {{"trainer", TrainerName(m.trainer)},
        {"epsilon", EncodeReal(m.epsilon)},
        {"max_depth", m.max_depth},
        {"max_leaf_error", m.max_leaf_error},
        {"seed", m.seed}}},
      {"schema_hash", m.schema_hash},
      {"n_classes", m.n_classes},
      {"category_counts", m.category_counts},
      {"bin_edges", edges},
      {"budget",
       {{"eps_leaf", EncodeReal(m.budget.eps_leaf)},
        {"eps_node_num", EncodeReal(m.budget.eps_node_num)},
        {"eps_node_cat", EncodeReal(m.budget.eps_node_cat)},
        {"eps_quantiles", EncodeReal(m.budget.eps_quantiles)},
        {"p_star", m.budget.p_star}}},
      {"root", EncodeNode(model.nodes(), 0)},
  };
}

TreeModel ModelFromJson(const json& j) {
  try {
    if (!j.is_object()) throw DecodeError("model must be a JSON object");
    const int version = j.at("format_version").get<int>();
    if (version != kModelFormatVersion) {
      throw DecodeError("unsupported model format_version " +
                        std::to_string(version));
    }
    ModelMetadata m;
    const json& params = j.at("params");
    m.trainer = TrainerFromName(params.value("trainer", "privatree"));
    m.epsilon = DecodeReal(params.at("epsilon"));
    m.max_depth = params.at("max_depth").get<int>();
    m.max_leaf_error = params.value("max_leaf_error", 0.01);
    m.seed = params.value("seed", uint64_t{0});
    m.schema_hash = j.at("schema_hash").get<std::string>();
    m.n_classes = j.at("n_classes").get<int>();
    m.category_counts = j.at("category_counts").get<std::vector<int>>();
    m.bin_edges.resize(m.category_counts.size());
    if (j.contains("bin_edges")) {
      const json& edges = j.at("bin_edges");
      if (!edges.is_array() || edges.size() != m.category_counts.size()) {
        throw DecodeError("bin_edges must have one entry per feature");
      }
      for (size_t f = 0; f < edges.size(); ++f) {
        if (edges[f].is_null()) continue;
        const auto values = edges[f].get<std::vector<double>>();
        BinEdges be;
        if (values.size() != be.edges.size()) {
          throw DecodeError("bin_edges entries must hold 9 edges");
        }
        std::copy(values.begin(), values.end(), be.edges.begin());
        m.bin_edges[f] = be;
      }
    }
    if (j.contains("budget")) {
      const json& b = j.at("budget");
      m.budget.eps_leaf = DecodeReal(b.at("eps_leaf"));
      m.budget.eps_node_num = DecodeReal(b.at("eps_node_num"));
      m.budget.eps_node_cat = DecodeReal(b.at("eps_node_cat"));
      m.budget.eps_quantiles = DecodeReal(b.at("eps_quantiles"));
      m.budget.p_star = DecodeReal(b.at("p_star"));
    }
    std::vector<Node> nodes;
    DecodeNode(j.at("root"), nodes, 0);
    return TreeModel(std::move(m), std::move(nodes));
  } catch (const json::exception& e) {
    throw DecodeError(std::string("malformed model: ") + e.what());
  } catch (const ArgumentError& e) {
    throw DecodeError(std::string("invalid model: ") + e.what());
  }
}

std::string serialize(const TreeModel& model) {
  return ModelToJson(model).dump(2) + "\n";
}

TreeModel deserialize(const std::string& bytes) {
  json j;
  try {
    j = json::parse(bytes);
  } catch (const json::exception& e) {
    throw DecodeError(std::string("model is not valid JSON: ") + e.what());
  }
  return ModelFromJson(j);
}

void SaveModel(const TreeModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write model file '" + path + "'");
  out << serialize(model);
  if (!out) throw IoError("failed writing model file '" + path + "'");
}

TreeModel LoadModel(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return deserialize(buffer.str());
}

}  // namespace privatree
