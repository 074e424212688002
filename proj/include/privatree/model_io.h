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

#ifndef PRIVATREE_MODEL_IO_H_
#define PRIVATREE_MODEL_IO_H_

#include <string>

#include "json.hpp"
#include "privatree/tree.h"

namespace privatree {

inline constexpr int kModelFormatVersion = 1;

// Model file layout:
//   {format_version, params, schema_hash, n_classes, category_counts,
//    bin_edges, budget, root}
// where root is a recursive {kind: "num"|"cat"|"leaf", feature, threshold,
// left_set, class, left, right} object. An infinite epsilon is written as the
// string "inf".
nlohmann::json ModelToJson(const TreeModel& model);
TreeModel ModelFromJson(const nlohmann::json& j);

std::string serialize(const TreeModel& model);
// Throws DecodeError on malformed payloads or an unknown format_version.
TreeModel deserialize(const std::string& bytes);

void SaveModel(const TreeModel& model, const std::string& path);
TreeModel LoadModel(const std::string& path);

}  // namespace privatree

#endif  // PRIVATREE_MODEL_IO_H_
