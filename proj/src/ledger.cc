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

#include "privatree/ledger.h"

#include <algorithm>
#include <map>

namespace privatree {

size_t PrivacyLedger::CountOf(Phase phase) const {
  return std::count_if(charges_.begin(), charges_.end(),
                       [phase](const Charge& c) { return c.phase == phase; });
}

PrivacyLedger::Summary PrivacyLedger::Summarize() const {
  std::map<int, double> per_feature;
  std::map<int, double> num_levels;
  std::map<int, double> cat_levels;
  Summary s;
  for (const Charge& c : charges_) {
    switch (c.phase) {
      case Phase::kQuantile:
        per_feature[c.scope] += c.epsilon;
        break;
      case Phase::kNodeNumerical:
        num_levels[c.scope] = std::max(num_levels[c.scope], c.epsilon);
        break;
      case Phase::kNodeCategorical:
        cat_levels[c.scope] = std::max(cat_levels[c.scope], c.epsilon);
        break;
      case Phase::kLeaf:
        s.leaf = std::max(s.leaf, c.epsilon);
        break;
    }
  }
  for (const auto& [feature, eps] : per_feature) {
    s.quantiles = std::max(s.quantiles, eps);
  }
  for (const auto& [level, eps] : num_levels) s.node_numerical += eps;
  for (const auto& [level, eps] : cat_levels) s.node_categorical += eps;
  int levels = 0;
  for (const auto& [level, eps] : num_levels) levels = std::max(levels, level + 1);
  for (const auto& [level, eps] : cat_levels) levels = std::max(levels, level + 1);
  s.depth_used = levels;
  s.numerical_total = s.quantiles + s.node_numerical + s.leaf;
  s.categorical_total = s.node_categorical + s.leaf;
  s.total = std::max(s.numerical_total, s.categorical_total);
  return s;
}

}  // namespace privatree
