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

#ifndef PRIVATREE_LEDGER_H_
#define PRIVATREE_LEDGER_H_

#include <vector>

namespace privatree {

enum class Phase { kQuantile, kNodeNumerical, kNodeCategorical, kLeaf };

// Records every mechanism invocation made while training and composes them:
//  - quantile charges compose sequentially within a feature and in parallel
//    across features;
//  - node charges compose in parallel within one depth level (sibling nodes
//    see disjoint rows) and sequentially across levels;
//  - leaf charges compose in parallel (every row reaches one leaf).
// Numerical and categorical columns are disjoint, so the total is the max of
// the two tracks.
class PrivacyLedger {
 public:
  struct Charge {
    Phase phase;
    int scope;  // feature for quantiles, depth level for nodes, leaf id
    double epsilon;
  };

  struct Summary {
    double quantiles = 0;
    double node_numerical = 0;
    double node_categorical = 0;
    double leaf = 0;
    int depth_used = 0;
    double numerical_total = 0;
    double categorical_total = 0;
    double total = 0;
  };

  void Record(Phase phase, int scope, double epsilon) {
    charges_.push_back({phase, scope, epsilon});
  }

  const std::vector<Charge>& charges() const { return charges_; }
  size_t CountOf(Phase phase) const;
  Summary Summarize() const;

 private:
  std::vector<Charge> charges_;
};

}  // namespace privatree

#endif  // PRIVATREE_LEDGER_H_
