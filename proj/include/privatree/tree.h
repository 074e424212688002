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

#ifndef PRIVATREE_TREE_H_
#define PRIVATREE_TREE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "privatree/budget.h"
#include "privatree/dataset.h"
#include "privatree/ledger.h"
#include "privatree/quantiles.h"

namespace privatree {

// `value <= threshold` goes left.
struct NumericalRule {
  int feature;
  double threshold;

  bool operator==(const NumericalRule&) const = default;
};

// Categories in `left_set` (sorted) go left; every other category, including
// ones never seen during training, goes right.
struct CategoricalRule {
  int feature;
  std::vector<int> left_set;

  bool operator==(const CategoricalRule&) const = default;
};

using SplitRule = std::variant<NumericalRule, CategoricalRule>;

int RuleFeature(const SplitRule& rule);
bool GoesLeft(const SplitRule& rule, std::span<const double> row);

// Internal nodes carry a rule and two child indices; leaves carry a class.
struct Node {
  std::optional<SplitRule> rule;
  int left = -1;
  int right = -1;
  int label = -1;

  bool is_leaf() const { return !rule.has_value(); }
  bool operator==(const Node&) const = default;
};

enum class TrainerKind { kPrivaTree, kRandomSplits };

std::string TrainerName(TrainerKind kind);
TrainerKind TrainerFromName(const std::string& name);

struct ModelMetadata {
  TrainerKind trainer = TrainerKind::kPrivaTree;
  double epsilon = 0;
  int max_depth = 0;
  double max_leaf_error = 0.01;
  uint64_t seed = 0;
  std::string schema_hash;
  int n_classes = 2;
  // Category count per feature; 0 marks a numerical feature.
  std::vector<int> category_counts;
  // Bin edges per feature, set for numerical features of PrivaTree models.
  std::vector<std::optional<BinEdges>> bin_edges;
  BudgetPlan budget;

  bool operator==(const ModelMetadata&) const = default;
};

// Binary tree stored as a flat node array, root at index 0. Immutable after
// fitting; concurrent Predict calls are safe.
class TreeModel {
 public:
  TreeModel() = default;
  TreeModel(ModelMetadata meta, std::vector<Node> nodes);

  const ModelMetadata& metadata() const { return meta_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  size_t n_features() const { return meta_.category_counts.size(); }

  // Number of internal nodes on the longest root-to-leaf path.
  int Depth() const;
  int LeafCount() const;

  // Throws ArgumentError for rows of the wrong width, non-finite numerical
  // cells or invalid category indices.
  int Predict(std::span<const double> row) const;

  // Checks structural invariants (child links, leaf classes, depth bound).
  void Validate() const;

  bool operator==(const TreeModel&) const = default;

 private:
  ModelMetadata meta_;
  std::vector<Node> nodes_;
};

struct FitOptions {
  // Only stop at the depth limit; skips the raw-data stopping tests (at most
  // one row, single class).
  bool always_recurse = false;
};

// Private tree training: allocate the budget, privately bin numerical
// features at their deciles, then grow the tree greedily on noisy class
// histograms and label leaves with permute-and-flip over the exact class
// counts (sensitivity 1). `params.n_samples` and `params.n_classes` must match
// the dataset. Mechanism invocations are recorded in `ledger` when given.
TreeModel fit(const Dataset& data, const TrainerParams& params, uint64_t seed,
              const FitOptions& options = {}, PrivacyLedger* ledger = nullptr);

// Comparator: full depth-d tree of data-independent random rules (uniform
// feature, uniform threshold over the public range or uniform non-trivial
// category subset); the whole budget labels the leaves.
TreeModel fit_random_baseline(const Dataset& data, const TrainerParams& params,
                              uint64_t seed, PrivacyLedger* ledger = nullptr);

TreeModel Train(TrainerKind kind, const Dataset& data,
                const TrainerParams& params, uint64_t seed,
                const FitOptions& options = {},
                PrivacyLedger* ledger = nullptr);

// TrainerParams with n_samples and n_classes taken from the dataset.
TrainerParams ParamsFor(const Dataset& data, double epsilon, int max_depth,
                        double max_leaf_error = 0.01);

inline int predict(const TreeModel& model, std::span<const double> row) {
  return model.Predict(row);
}

}  // namespace privatree

#endif  // PRIVATREE_TREE_H_
