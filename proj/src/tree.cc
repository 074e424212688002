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

#include "privatree/tree.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "privatree/errors.h"
#include "privatree/histogram.h"
#include "privatree/mechanisms.h"
#include "privatree/split.h"

namespace privatree {
namespace {

// Sub-stream tags.
constexpr uint64_t kQuantileStream = 0x51;
constexpr uint64_t kTreeStream = 0x7e;
constexpr uint64_t kSkeletonStream = 0x5c;
constexpr uint64_t kLeafStream = 0x1f;

std::vector<int64_t> ClassCounts(const Dataset& data,
                                 std::span<const size_t> rows) {
  std::vector<int64_t> counts(data.n_classes(), 0);
  for (size_t i : rows) ++counts[data.label(i)];
  return counts;
}

int LabelLeaf(const Dataset& data, std::span<const size_t> rows,
              PrivacyBudget budget, RandomStream& rng) {
  const auto counts = ClassCounts(data, rows);
  const UtilityVector utilities(std::vector<double>(counts.begin(), counts.end()),
                                1.0);
  return static_cast<int>(permute_and_flip(utilities, budget, rng));
}

std::pair<std::vector<size_t>, std::vector<size_t>> Partition(
    const Dataset& data, std::span<const size_t> rows, const SplitRule& rule) {
  std::pair<std::vector<size_t>, std::vector<size_t>> out;
  for (size_t i : rows) {
    (GoesLeft(rule, data.row(i)) ? out.first : out.second).push_back(i);
  }
  return out;
}

ModelMetadata BaseMetadata(const Dataset& data, const TrainerParams& params,
                           uint64_t seed, TrainerKind kind) {
  ModelMetadata meta;
  meta.trainer = kind;
  meta.epsilon = params.epsilon_total;
  meta.max_depth = params.max_depth;
  meta.max_leaf_error = params.max_leaf_error;
  meta.seed = seed;
  meta.schema_hash = data.schema().Hash();
  meta.n_classes = data.n_classes();
  for (const FeatureSpec& f : data.schema().features) {
    meta.category_counts.push_back(
        f.is_numerical() ? 0 : static_cast<int>(f.categories.size()));
  }
  meta.bin_edges.resize(data.n_features());
  return meta;
}

void CheckInputs(const Dataset& data, const TrainerParams& params) {
  params.Validate();
  if (data.n_rows() == 0) throw ArgumentError("cannot train on zero rows");
  if (params.n_samples != static_cast<int64_t>(data.n_rows())) {
    throw ArgumentError("params.n_samples does not match the dataset");
  }
  if (params.n_classes != data.n_classes()) {
    throw ArgumentError("params.n_classes does not match the schema");
  }
}

class PrivaTreeBuilder {
 public:
  PrivaTreeBuilder(const Dataset& data, const BudgetPlan& plan,
                   const std::vector<std::optional<BinEdges>>& edges,
                   const FitOptions& options, uint64_t seed,
                   PrivacyLedger* ledger)
      : data_(data),
        plan_(plan),
        edges_(edges),
        options_(options),
        rng_(RandomStream::Derive(seed, kTreeStream)),
        ledger_(ledger) {}

  std::vector<Node> Build(int max_depth) {
    std::vector<size_t> rows(data_.n_rows());
    std::iota(rows.begin(), rows.end(), size_t{0});
    Grow(rows, max_depth, 0);
    return std::move(nodes_);
  }

 private:
  bool ShouldStop(std::span<const size_t> rows, int depth_left) const {
    if (depth_left == 0) return true;
    if (options_.always_recurse) return false;
    if (rows.size() <= 1) return true;
    const int first = data_.label(rows[0]);
    return std::all_of(rows.begin(), rows.end(),
                       [&](size_t i) { return data_.label(i) == first; });
  }

  int MakeLeaf(std::span<const size_t> rows, int index) {
    nodes_[index].label =
        LabelLeaf(data_, rows, PrivacyBudget(plan_.eps_leaf), rng_);
    if (ledger_ != nullptr) {
      ledger_->Record(Phase::kLeaf, leaf_count_, plan_.eps_leaf);
    }
    ++leaf_count_;
    return index;
  }

  std::optional<SplitRule> ChooseSplit(std::span<const size_t> rows,
                                       int level) {
    const DatasetSchema& schema = data_.schema();
    const NoisyHistogram hist = noisy_class_histogram(
        data_, rows, edges_, PrivacyBudget(plan_.eps_node_num),
        PrivacyBudget(plan_.eps_node_cat), rng_);
    if (ledger_ != nullptr) {
      if (schema.HasNumerical()) {
        ledger_->Record(Phase::kNodeNumerical, level, plan_.eps_node_num);
      }
      if (schema.HasCategorical()) {
        ledger_->Record(Phase::kNodeCategorical, level, plan_.eps_node_cat);
      }
    }
    std::optional<SplitRule> best;
    double best_gini = 0;
    for (size_t j = 0; j < schema.n_features(); ++j) {
      const FeatureSpec& f = schema.features[j];
      std::optional<SplitRule> rule;
      double gini = 0;
      if (f.is_numerical()) {
        const NumericalSplit s = best_numerical_split(hist, j);
        rule = NumericalRule{static_cast<int>(j), edges_[j]->edges[s.boundary]};
        gini = s.gini;
      } else {
        std::vector<int> order(f.categories.size());
        if (schema.n_classes() == 2) {
          order = order_categories_binary(hist, j);
        } else {
          std::iota(order.begin(), order.end(), 0);
        }
        auto s = best_categorical_split(hist, j, order);
        if (!s) continue;
        rule = CategoricalRule{static_cast<int>(j), std::move(s->left_set)};
        gini = s->gini;
      }
      if (!best || gini < best_gini - kGiniTieTolerance) {
        best = std::move(rule);
        best_gini = gini;
      }
    }
    return best;
  }

  int Grow(std::span<const size_t> rows, int depth_left, int level) {
    const int index = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    if (ShouldStop(rows, depth_left)) return MakeLeaf(rows, index);
    std::optional<SplitRule> rule = ChooseSplit(rows, level);
    if (!rule) return MakeLeaf(rows, index);
    auto [left_rows, right_rows] = Partition(data_, rows, *rule);
    nodes_[index].rule = std::move(rule);
    const int left = Grow(left_rows, depth_left - 1, level + 1);
    const int right = Grow(right_rows, depth_left - 1, level + 1);
    nodes_[index].left = left;
    nodes_[index].right = right;
    return index;
  }

  const Dataset& data_;
  const BudgetPlan& plan_;
  const std::vector<std::optional<BinEdges>>& edges_;
  FitOptions options_;
  RandomStream rng_;
  PrivacyLedger* ledger_;
  std::vector<Node> nodes_;
  int leaf_count_ = 0;
};

class RandomTreeBuilder {
 public:
  RandomTreeBuilder(const Dataset& data, uint64_t seed)
      : data_(data), skeleton_rng_(RandomStream::Derive(seed, kSkeletonStream)) {
    for (size_t j = 0; j < data.n_features(); ++j) {
      const FeatureSpec& f = data.schema().features[j];
      if (f.is_numerical() || f.categories.size() >= 2) {
        splittable_.push_back(static_cast<int>(j));
      }
    }
  }

  // Draws the rule skeleton without looking at any row.
  std::vector<Node> Skeleton(int max_depth) {
    Grow(max_depth);
    return std::move(nodes_);
  }

 private:
  SplitRule RandomRule() {
    const int j = splittable_[skeleton_rng_.UniformInt(splittable_.size())];
    const FeatureSpec& f = data_.schema().features[j];
    if (f.is_numerical()) {
      return NumericalRule{j, f.lo + skeleton_rng_.Uniform() * (f.hi - f.lo)};
    }
    const size_t n = f.categories.size();
    std::vector<int> left;
    // Uniform over the 2^n - 2 non-trivial subsets.
    while (left.empty() || left.size() == n) {
      left.clear();
      for (size_t c = 0; c < n; ++c) {
        if (skeleton_rng_.Bernoulli(0.5)) left.push_back(static_cast<int>(c));
      }
    }
    return CategoricalRule{j, std::move(left)};
  }

  int Grow(int depth_left) {
    const int index = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    if (depth_left == 0 || splittable_.empty()) return index;
    nodes_[index].rule = RandomRule();
    const int left = Grow(depth_left - 1);
    const int right = Grow(depth_left - 1);
    nodes_[index].left = left;
    nodes_[index].right = right;
    return index;
  }

  const Dataset& data_;
  RandomStream skeleton_rng_;
  std::vector<int> splittable_;
  std::vector<Node> nodes_;
};

}  // namespace

int RuleFeature(const SplitRule& rule) {
  return std::visit([](const auto& r) { return r.feature; }, rule);
}

bool GoesLeft(const SplitRule& rule, std::span<const double> row) {
  if (const auto* num = std::get_if<NumericalRule>(&rule)) {
    return row[num->feature] <= num->threshold;
  }
  const auto& cat = std::get<CategoricalRule>(rule);
  return std::binary_search(cat.left_set.begin(), cat.left_set.end(),
                            static_cast<int>(row[cat.feature]));
}

std::string TrainerName(TrainerKind kind) {
  return kind == TrainerKind::kPrivaTree ? "privatree" : "random";
}

TrainerKind TrainerFromName(const std::string& name) {
  if (name == "privatree") return TrainerKind::kPrivaTree;
  if (name == "random") return TrainerKind::kRandomSplits;
  throw ArgumentError("unknown trainer '" + name + "'");
}

TreeModel::TreeModel(ModelMetadata meta, std::vector<Node> nodes)
    : meta_(std::move(meta)), nodes_(std::move(nodes)) {
  Validate();
}

int TreeModel::Depth() const {
  std::vector<int> depth(nodes_.size(), 0);
  int deepest = 0;
  // Children always follow their parent in the array.
  for (size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].is_leaf()) {
      deepest = std::max(deepest, depth[i]);
      continue;
    }
    depth[nodes_[i].left] = depth[i] + 1;
    depth[nodes_[i].right] = depth[i] + 1;
  }
  return deepest;
}

int TreeModel::LeafCount() const {
  return static_cast<int>(std::count_if(
      nodes_.begin(), nodes_.end(), [](const Node& n) { return n.is_leaf(); }));
}

void TreeModel::Validate() const {
  if (nodes_.empty()) throw ArgumentError("model has no nodes");
  if (meta_.bin_edges.size() != meta_.category_counts.size()) {
    throw ArgumentError("model bin_edges must have one entry per feature");
  }
  std::vector<int> parents(nodes_.size(), 0);
  for (size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    if (n.is_leaf()) {
      if (n.label < 0 || n.label >= meta_.n_classes) {
        throw ArgumentError("leaf " + std::to_string(i) +
                            " has class outside [0, K)");
      }
      continue;
    }
    const int feature = RuleFeature(*n.rule);
    if (feature < 0 || feature >= static_cast<int>(n_features())) {
      throw ArgumentError("node " + std::to_string(i) + " splits on feature " +
                          std::to_string(feature) + " which does not exist");
    }
    const int categories = meta_.category_counts[feature];
    if (const auto* cat = std::get_if<CategoricalRule>(&*n.rule)) {
      if (categories == 0) {
        throw ArgumentError("categorical rule on a numerical feature");
      }
      if (cat->left_set.empty() ||
          static_cast<int>(cat->left_set.size()) >= categories ||
          !std::is_sorted(cat->left_set.begin(), cat->left_set.end()) ||
          cat->left_set.front() < 0 || cat->left_set.back() >= categories ||
          std::adjacent_find(cat->left_set.begin(), cat->left_set.end()) !=
              cat->left_set.end()) {
        throw ArgumentError("left_set must be a sorted, non-empty proper "
                            "subset of the categories");
      }
    } else if (categories != 0) {
      throw ArgumentError("numerical rule on a categorical feature");
    }
    for (int child : {n.left, n.right}) {
      if (child <= static_cast<int>(i) ||
          child >= static_cast<int>(nodes_.size())) {
        throw ArgumentError("node " + std::to_string(i) +
                            " has an invalid child index");
      }
      ++parents[child];
    }
  }
  for (size_t i = 1; i < nodes_.size(); ++i) {
    if (parents[i] != 1) throw ArgumentError("node links do not form a tree");
  }
  if (Depth() > meta_.max_depth) {
    throw ArgumentError("tree is deeper than its max_depth");
  }
}

int TreeModel::Predict(std::span<const double> row) const {
  if (row.size() != n_features()) {
    throw ArgumentError("row has " + std::to_string(row.size()) +
                        " cells, model expects " +
                        std::to_string(n_features()));
  }
  for (size_t j = 0; j < row.size(); ++j) {
    const double v = row[j];
    const int categories = meta_.category_counts[j];
    if (categories == 0 ? !std::isfinite(v)
                        : !(v >= 0 && v < categories && v == std::floor(v))) {
      throw ArgumentError("row cell " + std::to_string(j) + " is malformed");
    }
  }
  int i = 0;
  while (!nodes_[i].is_leaf()) {
    i = GoesLeft(*nodes_[i].rule, row) ? nodes_[i].left : nodes_[i].right;
  }
  return nodes_[i].label;
}

TrainerParams ParamsFor(const Dataset& data, double epsilon, int max_depth,
                        double max_leaf_error) {
  TrainerParams p;
  p.epsilon_total = epsilon;
  p.max_depth = max_depth;
  p.n_samples = static_cast<int64_t>(data.n_rows());
  p.n_classes = data.n_classes();
  p.max_leaf_error = max_leaf_error;
  return p;
}

TreeModel fit(const Dataset& data, const TrainerParams& params, uint64_t seed,
              const FitOptions& options, PrivacyLedger* ledger) {
  CheckInputs(data, params);
  ModelMetadata meta =
      BaseMetadata(data, params, seed, TrainerKind::kPrivaTree);
  meta.budget = allocate_budget(params);
  if (params.max_depth > 0) {
    const PrivacyBudget quantile_budget(meta.budget.eps_quantiles);
    for (size_t j = 0; j < data.n_features(); ++j) {
      const FeatureSpec& f = data.schema().features[j];
      if (!f.is_numerical()) continue;
      // Per-feature stream: edges of feature j depend on column j only.
      RandomStream rng = RandomStream::Derive(seed, kQuantileStream, j);
      meta.bin_edges[j] =
          private_decile_edges(data.Column(j), f.lo, f.hi, quantile_budget, rng,
                               ledger, static_cast<int>(j));
    }
  }
  PrivaTreeBuilder builder(data, meta.budget, meta.bin_edges, options, seed,
                           ledger);
  std::vector<Node> nodes = builder.Build(params.max_depth);
  return TreeModel(std::move(meta), std::move(nodes));
}

TreeModel fit_random_baseline(const Dataset& data, const TrainerParams& params,
                              uint64_t seed, PrivacyLedger* ledger) {
  CheckInputs(data, params);
  ModelMetadata meta =
      BaseMetadata(data, params, seed, TrainerKind::kRandomSplits);
  meta.budget = allocate_leaf_only(params);
  std::vector<Node> nodes =
      RandomTreeBuilder(data, seed).Skeleton(params.max_depth);

  // Route every row to its leaf, then label leaves in node order.
  std::vector<std::vector<size_t>> reaching(nodes.size());
  for (size_t i = 0; i < data.n_rows(); ++i) {
    int n = 0;
    while (!nodes[n].is_leaf()) {
      n = GoesLeft(*nodes[n].rule, data.row(i)) ? nodes[n].left
                                                : nodes[n].right;
    }
    reaching[n].push_back(i);
  }
  RandomStream leaf_rng = RandomStream::Derive(seed, kLeafStream);
  const PrivacyBudget leaf_budget(meta.budget.eps_leaf);
  int leaf_id = 0;
  for (size_t n = 0; n < nodes.size(); ++n) {
    if (!nodes[n].is_leaf()) continue;
    nodes[n].label = LabelLeaf(data, reaching[n], leaf_budget, leaf_rng);
    if (ledger != nullptr) {
      ledger->Record(Phase::kLeaf, leaf_id++, meta.budget.eps_leaf);
    }
  }
  return TreeModel(std::move(meta), std::move(nodes));
}

TreeModel Train(TrainerKind kind, const Dataset& data,
                const TrainerParams& params, uint64_t seed,
                const FitOptions& options, PrivacyLedger* ledger) {
  return kind == TrainerKind::kPrivaTree
             ? fit(data, params, seed, options, ledger)
             : fit_random_baseline(data, params, seed, ledger);
}

}  // namespace privatree
