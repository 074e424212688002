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

#ifndef PRIVATREE_BUDGET_H_
#define PRIVATREE_BUDGET_H_

#include <cstdint>

namespace privatree {

struct TrainerParams {
  double epsilon_total = 0.1;
  int max_depth = 4;
  int64_t n_samples = 1;
  int n_classes = 2;
  double max_leaf_error = 0.01;

  // Throws ArgumentError naming the offending field.
  void Validate() const;
};

// Allocation of the total budget over the private phases of training.
struct BudgetPlan {
  double eps_leaf = 0;
  double eps_node_num = 0;
  double eps_node_cat = 0;
  double eps_quantiles = 0;
  // Maximizer of the worst-case labeling error term; diagnostics only.
  double p_star = 0;

  bool operator==(const BudgetPlan&) const = default;
};

struct WorstCaseTerm {
  double value;
  double p_star;
};

// max over p in (0,1) of 2 log(1/p) (1 - (1 - (1-p)^K) / (K p)): the
// worst-case expected permute-and-flip error (times epsilon) when all but one
// of K candidates share the same utility. Throws ArgumentError if K < 2.
WorstCaseTerm pf_worst_case_error_term(int n_classes);

// Budget that keeps the expected labeling error across all 2^d leaves below
// max_leaf_error: 2^d * term / (n * max_leaf_error).
double required_leaf_budget(const TrainerParams& params);

// eps_leaf = min(eps/2, required_leaf_budget); the remainder is split evenly
// over the quantile pass and the d node levels for numerical features, and
// over d node levels for categorical ones. With d = 0 the leaf gets all of
// epsilon. With infinite epsilon every phase is noiseless.
BudgetPlan allocate_budget(const TrainerParams& params);

// Random-split comparator: everything goes to the leaves.
BudgetPlan allocate_leaf_only(const TrainerParams& params);

}  // namespace privatree

#endif  // PRIVATREE_BUDGET_H_
