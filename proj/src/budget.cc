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

#include "privatree/budget.h"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <string>

#include "privatree/errors.h"

namespace privatree {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double WorstCaseObjective(double p, int k) {
  // 1 - (1-p)^K computed as -expm1(K log1p(-p)) to stay accurate for small p.
  const double hit = -std::expm1(k * std::log1p(-p));
  return 2.0 * -std::log(p) * (1.0 - hit / (k * p));
}

}  // namespace

void TrainerParams::Validate() const {
  if (!(epsilon_total > 0)) {
    throw ArgumentError("epsilon must be positive");
  }
  if (max_depth < 0 || max_depth > 30) {
    throw ArgumentError("depth must be in [0, 30], got " +
                        std::to_string(max_depth));
  }
  if (n_samples < 1) throw ArgumentError("n_samples must be positive");
  if (n_classes < 2) throw ArgumentError("n_classes must be at least 2");
  if (!(max_leaf_error > 0 && max_leaf_error <= 1)) {
    throw ArgumentError("max_leaf_error must be in (0, 1]");
  }
}

namespace {

WorstCaseTerm MaximizeWorstCase(int n_classes) {
  constexpr int kGrid = 10000;
  constexpr double kLo = 1e-6;
  constexpr double kHi = 1.0 - 1e-6;
  const double step = (kHi - kLo) / (kGrid - 1);
  int best = 0;
  double best_value = -kInf;
  for (int i = 0; i < kGrid; ++i) {
    const double v = WorstCaseObjective(kLo + i * step, n_classes);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  // Golden-section search on the grid cell pair around the best point.
  double a = kLo + std::max(best - 1, 0) * step;
  double b = kLo + std::min(best + 1, kGrid - 1) * step;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = WorstCaseObjective(c, n_classes);
  double fd = WorstCaseObjective(d, n_classes);
  while (b - a > 1e-12) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = WorstCaseObjective(c, n_classes);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = WorstCaseObjective(d, n_classes);
    }
  }
  const double p = (a + b) / 2.0;
  const double value = WorstCaseObjective(p, n_classes);
  if (value < best_value) return {best_value, kLo + best * step};
  return {value, p};
}

}  // namespace

WorstCaseTerm pf_worst_case_error_term(int n_classes) {
  if (n_classes < 2) throw ArgumentError("n_classes must be at least 2");
  // The grid search dominates allocation cost; remember results per K.
  static std::mutex mu;
  static std::map<int, WorstCaseTerm> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n_classes);
  if (it == cache.end()) {
    it = cache.emplace(n_classes, MaximizeWorstCase(n_classes)).first;
  }
  return it->second;
}

double required_leaf_budget(const TrainerParams& params) {
  params.Validate();
  const double term = pf_worst_case_error_term(params.n_classes).value;
  return std::ldexp(term, params.max_depth) /
         (static_cast<double>(params.n_samples) * params.max_leaf_error);
}

BudgetPlan allocate_budget(const TrainerParams& params) {
  params.Validate();
  BudgetPlan plan;
  plan.p_star = pf_worst_case_error_term(params.n_classes).p_star;
  const double eps = params.epsilon_total;
  if (std::isinf(eps)) {
    plan.eps_leaf = plan.eps_node_num = plan.eps_node_cat =
        plan.eps_quantiles = kInf;
    return plan;
  }
  if (params.max_depth == 0) {
    plan.eps_leaf = eps;
    return plan;
  }
  plan.eps_leaf = std::min(eps / 2.0, required_leaf_budget(params));
  const double rest = eps - plan.eps_leaf;
  plan.eps_node_num = plan.eps_quantiles = rest / (1.0 + params.max_depth);
  plan.eps_node_cat = rest / params.max_depth;
  return plan;
}

BudgetPlan allocate_leaf_only(const TrainerParams& params) {
  params.Validate();
  BudgetPlan plan;
  plan.p_star = pf_worst_case_error_term(params.n_classes).p_star;
  plan.eps_leaf = params.epsilon_total;
  return plan;
}

}  // namespace privatree
