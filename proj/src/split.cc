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

#include "privatree/split.h"

#include <algorithm>
#include <numeric>

#include "privatree/errors.h"

namespace privatree {
namespace {

double Clamped(int64_t count) {
  return count > 0 ? static_cast<double>(count) : 0.0;
}

// Sum over a side of (n_side - sum_k n_k^2 / n_side).
double SideImpurityMass(std::span<const double> counts, double& total) {
  total = 0;
  double squares = 0;
  for (double c : counts) {
    const double v = std::max(c, 0.0);
    total += v;
    squares += v * v;
  }
  return total > 0 ? total - squares / total : 0.0;
}

}  // namespace

double weighted_gini(std::span<const double> left,
                     std::span<const double> right) {
  if (left.size() != right.size() || left.empty()) {
    throw ArgumentError("weighted_gini: class count vectors must match");
  }
  double n_left = 0;
  double n_right = 0;
  const double mass_left = SideImpurityMass(left, n_left);
  const double mass_right = SideImpurityMass(right, n_right);
  const double n = n_left + n_right;
  if (n <= 0) return 1.0 - 1.0 / static_cast<double>(left.size());
  return (mass_left + mass_right) / n;
}

NumericalSplit best_numerical_split(const NoisyHistogram& hist,
                                    size_t feature) {
  const size_t k = hist.n_classes();
  const int bins = hist.n_bins(feature);
  std::vector<double> total(k, 0.0);
  for (int b = 0; b < bins; ++b) {
    const auto c = hist.cell(feature, b);
    for (size_t cls = 0; cls < k; ++cls) total[cls] += Clamped(c[cls]);
  }
  std::vector<double> left(k, 0.0);
  std::vector<double> right(k);
  NumericalSplit best{0, 0.0};
  for (int b = 0; b + 1 < bins; ++b) {
    const auto c = hist.cell(feature, b);
    for (size_t cls = 0; cls < k; ++cls) {
      left[cls] += Clamped(c[cls]);
      right[cls] = total[cls] - left[cls];
    }
    const double g = weighted_gini(left, right);
    if (b == 0 || g < best.gini - kGiniTieTolerance) best = {b, g};
  }
  return best;
}

std::vector<int> order_categories_binary(const NoisyHistogram& hist,
                                         size_t feature) {
  if (hist.n_classes() != 2) {
    throw ArgumentError("category ordering by class ratio needs 2 classes");
  }
  const int n = hist.n_bins(feature);
  std::vector<double> ratio(n);
  for (int c = 0; c < n; ++c) {
    const auto cell = hist.cell(feature, c);
    const double n0 = Clamped(cell[0]);
    const double sum = n0 + Clamped(cell[1]);
    ratio[c] = sum > 0 ? n0 / sum : 0.5;
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return ratio[a] < ratio[b]; });
  return order;
}

std::optional<CategoricalSplit> best_categorical_split(
    const NoisyHistogram& hist, size_t feature, std::span<const int> ordering) {
  const int n = hist.n_bins(feature);
  if (static_cast<int>(ordering.size()) != n) {
    throw ArgumentError("category ordering has the wrong length");
  }
  if (n < 2) return std::nullopt;
  const size_t k = hist.n_classes();
  std::vector<double> total(k, 0.0);
  for (int c = 0; c < n; ++c) {
    const auto cell = hist.cell(feature, c);
    for (size_t cls = 0; cls < k; ++cls) total[cls] += Clamped(cell[cls]);
  }
  std::vector<double> left(k, 0.0);
  std::vector<double> right(k);
  int best_len = 0;
  double best_gini = 0;
  for (int len = 1; len < n; ++len) {
    const auto cell = hist.cell(feature, ordering[len - 1]);
    for (size_t cls = 0; cls < k; ++cls) {
      left[cls] += Clamped(cell[cls]);
      right[cls] = total[cls] - left[cls];
    }
    const double g = weighted_gini(left, right);
    if (len == 1 || g < best_gini - kGiniTieTolerance) {
      best_len = len;
      best_gini = g;
    }
  }
  CategoricalSplit out{{ordering.begin(), ordering.begin() + best_len},
                       best_gini};
  std::sort(out.left_set.begin(), out.left_set.end());
  return out;
}

}  // namespace privatree
