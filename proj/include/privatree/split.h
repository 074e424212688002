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

#ifndef PRIVATREE_SPLIT_H_
#define PRIVATREE_SPLIT_H_

#include <optional>
#include <span>
#include <vector>

#include "privatree/histogram.h"

namespace privatree {

// Candidates whose impurity differs by less than this are treated as tied.
inline constexpr double kGiniTieTolerance = 1e-12;

// Weighted Gini impurity of a two-way split. Negative (noisy) counts are
// clamped to zero first; an empty side carries weight zero. If both sides are
// empty the worst value 1 - 1/K is returned so the split is never preferred.
double weighted_gini(std::span<const double> left,
                     std::span<const double> right);

struct NumericalSplit {
  int boundary;  // bins [0, boundary] go left
  double gini;
};

// Scans the 9 bin boundaries of a numerical feature; ties go to the lowest
// boundary.
NumericalSplit best_numerical_split(const NoisyHistogram& hist, size_t feature);

// Binary case: categories sorted ascending by clamped n0 / (n0 + n1), a
// zero-total category counting as 0.5, ties by category index.
std::vector<int> order_categories_binary(const NoisyHistogram& hist,
                                         size_t feature);

struct CategoricalSplit {
  std::vector<int> left_set;  // sorted category indices
  double gini;
};

// Best non-empty proper prefix of `ordering`; ties go to the shorter prefix.
// Returns nullopt for single-category features.
std::optional<CategoricalSplit> best_categorical_split(
    const NoisyHistogram& hist, size_t feature, std::span<const int> ordering);

}  // namespace privatree

#endif  // PRIVATREE_SPLIT_H_
