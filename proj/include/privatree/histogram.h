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

#ifndef PRIVATREE_HISTOGRAM_H_
#define PRIVATREE_HISTOGRAM_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "privatree/dataset.h"
#include "privatree/mechanisms.h"
#include "privatree/quantiles.h"
#include "privatree/random.h"

namespace privatree {

// Per-(feature, bin, class) counts for one tree node. Numerical features have
// kNumBins bins, categorical features one bin per category. Cells hold noisy
// counts and may be negative.
class NoisyHistogram {
 public:
  NoisyHistogram(const DatasetSchema& schema);

  int n_classes() const { return n_classes_; }
  size_t n_features() const { return bins_.size(); }
  int n_bins(size_t feature) const { return bins_[feature]; }

  std::span<int64_t> cell(size_t feature, int bin) {
    return {counts_.data() + offsets_[feature] + bin * n_classes_,
            static_cast<size_t>(n_classes_)};
  }
  std::span<const int64_t> cell(size_t feature, int bin) const {
    return {counts_.data() + offsets_[feature] + bin * n_classes_,
            static_cast<size_t>(n_classes_)};
  }

 private:
  int n_classes_;
  std::vector<int> bins_;
  std::vector<size_t> offsets_;
  std::vector<int64_t> counts_;
};

// Counts the given rows per (feature, bin, class) and adds independent
// two-sided geometric noise to every cell: eps_num for numerical features,
// eps_cat for categorical ones. `edges` holds one entry per feature (set for
// numerical features). Exact counts are not retained.
NoisyHistogram noisy_class_histogram(
    const Dataset& data, std::span<const size_t> rows,
    std::span<const std::optional<BinEdges>> edges, PrivacyBudget eps_num,
    PrivacyBudget eps_cat, RandomStream& rng);

}  // namespace privatree

#endif  // PRIVATREE_HISTOGRAM_H_
