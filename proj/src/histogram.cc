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

#include "privatree/histogram.h"

#include "privatree/errors.h"

namespace privatree {

NoisyHistogram::NoisyHistogram(const DatasetSchema& schema)
    : n_classes_(schema.n_classes()) {
  size_t offset = 0;
  for (const FeatureSpec& f : schema.features) {
    const int bins =
        f.is_numerical() ? kNumBins : static_cast<int>(f.categories.size());
    bins_.push_back(bins);
    offsets_.push_back(offset);
    offset += static_cast<size_t>(bins) * n_classes_;
  }
  counts_.assign(offset, 0);
}

NoisyHistogram noisy_class_histogram(
    const Dataset& data, std::span<const size_t> rows,
    std::span<const std::optional<BinEdges>> edges, PrivacyBudget eps_num,
    PrivacyBudget eps_cat, RandomStream& rng) {
  const DatasetSchema& schema = data.schema();
  if (edges.size() != schema.n_features()) {
    throw ArgumentError("need one bin-edge entry per feature");
  }
  for (size_t j = 0; j < schema.n_features(); ++j) {
    if (schema.features[j].is_numerical() && !edges[j].has_value()) {
      throw ArgumentError("missing bin edges for numerical feature '" +
                          schema.features[j].name + "'");
    }
  }
  NoisyHistogram hist(schema);
  for (size_t i : rows) {
    const int label = data.label(i);
    for (size_t j = 0; j < schema.n_features(); ++j) {
      const double v = data.at(i, j);
      const int bin = schema.features[j].is_numerical()
                          ? bin_value(v, *edges[j])
                          : static_cast<int>(v);
      ++hist.cell(j, bin)[label];
    }
  }
  for (size_t j = 0; j < schema.n_features(); ++j) {
    const PrivacyBudget budget =
        schema.features[j].is_numerical() ? eps_num : eps_cat;
    for (int b = 0; b < hist.n_bins(j); ++b) {
      for (int64_t& count : hist.cell(j, b)) {
        count = two_sided_geometric_noise(count, budget, rng);
      }
    }
  }
  return hist;
}

}  // namespace privatree
