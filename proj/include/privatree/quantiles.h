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

#ifndef PRIVATREE_QUANTILES_H_
#define PRIVATREE_QUANTILES_H_

#include <array>
#include <span>

#include "privatree/ledger.h"
#include "privatree/mechanisms.h"
#include "privatree/random.h"

namespace privatree {

inline constexpr int kNumBins = 10;

// The 9 interior edges splitting a numerical feature into 10 bins. Edges are
// sorted but may repeat; repeated edges leave empty bins.
struct BinEdges {
  std::array<double, kNumBins - 1> edges{};

  bool operator==(const BinEdges&) const = default;
};

// Number of edges strictly below `value`, so a value equal to edge k lands in
// bin k.
int bin_value(double value, const BinEdges& edges);

// Single-quantile exponential mechanism over the gaps between sorted, clipped
// values (padded with lo and hi). Gap i (with i values below it) is picked
// with probability proportional to length_i * exp(-eps |i - q n| / 2); the
// result is uniform inside the chosen gap. Empty input gives a uniform draw on
// [lo, hi]. Throws ArgumentError if lo >= hi or q is outside (0, 1).
double private_quantile(std::span<const double> values, double lo, double hi,
                        double q, PrivacyBudget budget, RandomStream& rng);

// Deciles q = 0.1, ..., 0.9, each at budget_total / 9 (sequential
// composition), sorted afterwards. When a ledger is given each invocation is
// recorded against `feature`.
BinEdges private_decile_edges(std::span<const double> values, double lo,
                              double hi, PrivacyBudget budget_total,
                              RandomStream& rng,
                              PrivacyLedger* ledger = nullptr,
                              int feature = 0);

}  // namespace privatree

#endif  // PRIVATREE_QUANTILES_H_
