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

#include "privatree/quantiles.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "privatree/errors.h"

namespace privatree {

int bin_value(double value, const BinEdges& edges) {
  return static_cast<int>(
      std::lower_bound(edges.edges.begin(), edges.edges.end(), value) -
      edges.edges.begin());
}

double private_quantile(std::span<const double> values, double lo, double hi,
                        double q, PrivacyBudget budget, RandomStream& rng) {
  if (!(lo < hi)) throw ArgumentError("quantile range needs lo < hi");
  if (!(q > 0 && q < 1)) throw ArgumentError("quantile q must be in (0, 1)");

  std::vector<double> points;
  points.reserve(values.size() + 2);
  points.push_back(lo);
  for (double v : values) points.push_back(std::clamp(v, lo, hi));
  points.push_back(hi);
  std::sort(points.begin() + 1, points.end() - 1);

  const size_t n_gaps = points.size() - 1;
  const double target_rank = q * static_cast<double>(values.size());
  size_t chosen = n_gaps;
  if (budget.is_infinite()) {
    // Limit of the mechanism: the closest-ranked gap of positive length,
    // lowest index on ties.
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < n_gaps; ++i) {
      if (points[i + 1] <= points[i]) continue;
      const double dist = std::fabs(static_cast<double>(i) - target_rank);
      if (dist < best) {
        best = dist;
        chosen = i;
      }
    }
  } else {
    const double eps = budget.epsilon();
    std::vector<double> log_weights(n_gaps,
                                    -std::numeric_limits<double>::infinity());
    double max_log = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < n_gaps; ++i) {
      const double length = points[i + 1] - points[i];
      if (length <= 0) continue;
      log_weights[i] =
          std::log(length) -
          eps * std::fabs(static_cast<double>(i) - target_rank) / 2.0;
      max_log = std::max(max_log, log_weights[i]);
    }
    std::vector<double> cumulative(n_gaps);
    double total = 0;
    for (size_t i = 0; i < n_gaps; ++i) {
      total += std::exp(log_weights[i] - max_log);
      cumulative[i] = total;
    }
    const double target = rng.Uniform() * total;
    chosen = std::upper_bound(cumulative.begin(), cumulative.end(), target) -
             cumulative.begin();
    // Guard against rounding at the top end: take the last positive gap.
    while (chosen >= n_gaps || points[chosen + 1] <= points[chosen]) {
      chosen = chosen == 0 ? n_gaps - 1 : chosen - 1;
    }
  }
  const double left = points[chosen];
  const double right = points[chosen + 1];
  return std::clamp(left + rng.Uniform() * (right - left), lo, hi);
}

BinEdges private_decile_edges(std::span<const double> values, double lo,
                              double hi, PrivacyBudget budget_total,
                              RandomStream& rng, PrivacyLedger* ledger,
                              int feature) {
  const PrivacyBudget per_quantile(budget_total.epsilon() / (kNumBins - 1));
  BinEdges out;
  for (int k = 0; k < kNumBins - 1; ++k) {
    const double q = (k + 1) / static_cast<double>(kNumBins);
    out.edges[k] = private_quantile(values, lo, hi, q, per_quantile, rng);
    if (ledger != nullptr) {
      ledger->Record(Phase::kQuantile, feature, per_quantile.epsilon());
    }
  }
  std::sort(out.edges.begin(), out.edges.end());
  return out;
}

}  // namespace privatree
