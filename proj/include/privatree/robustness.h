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

#ifndef PRIVATREE_ROBUSTNESS_H_
#define PRIVATREE_ROBUSTNESS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "privatree/dataset.h"
#include "privatree/evaluation.h"
#include "privatree/random.h"
#include "privatree/tree.h"

namespace privatree {

// epsilon may be +inf; then any x > 0 voids the guarantee.
struct PoisonGuaranteeQuery {
  double epsilon = 0.1;
  int64_t x = 0;
  double clean_metric = 0;

  void Validate() const;
};

// e^{-x eps} * clean, clipped to [0, 1].
double accuracy_lower_bound(const PoisonGuaranteeQuery& query);
// 1 - e^{-x eps} (1 - clean), clipped to [0, 1].
double asr_upper_bound(const PoisonGuaranteeQuery& query);
// The companion inequality for a non-positive cost J: J(D~) <= e^{x eps} J(D).
// Not clipped; J is an arbitrary non-positive cost.
double nonpositive_cost_bound(double epsilon, int64_t x, double clean_cost);

// Poisoned count for a fraction of the training split.
int64_t XFromFraction(double fraction, size_t train_size);
// Training rows left by StratifiedSplit at this test fraction.
size_t StratifiedTrainSize(const Dataset& data, double test_fraction);

struct TriggerSpec {
  // (feature index, value); categorical values are category indices.
  std::vector<std::pair<int, double>> assignments;
  int source_class = 0;
  int target_class = 1;

  void Validate(const DatasetSchema& schema) const;
  void Apply(std::span<double> row) const;

  // {"assignments": {feature name: number or category name},
  //  "source_class": name, "target_class": name}. Throws LoadError.
  static TriggerSpec FromJson(const nlohmann::json& j,
                              const DatasetSchema& schema);
  static TriggerSpec FromFile(const std::string& path,
                              const DatasetSchema& schema);
};

// Appends x triggered copies of source-class rows (sampled with replacement)
// relabeled as the target class.
Dataset poison_backdoor(const Dataset& data, const TriggerSpec& trigger,
                        int64_t x, RandomStream& rng);

// Fraction of source-class rows predicted as the target class once the
// trigger is applied.
double attack_success_rate(const TreeModel& model, const Dataset& test,
                           const TriggerSpec& trigger);

enum class Metric { kAccuracy, kAttackSuccess };

struct CurvePoint {
  int64_t x = 0;
  double value = 0;
  double stderr_ = 0;
};

struct RobustnessReport {
  Metric metric = Metric::kAccuracy;
  double epsilon = 0;
  size_t train_size = 0;
  double clean_metric_mean = 0;
  double clean_metric_stderr = 0;
  std::vector<CurvePoint> guarantee_curve;  // stderr_ unused
  std::optional<std::vector<CurvePoint>> empirical_curve;
  int n_trials = 0;

  nlohmann::json ToJson() const;
  // Columns x, bound, empirical_mean, empirical_stderr; blank cells where no
  // measurement exists.
  std::string ToCsv() const;
};

// Bounds only, from a given clean estimate.
RobustnessReport guarantee_report(Metric metric, double epsilon,
                                  double clean_mean, double clean_stderr,
                                  std::vector<int64_t> x_grid);

struct CampaignSpec {
  ExperimentSettings settings;
  // Backdoor campaign when set; otherwise accuracy mode, which measures the
  // clean accuracy only and reports bounds for every x.
  std::optional<TriggerSpec> trigger;
  std::vector<int64_t> x_grid;
  int n_trials = 10;
  double test_fraction = 0.2;
  int workers = 1;
};

// Each trial draws one stratified split; every x in the grid (plus x = 0) is
// poisoned and fitted with its own sub-seed and scored on the clean test part.
RobustnessReport run_poisoning_campaign(const Dataset& data,
                                        const CampaignSpec& spec,
                                        uint64_t seed);

}  // namespace privatree

#endif  // PRIVATREE_ROBUSTNESS_H_
