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

#ifndef PRIVATREE_EVALUATION_H_
#define PRIVATREE_EVALUATION_H_

#include <cstdint>
#include <functional>
#include <vector>

#include "privatree/dataset.h"
#include "privatree/random.h"
#include "privatree/tree.h"

namespace privatree {

struct MeanStderr {
  double mean = 0;
  double stderr_ = 0;  // sample standard deviation / sqrt(n)
};

MeanStderr Summarize(const std::vector<double>& values);

// Fraction of rows whose prediction equals the label. Throws ArgumentError on
// an empty dataset.
double accuracy(const TreeModel& model, const Dataset& data);

// Fold id in [0, k) per row. Rows of each class are shuffled and dealt
// round-robin, so every fold keeps the class proportions.
std::vector<int> StratifiedFolds(std::span<const int> labels, int n_classes,
                                 int k, RandomStream& rng);

struct TrainTestSplit {
  Dataset train;
  Dataset test;
};

// Stratified holdout with round(test_fraction * n) test rows (approximately;
// classes are dealt independently).
TrainTestSplit StratifiedSplit(const Dataset& data, double test_fraction,
                               RandomStream& rng);

struct ExperimentSettings {
  TrainerKind trainer = TrainerKind::kPrivaTree;
  double epsilon = 0.1;
  int max_depth = 4;
  double max_leaf_error = 0.01;
  FitOptions fit_options;
};

struct CrossValidation {
  std::vector<double> trial_means;  // mean fold accuracy per repetition
  MeanStderr summary;               // over trial_means
};

// Repeated stratified k-fold cross-validation. Repetition t uses sub-seed
// (seed, t) for both fold assignment and training, so results are independent
// of `workers`. folds == 0 means train accuracy on the full dataset.
CrossValidation cross_validate(const Dataset& data,
                               const ExperimentSettings& settings, int folds,
                               int repetitions, uint64_t seed,
                               int workers = 1);

// Runs fn(0..n-1) on up to `workers` threads.
void ParallelFor(size_t n, int workers, const std::function<void(size_t)>& fn);

}  // namespace privatree

#endif  // PRIVATREE_EVALUATION_H_
