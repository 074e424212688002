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

#include "privatree/evaluation.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include "privatree/errors.h"

namespace privatree {
namespace {

constexpr uint64_t kFoldStream = 0xf0;
constexpr uint64_t kFitStream = 0xf1;

}  // namespace

MeanStderr Summarize(const std::vector<double>& values) {
  MeanStderr out;
  if (values.empty()) return out;
  const double n = static_cast<double>(values.size());
  out.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() > 1) {
    double ss = 0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.stderr_ = std::sqrt(ss / (n - 1)) / std::sqrt(n);
  }
  return out;
}

double accuracy(const TreeModel& model, const Dataset& data) {
  if (data.n_rows() == 0) throw ArgumentError("accuracy of an empty dataset");
  size_t correct = 0;
  for (size_t i = 0; i < data.n_rows(); ++i) {
    correct += model.Predict(data.row(i)) == data.label(i);
  }
  return static_cast<double>(correct) / static_cast<double>(data.n_rows());
}

std::vector<int> StratifiedFolds(std::span<const int> labels, int n_classes,
                                 int k, RandomStream& rng) {
  if (k < 2) throw ArgumentError("need at least 2 folds");
  std::vector<std::vector<size_t>> by_class(n_classes);
  for (size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
  std::vector<int> fold(labels.size(), 0);
  size_t dealt = 0;
  for (auto& members : by_class) {
    for (size_t i = members.size(); i > 1; --i) {
      std::swap(members[i - 1], members[rng.UniformInt(i)]);
    }
    for (size_t idx : members) fold[idx] = static_cast<int>(dealt++ % k);
  }
  return fold;
}

TrainTestSplit StratifiedSplit(const Dataset& data, double test_fraction,
                               RandomStream& rng) {
  if (!(test_fraction > 0 && test_fraction < 1)) {
    throw ArgumentError("test fraction must be in (0, 1)");
  }
  std::vector<std::vector<size_t>> by_class(data.n_classes());
  for (size_t i = 0; i < data.n_rows(); ++i) {
    by_class[data.label(i)].push_back(i);
  }
  std::vector<size_t> train;
  std::vector<size_t> test;
  for (auto& members : by_class) {
    for (size_t i = members.size(); i > 1; --i) {
      std::swap(members[i - 1], members[rng.UniformInt(i)]);
    }
    const auto n_test = static_cast<size_t>(
        std::llround(test_fraction * static_cast<double>(members.size())));
    test.insert(test.end(), members.begin(), members.begin() + n_test);
    train.insert(train.end(), members.begin() + n_test, members.end());
  }
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {data.Subset(train), data.Subset(test)};
}

CrossValidation cross_validate(const Dataset& data,
                               const ExperimentSettings& settings, int folds,
                               int repetitions, uint64_t seed, int workers) {
  if (repetitions < 1) throw ArgumentError("need at least 1 repetition");
  if (folds == 1 || folds < 0) throw ArgumentError("folds must be 0 or >= 2");
  CrossValidation out;
  out.trial_means.assign(repetitions, 0.0);
  ParallelFor(repetitions, workers, [&](size_t t) {
    if (folds == 0) {
      const TreeModel model = Train(
          settings.trainer, data,
          ParamsFor(data, settings.epsilon, settings.max_depth,
                    settings.max_leaf_error),
          RandomStream::Derive(seed, kFitStream, t).NextU64(),
          settings.fit_options);
      out.trial_means[t] = accuracy(model, data);
      return;
    }
    RandomStream fold_rng = RandomStream::Derive(seed, kFoldStream, t);
    const std::vector<int> fold =
        StratifiedFolds(data.labels(), data.n_classes(), folds, fold_rng);
    double sum = 0;
    for (int f = 0; f < folds; ++f) {
      std::vector<size_t> train_rows;
      std::vector<size_t> test_rows;
      for (size_t i = 0; i < fold.size(); ++i) {
        (fold[i] == f ? test_rows : train_rows).push_back(i);
      }
      const Dataset train = data.Subset(train_rows);
      const Dataset test = data.Subset(test_rows);
      const uint64_t fit_seed =
          RandomStream::Derive(seed, kFitStream, t * 1024 + f).NextU64();
      const TreeModel model =
          Train(settings.trainer, train,
                ParamsFor(train, settings.epsilon, settings.max_depth,
                          settings.max_leaf_error),
                fit_seed, settings.fit_options);
      sum += accuracy(model, test);
    }
    out.trial_means[t] = sum / folds;
  });
  out.summary = Summarize(out.trial_means);
  return out;
}

void ParallelFor(size_t n, int workers, const std::function<void(size_t)>& fn) {
  const size_t threads =
      std::min<size_t>(n, static_cast<size_t>(std::max(workers, 1)));
  if (threads <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (size_t w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace privatree
