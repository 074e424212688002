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

#ifndef PRIVATREE_TESTS_TESTING_H_
#define PRIVATREE_TESTS_TESTING_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "privatree/dataset.h"
#include "privatree/quantiles.h"
#include "privatree/random.h"
#include "privatree/tree.h"

namespace privatree::testing {

std::string DataPath(const std::string& name);
std::string FixturePath(const std::string& name);

// Features named x0, x1, ... on [0, 1]; classes c0, c1, ...
DatasetSchema NumericalSchema(int n_features, int n_classes);

// Feature j is categorical with category_counts[j] categories when that count
// is positive, numerical on [0, 1] otherwise.
DatasetSchema MixedSchema(const std::vector<int>& category_counts,
                          int n_classes);

// Rows drawn uniformly from the schema's domain, labelled by a random linear
// score plus label noise so that trees have something to find.
Dataset RandomDataset(const DatasetSchema& schema, size_t n, RandomStream& rng);

// One numerical feature on [0, 1]; classes alternate, class 0 drawn from
// [0, 0.4) and class 1 from [0.6, 1). With even n the noiseless median gap
// is the empty margin, so one split separates the classes.
Dataset ThresholdDataset(size_t n, RandomStream& rng);

// Non-private greedy learner scoring splits on exact counts over the given
// bin edges. Written independently of the library's split search; used as the
// oracle for noiseless training. Nodes come out in preorder like TreeModel.
std::vector<Node> GreedyReference(const Dataset& data,
                                  const std::vector<std::optional<BinEdges>>& edges,
                                  int max_depth);

}  // namespace privatree::testing

#endif  // PRIVATREE_TESTS_TESTING_H_
