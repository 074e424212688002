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

#ifndef PRIVATREE_CLI_CONFIG_H_
#define PRIVATREE_CLI_CONFIG_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

namespace privatree::cli {

// Every field any subcommand reads. Subcommands bind the subset they use.
struct RunConfig {
  std::string data;
  std::string schema;
  std::string model;
  std::string label_column = "label";
  std::string trigger;
  std::string out;
  std::string csv;
  std::string config;

  std::string epsilon = "0.1";
  std::vector<std::string> epsilon_grid;
  int depth = 4;
  double max_leaf_error = 0.01;
  std::optional<uint64_t> seed;
  int trials = 10;
  int folds = 5;
  int workers = 1;
  double test_fraction = 0.2;

  std::vector<int64_t> x_grid;
  std::vector<double> percent_grid;
  std::optional<double> clean_metric;
  double clean_stderr = 0;
  std::string metric = "accuracy";
  std::optional<int64_t> train_size;
  std::optional<int64_t> n_samples;
  int n_classes = 2;

  bool baseline = false;
  bool always_recurse = false;
};

// Accepts a positive real or inf/+inf/infinity. Throws ArgumentError naming
// `field`.
double ParseEpsilon(const std::string& text, const std::string& field);

// --seed, else PRIVATREE_SEED, else 0.
uint64_t ResolveSeed(const std::optional<uint64_t>& flag);

// Fills options of `app` that were not given on the command line from a JSON
// object whose keys are long option names without dashes. Flags win.
void ApplyJsonConfig(CLI::App& app, const std::string& path);

// Throws ArgumentError unless `path` names a readable file.
void RequireFile(const std::string& path, const std::string& flag);

}  // namespace privatree::cli

#endif  // PRIVATREE_CLI_CONFIG_H_
