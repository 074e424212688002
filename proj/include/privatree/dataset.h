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

#ifndef PRIVATREE_DATASET_H_
#define PRIVATREE_DATASET_H_

#include <cstddef>
#include <istream>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace privatree {

enum class FeatureKind { kNumerical, kCategorical };

// Public metadata for one column. Numerical features carry their public
// range; categorical features their ordered category list.
struct FeatureSpec {
  std::string name;
  FeatureKind kind = FeatureKind::kNumerical;
  double lo = 0;
  double hi = 1;
  std::vector<std::string> categories;

  bool is_numerical() const { return kind == FeatureKind::kNumerical; }
  bool is_categorical() const { return kind == FeatureKind::kCategorical; }
  // Index of `value` in categories, or -1.
  int CategoryIndex(const std::string& value) const;

  bool operator==(const FeatureSpec&) const = default;
};

struct DatasetSchema {
  std::vector<FeatureSpec> features;
  std::vector<std::string> class_labels;

  void Validate() const;
  size_t n_features() const { return features.size(); }
  int n_classes() const { return static_cast<int>(class_labels.size()); }
  int FeatureIndex(const std::string& name) const;
  int ClassIndex(const std::string& label) const;
  bool HasNumerical() const;
  bool HasCategorical() const;

  // Stable 64-bit FNV-1a digest of the canonical JSON form, as 16 hex digits.
  std::string Hash() const;

  nlohmann::json ToJson() const;
  // Throws LoadError on malformed input.
  static DatasetSchema FromJson(const nlohmann::json& j);
  static DatasetSchema FromFile(const std::string& path);

  bool operator==(const DatasetSchema&) const = default;
};

// Row-major feature matrix with labels. Numerical cells lie in their
// feature's [lo, hi]; categorical cells hold category indices.
class Dataset {
 public:
  explicit Dataset(DatasetSchema schema);
  // Throws ArgumentError if any invariant is violated.
  Dataset(DatasetSchema schema, std::vector<double> values,
          std::vector<int> labels);

  const DatasetSchema& schema() const { return schema_; }
  size_t n_rows() const { return labels_.size(); }
  size_t n_features() const { return schema_.n_features(); }
  int n_classes() const { return schema_.n_classes(); }

  double at(size_t row, size_t feature) const {
    return values_[row * n_features() + feature];
  }
  std::span<const double> row(size_t i) const {
    return {values_.data() + i * n_features(), n_features()};
  }
  int label(size_t i) const { return labels_[i]; }
  std::span<const int> labels() const { return labels_; }
  std::vector<double> Column(size_t feature) const;

  // Validates and appends one row.
  void AppendRow(std::span<const double> row, int label);
  Dataset Subset(std::span<const size_t> rows) const;

  // Throws ArgumentError naming the offending cell.
  void ValidateRow(std::span<const double> row) const;

 private:
  DatasetSchema schema_;
  std::vector<double> values_;
  std::vector<int> labels_;
};

struct LoadReport {
  size_t dropped_rows = 0;   // rows with a missing cell ("" or "?")
  size_t clipped_cells = 0;  // numerical cells pulled into [lo, hi]
};

struct LoadedDataset {
  Dataset dataset;
  LoadReport report;
};

// RFC-4180 reader: quoted fields, doubled quotes, CRLF or LF line ends.
std::vector<std::vector<std::string>> ReadCsv(std::istream& in);

// Reads a CSV with a header row holding every schema feature plus the label
// column. Throws LoadError naming row and column for unknown categories,
// unknown labels or non-numeric numerical cells.
LoadedDataset ParseDataset(std::istream& csv, const DatasetSchema& schema,
                           const std::string& label_column = "label");
LoadedDataset load_dataset(const std::string& csv_path,
                           const std::string& schema_path,
                           const std::string& label_column = "label");

}  // namespace privatree

#endif  // PRIVATREE_DATASET_H_
