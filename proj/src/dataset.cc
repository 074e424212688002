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

#include "privatree/dataset.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "privatree/errors.h"

namespace privatree {
namespace {

std::string Trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t");
  return s.substr(begin, end - begin + 1);
}

bool IsMissing(const std::string& cell) { return cell.empty() || cell == "?"; }

std::string JsonScalarToString(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number() || v.is_boolean()) return v.dump();
  throw LoadError("schema: category values must be strings or numbers");
}

}  // namespace

int FeatureSpec::CategoryIndex(const std::string& value) const {
  const auto it = std::find(categories.begin(), categories.end(), value);
  return it == categories.end() ? -1
                                : static_cast<int>(it - categories.begin());
}

void DatasetSchema::Validate() const {
  if (features.empty()) throw ArgumentError("schema needs at least 1 feature");
  if (class_labels.size() < 2) {
    throw ArgumentError("schema needs at least 2 class labels");
  }
  std::set<std::string> names;
  for (const FeatureSpec& f : features) {
    if (!names.insert(f.name).second) {
      throw ArgumentError("duplicate feature name '" + f.name + "'");
    }
    if (f.is_numerical()) {
      if (!(std::isfinite(f.lo) && std::isfinite(f.hi) && f.lo < f.hi)) {
        throw ArgumentError("feature '" + f.name + "': range needs lo < hi");
      }
    } else {
      if (f.categories.empty()) {
        throw ArgumentError("feature '" + f.name + "': no categories");
      }
      std::set<std::string> unique(f.categories.begin(), f.categories.end());
      if (unique.size() != f.categories.size()) {
        throw ArgumentError("feature '" + f.name + "': duplicate categories");
      }
    }
  }
  std::set<std::string> unique(class_labels.begin(), class_labels.end());
  if (unique.size() != class_labels.size()) {
    throw ArgumentError("duplicate class labels");
  }
}

int DatasetSchema::FeatureIndex(const std::string& name) const {
  for (size_t j = 0; j < features.size(); ++j) {
    if (features[j].name == name) return static_cast<int>(j);
  }
  return -1;
}

int DatasetSchema::ClassIndex(const std::string& label) const {
  const auto it = std::find(class_labels.begin(), class_labels.end(), label);
  return it == class_labels.end()
             ? -1
             : static_cast<int>(it - class_labels.begin());
}

bool DatasetSchema::HasNumerical() const {
  return std::any_of(features.begin(), features.end(),
                     [](const FeatureSpec& f) { return f.is_numerical(); });
}

bool DatasetSchema::HasCategorical() const {
  return std::any_of(features.begin(), features.end(),
                     [](const FeatureSpec& f) { return f.is_categorical(); });
}

nlohmann::json DatasetSchema::ToJson() const {
  nlohmann::json features_json = nlohmann::json::array();
  for (const FeatureSpec& f : features) {
    nlohmann::json fj = {{"name", f.name}};
    if (f.is_numerical()) {
      fj["kind"] = "numerical";
      fj["range"] = {f.lo, f.hi};
    } else {
      fj["kind"] = "categorical";
      fj["categories"] = f.categories;
    }
    features_json.push_back(std::move(fj));
  }
  return {{"features", features_json}, {"classes", class_labels}};
}

std::string DatasetSchema::Hash() const {
  const std::string canonical = ToJson().dump();
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

DatasetSchema DatasetSchema::FromJson(const nlohmann::json& j) {
  DatasetSchema schema;
  try {
    for (const auto& fj : j.at("features")) {
      FeatureSpec f;
      f.name = fj.at("name").get<std::string>();
      const std::string kind = fj.at("kind").get<std::string>();
      if (kind == "numerical") {
        const auto& range = fj.at("range");
        if (!range.is_array() || range.size() != 2) {
          throw LoadError("schema: feature '" + f.name +
                          "' range must be [lo, hi]");
        }
        f.kind = FeatureKind::kNumerical;
        f.lo = range[0].get<double>();
        f.hi = range[1].get<double>();
      } else if (kind == "categorical") {
        f.kind = FeatureKind::kCategorical;
        for (const auto& c : fj.at("categories")) {
          f.categories.push_back(JsonScalarToString(c));
        }
      } else {
        throw LoadError("schema: feature '" + f.name + "' has unknown kind '" +
                        kind + "'");
      }
      schema.features.push_back(std::move(f));
    }
    for (const auto& c : j.at("classes")) {
      schema.class_labels.push_back(JsonScalarToString(c));
    }
  } catch (const nlohmann::json::exception& e) {
    throw LoadError(std::string("schema: ") + e.what());
  }
  try {
    schema.Validate();
  } catch (const ArgumentError& e) {
    throw LoadError(std::string("schema: ") + e.what());
  }
  return schema;
}

DatasetSchema DatasetSchema::FromFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open schema file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw LoadError("schema file '" + path + "': " + e.what());
  }
  return FromJson(j);
}

Dataset::Dataset(DatasetSchema schema) : schema_(std::move(schema)) {
  schema_.Validate();
}

Dataset::Dataset(DatasetSchema schema, std::vector<double> values,
                 std::vector<int> labels)
    : schema_(std::move(schema)),
      values_(std::move(values)),
      labels_(std::move(labels)) {
  schema_.Validate();
  if (values_.size() != labels_.size() * n_features()) {
    throw ArgumentError("value matrix size does not match rows x features");
  }
  for (size_t i = 0; i < n_rows(); ++i) {
    ValidateRow(row(i));
    if (labels_[i] < 0 || labels_[i] >= n_classes()) {
      throw ArgumentError("row " + std::to_string(i) + ": label out of range");
    }
  }
}

void Dataset::ValidateRow(std::span<const double> r) const {
  if (r.size() != n_features()) {
    throw ArgumentError("row has " + std::to_string(r.size()) +
                        " cells, schema has " + std::to_string(n_features()));
  }
  for (size_t j = 0; j < r.size(); ++j) {
    const FeatureSpec& f = schema_.features[j];
    const double v = r[j];
    if (f.is_numerical()) {
      if (!(v >= f.lo && v <= f.hi)) {
        throw ArgumentError("feature '" + f.name + "': value " +
                            std::to_string(v) + " outside declared range");
      }
    } else if (!(v >= 0 && v < static_cast<double>(f.categories.size()) &&
                 v == std::floor(v))) {
      throw ArgumentError("feature '" + f.name + "': invalid category index " +
                          std::to_string(v));
    }
  }
}

std::vector<double> Dataset::Column(size_t feature) const {
  std::vector<double> out(n_rows());
  for (size_t i = 0; i < n_rows(); ++i) out[i] = at(i, feature);
  return out;
}

void Dataset::AppendRow(std::span<const double> r, int label) {
  ValidateRow(r);
  if (label < 0 || label >= n_classes()) {
    throw ArgumentError("label out of range");
  }
  values_.insert(values_.end(), r.begin(), r.end());
  labels_.push_back(label);
}

Dataset Dataset::Subset(std::span<const size_t> rows) const {
  Dataset out(schema_);
  out.values_.reserve(rows.size() * n_features());
  out.labels_.reserve(rows.size());
  for (size_t i : rows) {
    if (i >= n_rows()) throw ArgumentError("subset row index out of range");
    const auto r = row(i);
    out.values_.insert(out.values_.end(), r.begin(), r.end());
    out.labels_.push_back(labels_[i]);
  }
  return out;
}

std::vector<std::vector<std::string>> ReadCsv(std::istream& in) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  char c;
  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    // Blank lines are skipped.
    if (!(record.size() == 1 && record[0].empty())) {
      records.push_back(std::move(record));
    }
    record.clear();
  };
  while (in.get(c)) {
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field_started || Trim(field).empty()) {
          field.clear();
          in_quotes = true;
          field_started = true;
        } else {
          field.push_back(c);
        }
        break;
      case ',':
        end_field();
        break;
      case '\r':
        if (in.peek() == '\n') in.get(c);
        end_record();
        break;
      case '\n':
        end_record();
        break;
      default:
        field.push_back(c);
        field_started = true;
    }
  }
  if (in_quotes) throw LoadError("CSV: unterminated quoted field");
  if (field_started || !field.empty() || !record.empty()) end_record();
  return records;
}

LoadedDataset ParseDataset(std::istream& csv, const DatasetSchema& schema,
                           const std::string& label_column) {
  schema.Validate();
  const auto records = ReadCsv(csv);
  if (records.empty()) throw LoadError("CSV: missing header row");
  const auto& header = records[0];
  auto column_of = [&](const std::string& name) {
    for (size_t c = 0; c < header.size(); ++c) {
      if (Trim(header[c]) == name) return c;
    }
    throw LoadError("CSV: header has no column '" + name + "'");
  };
  std::vector<size_t> feature_columns;
  for (const FeatureSpec& f : schema.features) {
    feature_columns.push_back(column_of(f.name));
  }
  const size_t label_col = column_of(label_column);

  LoadedDataset out{Dataset(schema), {}};
  std::vector<double> row(schema.n_features());
  for (size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    // Line numbers count the header as line 1.
    const std::string where = "CSV line " + std::to_string(r + 1);
    if (rec.size() != header.size()) {
      throw LoadError(where + ": expected " + std::to_string(header.size()) +
                      " cells, found " + std::to_string(rec.size()));
    }
    bool missing = IsMissing(Trim(rec[label_col]));
    for (size_t c : feature_columns) missing = missing || IsMissing(Trim(rec[c]));
    if (missing) {
      ++out.report.dropped_rows;
      continue;
    }
    for (size_t j = 0; j < schema.n_features(); ++j) {
      const FeatureSpec& f = schema.features[j];
      const std::string cell = Trim(rec[feature_columns[j]]);
      if (f.is_categorical()) {
        const int idx = f.CategoryIndex(cell);
        if (idx < 0) {
          throw LoadError(where + ", column '" + f.name +
                          "': unknown category '" + cell + "'");
        }
        row[j] = idx;
        continue;
      }
      double v = 0;
      const char* first = cell.data();
      const char* last = cell.data() + cell.size();
      if (*first == '+') ++first;
      const auto [ptr, ec] = std::from_chars(first, last, v);
      if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
        throw LoadError(where + ", column '" + f.name +
                        "': non-numeric value '" + cell + "'");
      }
      if (v < f.lo || v > f.hi) {
        v = std::clamp(v, f.lo, f.hi);
        ++out.report.clipped_cells;
      }
      row[j] = v;
    }
    const std::string label = Trim(rec[label_col]);
    const int cls = schema.ClassIndex(label);
    if (cls < 0) {
      throw LoadError(where + ", column '" + label_column +
                      "': unknown class label '" + label + "'");
    }
    out.dataset.AppendRow(row, cls);
  }
  return out;
}

LoadedDataset load_dataset(const std::string& csv_path,
                           const std::string& schema_path,
                           const std::string& label_column) {
  const DatasetSchema schema = DatasetSchema::FromFile(schema_path);
  std::ifstream in(csv_path, std::ios::binary);
  if (!in) throw IoError("cannot open data file '" + csv_path + "'");
  return ParseDataset(in, schema, label_column);
}

}  // namespace privatree
