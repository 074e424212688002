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

#include "privatree/robustness.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "privatree/errors.h"

namespace privatree {
namespace {

constexpr uint64_t kSplitStream = 0xa1;
constexpr uint64_t kPoisonStream = 0xa2;
constexpr uint64_t kCampaignFitStream = 0xa3;

// e^{-x eps} with the conventions x = 0 -> 1 and eps = inf, x > 0 -> 0.
double Decay(double epsilon, int64_t x) {
  if (x == 0) return 1.0;
  if (std::isinf(epsilon)) return 0.0;
  return std::exp(-static_cast<double>(x) * epsilon);
}

double Clip01(double v) { return std::clamp(v, 0.0, 1.0); }

nlohmann::json JsonNumber(double v) {
  if (std::isinf(v)) return "inf";
  return v;
}

}  // namespace

void PoisonGuaranteeQuery::Validate() const {
  if (!(epsilon > 0)) throw ArgumentError("epsilon must be positive");
  if (x < 0) throw ArgumentError("x must be non-negative");
  if (!(clean_metric >= 0 && clean_metric <= 1)) {
    throw ArgumentError("clean_metric must be in [0, 1]");
  }
}

double accuracy_lower_bound(const PoisonGuaranteeQuery& query) {
  query.Validate();
  return Clip01(Decay(query.epsilon, query.x) * query.clean_metric);
}

double asr_upper_bound(const PoisonGuaranteeQuery& query) {
  query.Validate();
  // Exact at x = 0, where 1 - (1 - m) would round.
  if (query.x == 0) return query.clean_metric;
  return Clip01(1.0 - Decay(query.epsilon, query.x) * (1.0 - query.clean_metric));
}

double nonpositive_cost_bound(double epsilon, int64_t x, double clean_cost) {
  if (!(epsilon > 0)) throw ArgumentError("epsilon must be positive");
  if (x < 0) throw ArgumentError("x must be non-negative");
  if (clean_cost > 0) throw ArgumentError("cost must be non-positive");
  if (x == 0 || clean_cost == 0) return clean_cost;
  if (std::isinf(epsilon)) return -std::numeric_limits<double>::infinity();
  return std::exp(static_cast<double>(x) * epsilon) * clean_cost;
}

int64_t XFromFraction(double fraction, size_t train_size) {
  if (!(fraction >= 0 && fraction <= 1)) {
    throw ArgumentError("poison fraction must be in [0, 1]");
  }
  return std::llround(fraction * static_cast<double>(train_size));
}

size_t StratifiedTrainSize(const Dataset& data, double test_fraction) {
  std::vector<size_t> per_class(data.n_classes(), 0);
  for (int label : data.labels()) ++per_class[label];
  size_t train = 0;
  for (size_t n : per_class) {
    train += n - static_cast<size_t>(
                     std::llround(test_fraction * static_cast<double>(n)));
  }
  return train;
}

void TriggerSpec::Validate(const DatasetSchema& schema) const {
  const int k = schema.n_classes();
  if (source_class < 0 || source_class >= k || target_class < 0 ||
      target_class >= k) {
    throw ArgumentError("trigger class out of range");
  }
  if (source_class == target_class) {
    throw ArgumentError("trigger source and target classes must differ");
  }
  if (assignments.empty()) throw ArgumentError("trigger has no assignments");
  std::set<int> seen;
  for (const auto& [feature, value] : assignments) {
    if (feature < 0 || feature >= static_cast<int>(schema.n_features())) {
      throw ArgumentError("trigger feature out of range");
    }
    if (!seen.insert(feature).second) {
      throw ArgumentError("trigger assigns a feature twice");
    }
    const FeatureSpec& spec = schema.features[feature];
    if (spec.is_numerical()) {
      if (!(value >= spec.lo && value <= spec.hi)) {
        throw ArgumentError("trigger value outside the range of '" +
                            spec.name + "'");
      }
    } else if (value != std::floor(value) || value < 0 ||
               value >= static_cast<double>(spec.categories.size())) {
      throw ArgumentError("trigger category invalid for '" + spec.name + "'");
    }
  }
}

void TriggerSpec::Apply(std::span<double> row) const {
  for (const auto& [feature, value] : assignments) row[feature] = value;
}

TriggerSpec TriggerSpec::FromJson(const nlohmann::json& j,
                                  const DatasetSchema& schema) {
  auto class_of = [&](const nlohmann::json& v, const char* field) {
    if (v.is_string()) {
      const int k = schema.ClassIndex(v.get<std::string>());
      if (k < 0) {
        throw LoadError(std::string("trigger ") + field + ": unknown class '" +
                        v.get<std::string>() + "'");
      }
      return k;
    }
    if (v.is_number_integer()) return v.get<int>();
    throw LoadError(std::string("trigger ") + field +
                    " must be a class name or index");
  };
  TriggerSpec out;
  try {
    if (!j.is_object() || !j.contains("assignments") ||
        !j.at("assignments").is_object()) {
      throw LoadError("trigger needs an 'assignments' object");
    }
    for (const auto& [name, v] : j.at("assignments").items()) {
      const int f = schema.FeatureIndex(name);
      if (f < 0) throw LoadError("trigger: unknown feature '" + name + "'");
      const FeatureSpec& spec = schema.features[f];
      double value;
      if (spec.is_categorical() && v.is_string()) {
        const int c = spec.CategoryIndex(v.get<std::string>());
        if (c < 0) {
          throw LoadError("trigger: unknown category '" + v.get<std::string>() +
                          "' for '" + name + "'");
        }
        value = c;
      } else if (v.is_number()) {
        value = v.get<double>();
      } else {
        throw LoadError("trigger: bad value for '" + name + "'");
      }
      out.assignments.emplace_back(f, value);
    }
    std::sort(out.assignments.begin(), out.assignments.end());
    out.source_class = class_of(j.at("source_class"), "source_class");
    out.target_class = class_of(j.at("target_class"), "target_class");
    out.Validate(schema);
  } catch (const nlohmann::json::exception& e) {
    throw LoadError(std::string("trigger: ") + e.what());
  } catch (const ArgumentError& e) {
    throw LoadError(std::string("trigger: ") + e.what());
  }
  return out;
}

TriggerSpec TriggerSpec::FromFile(const std::string& path,
                                  const DatasetSchema& schema) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open trigger file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw LoadError("trigger file " + path + ": " + e.what());
  }
  return FromJson(j, schema);
}

Dataset poison_backdoor(const Dataset& data, const TriggerSpec& trigger,
                        int64_t x, RandomStream& rng) {
  trigger.Validate(data.schema());
  if (x < 0) throw ArgumentError("x must be non-negative");
  Dataset out = data;
  if (x == 0) return out;
  std::vector<size_t> sources;
  for (size_t i = 0; i < data.n_rows(); ++i) {
    if (data.label(i) == trigger.source_class) sources.push_back(i);
  }
  if (sources.empty()) throw ArgumentError("no source-class rows to poison");
  std::vector<double> row(data.n_features());
  for (int64_t p = 0; p < x; ++p) {
    const auto src = data.row(sources[rng.UniformInt(sources.size())]);
    std::copy(src.begin(), src.end(), row.begin());
    trigger.Apply(row);
    out.AppendRow(row, trigger.target_class);
  }
  return out;
}

double attack_success_rate(const TreeModel& model, const Dataset& test,
                           const TriggerSpec& trigger) {
  size_t total = 0;
  size_t hits = 0;
  std::vector<double> row(test.n_features());
  for (size_t i = 0; i < test.n_rows(); ++i) {
    if (test.label(i) != trigger.source_class) continue;
    const auto src = test.row(i);
    std::copy(src.begin(), src.end(), row.begin());
    trigger.Apply(row);
    ++total;
    hits += model.Predict(row) == trigger.target_class;
  }
  if (total == 0) throw ArgumentError("test set has no source-class rows");
  return static_cast<double>(hits) / static_cast<double>(total);
}

nlohmann::json RobustnessReport::ToJson() const {
  nlohmann::json j;
  j["metric"] = metric == Metric::kAccuracy ? "accuracy" : "attack_success_rate";
  j["epsilon"] = JsonNumber(epsilon);
  j["train_size"] = train_size;
  j["n_trials"] = n_trials;
  j["clean_metric_mean"] = clean_metric_mean;
  j["clean_metric_stderr"] = clean_metric_stderr;
  j["guarantee_curve"] = nlohmann::json::array();
  for (const auto& p : guarantee_curve) {
    j["guarantee_curve"].push_back({{"x", p.x}, {"bound", p.value}});
  }
  if (empirical_curve) {
    j["empirical_curve"] = nlohmann::json::array();
    for (const auto& p : *empirical_curve) {
      j["empirical_curve"].push_back(
          {{"x", p.x}, {"mean", p.value}, {"stderr", p.stderr_}});
    }
  } else {
    j["empirical_curve"] = nullptr;
  }
  return j;
}

std::string RobustnessReport::ToCsv() const {
  std::ostringstream out;
  out.precision(17);
  out << "x,bound,empirical_mean,empirical_stderr\n";
  for (const auto& g : guarantee_curve) {
    out << g.x << ',' << g.value << ',';
    if (empirical_curve) {
      for (const auto& e : *empirical_curve) {
        if (e.x == g.x) {
          out << e.value << ',' << e.stderr_;
          break;
        }
      }
    }
    if (!empirical_curve ||
        std::none_of(empirical_curve->begin(), empirical_curve->end(),
                     [&](const CurvePoint& e) { return e.x == g.x; })) {
      out << ',';
    }
    out << '\n';
  }
  return out.str();
}

RobustnessReport guarantee_report(Metric metric, double epsilon,
                                  double clean_mean, double clean_stderr,
                                  std::vector<int64_t> x_grid) {
  std::sort(x_grid.begin(), x_grid.end());
  x_grid.erase(std::unique(x_grid.begin(), x_grid.end()), x_grid.end());
  RobustnessReport report;
  report.metric = metric;
  report.epsilon = epsilon;
  report.clean_metric_mean = clean_mean;
  report.clean_metric_stderr = clean_stderr;
  for (int64_t x : x_grid) {
    const PoisonGuaranteeQuery q{epsilon, x, clean_mean};
    report.guarantee_curve.push_back(
        {x, metric == Metric::kAccuracy ? accuracy_lower_bound(q)
                                        : asr_upper_bound(q),
         0.0});
  }
  return report;
}

RobustnessReport run_poisoning_campaign(const Dataset& data,
                                        const CampaignSpec& spec,
                                        uint64_t seed) {
  if (spec.n_trials < 2) throw ArgumentError("a campaign needs >= 2 trials");
  for (int64_t x : spec.x_grid) {
    if (x < 0) throw ArgumentError("x must be non-negative");
  }
  if (spec.trigger) spec.trigger->Validate(data.schema());

  std::vector<int64_t> grid = spec.x_grid;
  grid.push_back(0);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  // Accuracy mode has no attacker: only the clean point is measured.
  const std::vector<int64_t> measured =
      spec.trigger ? grid : std::vector<int64_t>{0};

  // metric[trial][point]
  std::vector<std::vector<double>> metric(
      spec.n_trials, std::vector<double>(measured.size(), 0.0));
  ParallelFor(spec.n_trials, spec.workers, [&](size_t t) {
    RandomStream split_rng = RandomStream::Derive(seed, kSplitStream, t);
    const TrainTestSplit split =
        StratifiedSplit(data, spec.test_fraction, split_rng);
    for (size_t p = 0; p < measured.size(); ++p) {
      const uint64_t sub = t * measured.size() + p;
      Dataset train = split.train;
      if (spec.trigger) {
        RandomStream poison_rng = RandomStream::Derive(seed, kPoisonStream, sub);
        train = poison_backdoor(split.train, *spec.trigger, measured[p],
                                poison_rng);
      }
      const TrainerParams params =
          ParamsFor(train, spec.settings.epsilon, spec.settings.max_depth,
                    spec.settings.max_leaf_error);
      const uint64_t fit_seed =
          RandomStream::Derive(seed, kCampaignFitStream, sub).NextU64();
      const TreeModel model = Train(spec.settings.trainer, train, params,
                                    fit_seed, spec.settings.fit_options);
      metric[t][p] = spec.trigger
                         ? attack_success_rate(model, split.test, *spec.trigger)
                         : accuracy(model, split.test);
    }
  });

  std::vector<CurvePoint> empirical;
  for (size_t p = 0; p < measured.size(); ++p) {
    std::vector<double> column;
    for (const auto& trial : metric) column.push_back(trial[p]);
    const MeanStderr s = Summarize(column);
    empirical.push_back({measured[p], s.mean, s.stderr_});
  }
  const CurvePoint& clean = empirical.front();
  RobustnessReport report = guarantee_report(
      spec.trigger ? Metric::kAttackSuccess : Metric::kAccuracy,
      spec.settings.epsilon, clean.value, clean.stderr_, grid);
  report.train_size = StratifiedTrainSize(data, spec.test_fraction);
  report.n_trials = spec.n_trials;
  report.empirical_curve = std::move(empirical);
  return report;
}

}  // namespace privatree
