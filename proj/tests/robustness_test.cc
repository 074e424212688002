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

#include <cmath>
#include <limits>
#include <sstream>

#include <gtest/gtest.h>

#include "privatree/errors.h"
#include "testing.h"

namespace privatree {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Backdoor {
  Dataset data;
  TriggerSpec trigger;
};

Backdoor LoadBackdoor() {
  const LoadedDataset d =
      load_dataset(testing::DataPath("backdoor.csv"),
                   testing::DataPath("backdoor.schema.json"));
  return {d.dataset,
          TriggerSpec::FromFile(testing::DataPath("backdoor.trigger.json"),
                                d.dataset.schema())};
}

TreeModel Constant(const Dataset& d, int label) {
  ModelMetadata m;
  m.n_classes = d.n_classes();
  m.category_counts.assign(d.n_features(), 0);
  m.bin_edges.resize(d.n_features());
  Node leaf;
  leaf.label = label;
  return TreeModel(m, {leaf});
}

TEST(GuaranteeTest, AccuracyLowerBound) {
  EXPECT_EQ(accuracy_lower_bound({0.1, 0, 0.73}), 0.73);
  EXPECT_NEAR(accuracy_lower_bound({0.1, 10, 1.0}), std::exp(-1.0), 1e-15);
  // Diabetes130US, 0.1% of a 56,872-row training split.
  EXPECT_NEAR(accuracy_lower_bound({0.01, 57, 0.568}), 0.324, 0.005);
  EXPECT_NEAR(accuracy_lower_bound({0.01, 57, 0.568}), 0.321218, 1e-6);
  EXPECT_EQ(accuracy_lower_bound({kInf, 0, 0.9}), 0.9);
  EXPECT_EQ(accuracy_lower_bound({kInf, 1, 0.9}), 0.0);
}

TEST(GuaranteeTest, AsrUpperBound) {
  EXPECT_EQ(asr_upper_bound({0.1, 0, 0.2}), 0.2);  // exact, not 1 - 0.8
  EXPECT_NEAR(asr_upper_bound({0.01, 100, 0.0}), 1 - std::exp(-1.0), 1e-15);
  EXPECT_LT(asr_upper_bound({0.01, 20, 0.1}), asr_upper_bound({0.1, 20, 0.1}));
  EXPECT_EQ(asr_upper_bound({kInf, 3, 0.1}), 1.0);
}

TEST(GuaranteeTest, MonotoneInX) {
  double acc = 1, asr = 0;
  for (int64_t x = 0; x < 200; x += 7) {
    const double a = accuracy_lower_bound({0.05, x, 0.8});
    const double b = asr_upper_bound({0.05, x, 0.1});
    EXPECT_LE(a, acc);
    EXPECT_GE(b, asr);
    acc = a;
    asr = b;
  }
}

TEST(GuaranteeTest, QueryValidation) {
  EXPECT_THROW(accuracy_lower_bound({0, 1, 0.5}), ArgumentError);
  EXPECT_THROW(accuracy_lower_bound({0.1, -1, 0.5}), ArgumentError);
  EXPECT_THROW(asr_upper_bound({0.1, 1, 1.5}), ArgumentError);
}

TEST(GuaranteeTest, NonPositiveCostVariant) {
  EXPECT_NEAR(nonpositive_cost_bound(0.1, 10, -0.5), -0.5 * std::exp(1.0),
              1e-12);
  EXPECT_EQ(nonpositive_cost_bound(0.1, 0, -0.5), -0.5);
  EXPECT_THROW(nonpositive_cost_bound(0.1, 1, 0.5), ArgumentError);
}

TEST(GuaranteeTest, PercentToX) {
  EXPECT_EQ(XFromFraction(0.001, 56872), 57);
  EXPECT_EQ(XFromFraction(0.01, 1600), 16);
  EXPECT_EQ(XFromFraction(0.0, 1600), 0);
  EXPECT_THROW(XFromFraction(1.5, 10), ArgumentError);
}

TEST(TriggerSpecTest, ParsesAgainstSchema) {
  const DatasetSchema schema = testing::MixedSchema({0, 3}, 3);
  const TriggerSpec t = TriggerSpec::FromJson(
      nlohmann::json::parse(
          R"({"assignments": {"x1": "v2", "x0": 0.25},
              "source_class": "c0", "target_class": 2})"),
      schema);
  ASSERT_EQ(t.assignments.size(), 2u);
  EXPECT_EQ(t.assignments[0], (std::pair<int, double>{0, 0.25}));
  EXPECT_EQ(t.assignments[1], (std::pair<int, double>{1, 2.0}));
  EXPECT_EQ(t.source_class, 0);
  EXPECT_EQ(t.target_class, 2);
  std::vector<double> row{0.9, 0};
  t.Apply(row);
  EXPECT_EQ(row, (std::vector<double>{0.25, 2}));
}

TEST(TriggerSpecTest, RejectsInvalidTriggers) {
  const DatasetSchema schema = testing::MixedSchema({0, 3}, 2);
  auto parse = [&](const char* text) {
    return TriggerSpec::FromJson(nlohmann::json::parse(text), schema);
  };
  EXPECT_THROW(parse(R"({"assignments": {"nope": 1},
      "source_class": "c0", "target_class": "c1"})"), LoadError);
  EXPECT_THROW(parse(R"({"assignments": {"x0": 2.0},
      "source_class": "c0", "target_class": "c1"})"), LoadError);
  EXPECT_THROW(parse(R"({"assignments": {"x1": "v9"},
      "source_class": "c0", "target_class": "c1"})"), LoadError);
  EXPECT_THROW(parse(R"({"assignments": {"x0": 0.5},
      "source_class": "c1", "target_class": "c1"})"), LoadError);
  EXPECT_THROW(parse(R"({"assignments": {},
      "source_class": "c0", "target_class": "c1"})"), LoadError);
  EXPECT_THROW(parse(R"({"assignments": {"x0": 0.5},
      "source_class": "c0", "target_class": "c7"})"), LoadError);
}

TEST(PoisonBackdoorTest, AppendsTriggeredTargetRows) {
  const Backdoor b = LoadBackdoor();
  RandomStream rng(1);
  EXPECT_EQ(poison_backdoor(b.data, b.trigger, 0, rng).n_rows(),
            b.data.n_rows());
  for (int64_t x : {1, 7, 40}) {
    const Dataset p = poison_backdoor(b.data, b.trigger, x, rng);
    ASSERT_EQ(p.n_rows(), b.data.n_rows() + x);
    for (size_t i = 0; i < b.data.n_rows(); ++i) {
      ASSERT_EQ(p.label(i), b.data.label(i));
      ASSERT_TRUE(std::equal(p.row(i).begin(), p.row(i).end(),
                             b.data.row(i).begin()));
    }
    for (size_t i = b.data.n_rows(); i < p.n_rows(); ++i) {
      EXPECT_EQ(p.label(i), b.trigger.target_class);
      for (const auto& [f, v] : b.trigger.assignments) EXPECT_EQ(p.at(i, f), v);
      EXPECT_NO_THROW(p.ValidateRow(p.row(i)));
    }
  }
}

TEST(PoisonBackdoorTest, NeedsSourceRows) {
  const Backdoor b = LoadBackdoor();
  Dataset only_target(b.data.schema());
  for (size_t i = 0; i < b.data.n_rows(); ++i) {
    if (b.data.label(i) == b.trigger.target_class) {
      only_target.AppendRow(b.data.row(i), b.data.label(i));
    }
  }
  RandomStream rng(2);
  EXPECT_NO_THROW(poison_backdoor(only_target, b.trigger, 0, rng));
  EXPECT_THROW(poison_backdoor(only_target, b.trigger, 3, rng), ArgumentError);
  EXPECT_THROW(attack_success_rate(Constant(only_target, 0), only_target,
                                   b.trigger),
               ArgumentError);
}

TEST(AttackSuccessRateTest, ConstantAndTriggerModels) {
  const Backdoor b = LoadBackdoor();
  EXPECT_EQ(attack_success_rate(Constant(b.data, b.trigger.target_class),
                                b.data, b.trigger),
            1.0);
  EXPECT_EQ(attack_success_rate(Constant(b.data, b.trigger.source_class),
                                b.data, b.trigger),
            0.0);
  // A stump on the trigger feature sends every triggered row to the target.
  ModelMetadata m;
  m.max_depth = 1;
  m.category_counts.assign(b.data.n_features(), 0);
  m.bin_edges.resize(b.data.n_features());
  const int corner = b.data.schema().FeatureIndex("corner");
  Node root, left, right;
  root.rule = NumericalRule{corner, 0.5};
  root.left = 1;
  root.right = 2;
  left.label = b.trigger.source_class;
  right.label = b.trigger.target_class;
  const TreeModel stump(m, {root, left, right});
  EXPECT_EQ(attack_success_rate(stump, b.data, b.trigger), 1.0);
  EXPECT_EQ(accuracy(stump, b.data), 0.5);
}

TEST(ReportTest, JsonAndCsv) {
  RobustnessReport r = guarantee_report(Metric::kAttackSuccess, 0.1, 0.2, 0.01,
                                        {16, 0, 4, 4});
  ASSERT_EQ(r.guarantee_curve.size(), 3u);
  EXPECT_EQ(r.guarantee_curve[0].x, 0);
  EXPECT_EQ(r.guarantee_curve[0].value, 0.2);
  r.empirical_curve = std::vector<CurvePoint>{{0, 0.2, 0.01}};
  const std::string csv = r.ToCsv();
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "x,bound,empirical_mean,empirical_stderr");
  std::getline(in, line);
  EXPECT_EQ(line, "0,0.20000000000000001,0.20000000000000001,0.01");
  std::getline(in, line);
  EXPECT_EQ(line.substr(0, 2), "4,");
  EXPECT_EQ(line.back(), ',');
  const auto j = r.ToJson();
  EXPECT_EQ(j["metric"], "attack_success_rate");
  EXPECT_EQ(j["guarantee_curve"].size(), 3u);
  EXPECT_EQ(j["empirical_curve"].size(), 1u);
}

TEST(CampaignTest, CleanOnlyGridEchoesEstimate) {
  const Backdoor b = LoadBackdoor();
  CampaignSpec spec;
  spec.settings.epsilon = 0.1;
  spec.trigger = b.trigger;
  spec.x_grid = {0};
  spec.n_trials = 5;
  const RobustnessReport r = run_poisoning_campaign(b.data, spec, 3);
  ASSERT_EQ(r.empirical_curve->size(), 1u);
  EXPECT_EQ((*r.empirical_curve)[0].value, r.clean_metric_mean);
  ASSERT_EQ(r.guarantee_curve.size(), 1u);
  EXPECT_EQ(r.guarantee_curve[0].value, r.clean_metric_mean);
  EXPECT_EQ(r.train_size, 1600u);
  EXPECT_EQ(r.n_trials, 5);
}

TEST(CampaignTest, DeterministicAcrossWorkers) {
  const Backdoor b = LoadBackdoor();
  CampaignSpec spec;
  spec.settings.epsilon = 1.0;
  spec.trigger = b.trigger;
  spec.x_grid = {8, 0};
  spec.n_trials = 4;
  const RobustnessReport a = run_poisoning_campaign(b.data, spec, 5);
  spec.workers = 3;
  const RobustnessReport c = run_poisoning_campaign(b.data, spec, 5);
  EXPECT_EQ(a.ToJson(), c.ToJson());
}

TEST(CampaignTest, AccuracyModeReportsBoundsOnly) {
  const Backdoor b = LoadBackdoor();
  CampaignSpec spec;
  spec.settings.epsilon = 0.1;
  spec.x_grid = {0, 5, 10, 20};
  spec.n_trials = 3;
  const RobustnessReport r = run_poisoning_campaign(b.data, spec, 1);
  EXPECT_EQ(r.metric, Metric::kAccuracy);
  EXPECT_EQ(r.empirical_curve->size(), 1u);
  ASSERT_EQ(r.guarantee_curve.size(), 4u);
  for (size_t i = 1; i < r.guarantee_curve.size(); ++i) {
    EXPECT_LE(r.guarantee_curve[i].value, r.guarantee_curve[i - 1].value);
  }
  spec.n_trials = 1;
  EXPECT_THROW(run_poisoning_campaign(b.data, spec, 1), ArgumentError);
}

TEST(CampaignTest, MeasuredAsrRespectsBound) {
  // Two-cluster fixture, eps = 0.1, d = 4, up to 1% of the rows poisoned.
  const Backdoor b = LoadBackdoor();
  CampaignSpec spec;
  spec.settings.epsilon = 0.1;
  spec.settings.max_depth = 4;
  spec.trigger = b.trigger;
  spec.x_grid = {0, 5, 10, 15, 20};
  spec.n_trials = 50;
  const RobustnessReport r = run_poisoning_campaign(b.data, spec, 2024);
  ASSERT_EQ(r.empirical_curve->size(), r.guarantee_curve.size());
  double prev = 0;
  for (size_t i = 0; i < r.guarantee_curve.size(); ++i) {
    const auto& bound = r.guarantee_curve[i];
    const auto& measured = (*r.empirical_curve)[i];
    EXPECT_EQ(bound.x, measured.x);
    EXPECT_GE(bound.value, prev);
    EXPECT_LE(measured.value, bound.value) << "x=" << bound.x;
    prev = bound.value;
  }
}

}  // namespace
}  // namespace privatree
