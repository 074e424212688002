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

#include "cli/commands.h"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>

#include "cli/config.h"
#include "json.hpp"
#include "privatree/budget.h"
#include "privatree/dataset.h"
#include "privatree/errors.h"
#include "privatree/evaluation.h"
#include "privatree/ledger.h"
#include "privatree/model_io.h"
#include "privatree/robustness.h"
#include "privatree/tree.h"

namespace privatree::cli {
namespace {

using nlohmann::json;

json Num(double v) {
  if (std::isinf(v)) return "inf";
  return v;
}

std::string EpsText(double v) {
  if (std::isinf(v)) return "inf";
  std::ostringstream s;
  s << v;
  return s.str();
}

void WriteFile(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << content;
  out.close();
  if (!out) throw IoError("failed writing " + path);
}

LoadedDataset LoadData(const RunConfig& c) {
  RequireFile(c.data, "--data");
  RequireFile(c.schema, "--schema");
  return load_dataset(c.data, c.schema, c.label_column);
}

json LoadJson(const LoadReport& r, size_t rows) {
  return {{"rows", rows},
          {"dropped_rows", r.dropped_rows},
          {"clipped_cells", r.clipped_cells}};
}

json PlanJson(const BudgetPlan& p) {
  return {{"eps_leaf", Num(p.eps_leaf)},
          {"eps_node_num", Num(p.eps_node_num)},
          {"eps_node_cat", Num(p.eps_node_cat)},
          {"eps_quantiles", Num(p.eps_quantiles)},
          {"p_star", p.p_star}};
}

void CheckCommon(const RunConfig& c) {
  if (c.depth < 0 || c.depth > 30) {
    throw ArgumentError("--depth must be in [0, 30]");
  }
  if (!(c.max_leaf_error > 0)) {
    throw ArgumentError("--max-leaf-error must be positive");
  }
  if (c.workers < 1) throw ArgumentError("--workers must be >= 1");
}

ExperimentSettings SettingsFrom(const RunConfig& c) {
  ExperimentSettings s;
  s.trainer = c.baseline ? TrainerKind::kRandomSplits : TrainerKind::kPrivaTree;
  s.epsilon = ParseEpsilon(c.epsilon, "--epsilon");
  s.max_depth = c.depth;
  s.max_leaf_error = c.max_leaf_error;
  s.fit_options.always_recurse = c.always_recurse;
  return s;
}

// x values from --x-grid, or from --percent-grid against the training split.
std::vector<int64_t> ResolveGrid(const RunConfig& c, size_t train_size,
                                 bool have_train_size) {
  if (!c.x_grid.empty() && !c.percent_grid.empty()) {
    throw ArgumentError("give only one of --x-grid and --percent-grid");
  }
  if (!c.percent_grid.empty()) {
    if (!have_train_size) {
      throw ArgumentError("--percent-grid needs --train-size or --data");
    }
    std::vector<int64_t> xs;
    for (double pct : c.percent_grid) {
      if (!(pct >= 0 && pct <= 100)) {
        throw ArgumentError("--percent-grid values must be in [0, 100]");
      }
      xs.push_back(XFromFraction(pct / 100.0, train_size));
    }
    return xs;
  }
  if (c.x_grid.empty()) throw ArgumentError("--x-grid or --percent-grid is required");
  for (int64_t x : c.x_grid) {
    if (x < 0) throw ArgumentError("--x-grid values must be non-negative");
  }
  return c.x_grid;
}

void EmitReport(const RunConfig& c, const RobustnessReport& report,
                std::ostream& out) {
  json j = report.ToJson();
  if (!c.percent_grid.empty()) j["percent_grid"] = c.percent_grid;
  const std::string text = j.dump(2) + "\n";
  if (!c.out.empty()) WriteFile(c.out, text);
  if (!c.csv.empty()) WriteFile(c.csv, report.ToCsv());
  out << text;
}

int CmdTrain(const RunConfig& c, std::ostream& out) {
  CheckCommon(c);
  const ExperimentSettings s = SettingsFrom(c);
  if (c.out.empty()) throw ArgumentError("--out (model path) is required");
  const LoadedDataset loaded = LoadData(c);
  const Dataset& data = loaded.dataset;
  const TrainerParams params =
      ParamsFor(data, s.epsilon, s.max_depth, s.max_leaf_error);
  params.Validate();
  const uint64_t seed = ResolveSeed(c.seed);
  PrivacyLedger ledger;
  const TreeModel model =
      Train(s.trainer, data, params, seed, s.fit_options, &ledger);
  SaveModel(model, c.out);

  const PrivacyLedger::Summary sum = ledger.Summarize();
  json j;
  j["trainer"] = TrainerName(s.trainer);
  j["epsilon"] = Num(s.epsilon);
  j["max_depth"] = s.max_depth;
  j["seed"] = seed;
  j["n_samples"] = params.n_samples;
  j["n_classes"] = params.n_classes;
  j["allocation"] = PlanJson(model.metadata().budget);
  j["spend"] = {{"quantiles", Num(sum.quantiles)},
                {"node_numerical", Num(sum.node_numerical)},
                {"node_categorical", Num(sum.node_categorical)},
                {"leaf", Num(sum.leaf)},
                {"depth_used", sum.depth_used},
                {"numerical_total", Num(sum.numerical_total)},
                {"categorical_total", Num(sum.categorical_total)},
                {"total", Num(sum.total)}};
  j["mechanism_calls"] = {
      {"quantile", ledger.CountOf(Phase::kQuantile)},
      {"node_numerical", ledger.CountOf(Phase::kNodeNumerical)},
      {"node_categorical", ledger.CountOf(Phase::kNodeCategorical)},
      {"leaf", ledger.CountOf(Phase::kLeaf)}};
  j["tree"] = {{"depth", model.Depth()}, {"leaves", model.LeafCount()}};
  j["load"] = LoadJson(loaded.report, data.n_rows());
  j["model"] = c.out;
  out << j.dump(2) << "\n";
  return kExitOk;
}

TreeModel LoadMatchingModel(const RunConfig& c, const Dataset& data) {
  RequireFile(c.model, "--model");
  TreeModel model = LoadModel(c.model);
  if (model.metadata().schema_hash != data.schema().Hash()) {
    throw ArgumentError("--model was trained on a different schema");
  }
  return model;
}

int CmdPredict(const RunConfig& c, std::ostream& out) {
  const LoadedDataset loaded = LoadData(c);
  const Dataset& data = loaded.dataset;
  const TreeModel model = LoadMatchingModel(c, data);
  std::ostringstream csv;
  csv << "prediction\n";
  for (size_t i = 0; i < data.n_rows(); ++i) {
    csv << data.schema().class_labels[model.Predict(data.row(i))] << "\n";
  }
  if (!c.out.empty()) {
    WriteFile(c.out, csv.str());
  } else {
    out << csv.str();
  }
  return kExitOk;
}

int CmdEvaluate(const RunConfig& c, std::ostream& out) {
  CheckCommon(c);
  const LoadedDataset loaded = LoadData(c);
  const Dataset& data = loaded.dataset;
  json j;
  if (!c.model.empty()) {
    const TreeModel model = LoadMatchingModel(c, data);
    j["mode"] = "holdout";
    j["accuracy"] = accuracy(model, data);
    j["n_rows"] = data.n_rows();
  } else {
    const ExperimentSettings s = SettingsFrom(c);
    if (c.trials < 1) throw ArgumentError("--trials must be >= 1");
    const uint64_t seed = ResolveSeed(c.seed);
    const CrossValidation cv =
        cross_validate(data, s, c.folds, c.trials, seed, c.workers);
    j["mode"] = c.folds == 0 ? "train" : "cross_validation";
    j["trainer"] = TrainerName(s.trainer);
    j["epsilon"] = Num(s.epsilon);
    j["max_depth"] = s.max_depth;
    j["folds"] = c.folds;
    j["trials"] = c.trials;
    j["seed"] = seed;
    j["mean_accuracy"] = cv.summary.mean;
    j["stderr"] = cv.summary.stderr_;
    j["trial_means"] = cv.trial_means;
  }
  j["load"] = LoadJson(loaded.report, data.n_rows());
  const std::string text = j.dump(2) + "\n";
  if (!c.out.empty()) WriteFile(c.out, text);
  out << text;
  return kExitOk;
}

int CmdBudget(const RunConfig& c, std::ostream& out) {
  CheckCommon(c);
  TrainerParams params;
  params.epsilon_total = ParseEpsilon(c.epsilon, "--epsilon");
  params.max_depth = c.depth;
  params.max_leaf_error = c.max_leaf_error;
  params.n_classes = c.n_classes;
  if (c.n_samples) {
    params.n_samples = *c.n_samples;
  } else if (!c.data.empty()) {
    const LoadedDataset loaded = LoadData(c);
    params.n_samples = static_cast<int64_t>(loaded.dataset.n_rows());
    params.n_classes = loaded.dataset.n_classes();
  } else {
    throw ArgumentError("--n-samples or --data is required");
  }
  params.Validate();
  const BudgetPlan plan =
      c.baseline ? allocate_leaf_only(params) : allocate_budget(params);
  json j;
  j["epsilon"] = Num(params.epsilon_total);
  j["max_depth"] = params.max_depth;
  j["n_samples"] = params.n_samples;
  j["n_classes"] = params.n_classes;
  j["max_leaf_error"] = params.max_leaf_error;
  j["allocation"] = PlanJson(plan);
  j["required_leaf_budget"] = required_leaf_budget(params);
  j["worst_case_term"] = pf_worst_case_error_term(params.n_classes).value;
  out << j.dump(2) << "\n";
  return kExitOk;
}

int CmdGuarantee(const RunConfig& c, std::ostream& out) {
  const double eps = ParseEpsilon(c.epsilon, "--epsilon");
  if (!c.clean_metric) throw ArgumentError("--clean-metric is required");
  if (!(*c.clean_metric >= 0 && *c.clean_metric <= 1)) {
    throw ArgumentError("--clean-metric must be in [0, 1]");
  }
  Metric metric;
  if (c.metric == "accuracy") {
    metric = Metric::kAccuracy;
  } else if (c.metric == "asr") {
    metric = Metric::kAttackSuccess;
  } else {
    throw ArgumentError("--metric must be 'accuracy' or 'asr'");
  }
  size_t train_size = 0;
  bool have = false;
  if (c.train_size) {
    if (*c.train_size < 0) throw ArgumentError("--train-size must be >= 0");
    train_size = static_cast<size_t>(*c.train_size);
    have = true;
  } else if (!c.data.empty()) {
    const LoadedDataset loaded = LoadData(c);
    train_size = StratifiedTrainSize(loaded.dataset, c.test_fraction);
    have = true;
  }
  RobustnessReport report =
      guarantee_report(metric, eps, *c.clean_metric, c.clean_stderr,
                       ResolveGrid(c, train_size, have));
  report.train_size = train_size;
  EmitReport(c, report, out);
  return kExitOk;
}

int CmdBackdoor(const RunConfig& c, std::ostream& out) {
  CheckCommon(c);
  CampaignSpec spec;
  spec.settings = SettingsFrom(c);
  if (c.trials < 2) throw ArgumentError("--trials must be >= 2");
  if (!(c.test_fraction > 0 && c.test_fraction < 1)) {
    throw ArgumentError("--test-fraction must be in (0, 1)");
  }
  RequireFile(c.trigger, "--trigger");
  const LoadedDataset loaded = LoadData(c);
  const Dataset& data = loaded.dataset;
  spec.trigger = TriggerSpec::FromFile(c.trigger, data.schema());
  spec.n_trials = c.trials;
  spec.test_fraction = c.test_fraction;
  spec.workers = c.workers;
  spec.x_grid =
      ResolveGrid(c, StratifiedTrainSize(data, c.test_fraction), true);
  const RobustnessReport report =
      run_poisoning_campaign(data, spec, ResolveSeed(c.seed));
  EmitReport(c, report, out);
  return kExitOk;
}

int CmdSweep(const RunConfig& c, std::ostream& out) {
  CheckCommon(c);
  if (c.trials < 1) throw ArgumentError("--trials must be >= 1");
  std::vector<double> grid;
  if (c.epsilon_grid.empty()) throw ArgumentError("--epsilon-grid is required");
  for (const auto& text : c.epsilon_grid) {
    grid.push_back(ParseEpsilon(text, "--epsilon-grid"));
  }
  const LoadedDataset loaded = LoadData(c);
  const uint64_t seed = ResolveSeed(c.seed);
  std::vector<TrainerKind> trainers{TrainerKind::kPrivaTree};
  if (c.baseline) trainers.push_back(TrainerKind::kRandomSplits);

  std::ostringstream csv;
  csv.precision(10);
  csv << "trainer,epsilon,mean_accuracy,stderr\n";
  for (TrainerKind kind : trainers) {
    for (double eps : grid) {
      ExperimentSettings s;
      s.trainer = kind;
      s.epsilon = eps;
      s.max_depth = c.depth;
      s.max_leaf_error = c.max_leaf_error;
      s.fit_options.always_recurse = c.always_recurse;
      const CrossValidation cv = cross_validate(loaded.dataset, s, c.folds,
                                                c.trials, seed, c.workers);
      csv << TrainerName(kind) << ',' << EpsText(eps) << ','
          << cv.summary.mean << ',' << cv.summary.stderr_ << "\n";
    }
  }
  if (!c.out.empty()) WriteFile(c.out, csv.str());
  out << csv.str();
  return kExitOk;
}

// Option groups shared between subcommands.
void AddDataOptions(CLI::App* sub, RunConfig& c) {
  sub->add_option("--data", c.data, "CSV file with a header row");
  sub->add_option("--schema", c.schema, "schema JSON for --data");
  sub->add_option("--label-column", c.label_column,
                  "name of the class column")
      ->capture_default_str();
}

void AddTrainingOptions(CLI::App* sub, RunConfig& c) {
  sub->add_option("--epsilon", c.epsilon, "privacy budget, or 'inf'")
      ->capture_default_str();
  sub->add_option("--depth", c.depth, "maximum tree depth")
      ->capture_default_str();
  sub->add_option("--max-leaf-error", c.max_leaf_error,
                  "target expected leaf-labeling error E_max")
      ->capture_default_str();
  sub->add_option("--seed", c.seed,
                  "random seed (default: $PRIVATREE_SEED, else 0)");
  sub->add_flag("--baseline", c.baseline,
                "use the random-split comparator instead of PrivaTree");
  sub->add_flag("--always-recurse", c.always_recurse,
                "grow every branch to --depth, ignoring raw-data stopping "
                "tests");
  sub->add_option("--workers", c.workers, "worker threads")
      ->capture_default_str();
}

void AddGridOptions(CLI::App* sub, RunConfig& c) {
  sub->add_option("--x-grid", c.x_grid, "poisoned-row counts, comma separated")
      ->delimiter(',');
  sub->add_option("--percent-grid", c.percent_grid,
                  "poisoned percentages of the training split")
      ->delimiter(',');
  sub->add_option("--test-fraction", c.test_fraction,
                  "held-out share of each stratified split")
      ->capture_default_str();
  sub->add_option("--csv", c.csv, "also write the report as CSV");
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  RunConfig c;
  CLI::App app{"PrivaTree: differentially private decision trees and "
               "poisoning-robustness audits"};
  app.require_subcommand(1);
  std::map<CLI::App*, std::function<int(const RunConfig&, std::ostream&)>>
      handlers;

  auto add = [&](const char* name, const char* help, auto handler) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", c.config,
                    "JSON file of option values (command-line flags win)");
    handlers[sub] = handler;
    return sub;
  };

  CLI::App* train = add("train", "fit a model; prints the privacy ledger",
                        CmdTrain);
  AddDataOptions(train, c);
  AddTrainingOptions(train, c);
  train->add_option("--out", c.out, "model file to write");

  CLI::App* pred = add("predict", "predict class labels for a CSV", CmdPredict);
  AddDataOptions(pred, c);
  pred->add_option("--model", c.model, "model file");
  pred->add_option("--out", c.out, "write predictions here, not stdout");

  CLI::App* eval = add("evaluate",
                       "accuracy of --model on a CSV, or k-fold "
                       "cross-validation without --model",
                       CmdEvaluate);
  AddDataOptions(eval, c);
  AddTrainingOptions(eval, c);
  eval->add_option("--model", c.model, "model file");
  eval->add_option("--folds", c.folds, "folds; 0 scores on the training data")
      ->capture_default_str();
  eval->add_option("--trials", c.trials, "repetitions with fresh seeds")
      ->capture_default_str();
  eval->add_option("--out", c.out, "also write the JSON result here");

  CLI::App* budget = add("budget", "show the budget allocation", CmdBudget);
  AddDataOptions(budget, c);
  AddTrainingOptions(budget, c);
  budget->add_option("--n-samples", c.n_samples, "training rows");
  budget->add_option("--classes", c.n_classes, "number of classes")
      ->capture_default_str();

  CLI::App* guar = add("guarantee", "poisoning bounds for a clean metric",
                       CmdGuarantee);
  AddDataOptions(guar, c);
  AddGridOptions(guar, c);
  guar->add_option("--epsilon", c.epsilon, "privacy budget of the learner")
      ->capture_default_str();
  guar->add_option("--clean-metric", c.clean_metric,
                   "expected metric on clean data");
  guar->add_option("--clean-stderr", c.clean_stderr,
                   "standard error of --clean-metric");
  guar->add_option("--metric", c.metric, "accuracy or asr")
      ->capture_default_str();
  guar->add_option("--train-size", c.train_size,
                   "training-split size for --percent-grid");
  guar->add_option("--out", c.out, "also write the JSON report here");

  CLI::App* back = add("backdoor", "trigger-poisoning campaign", CmdBackdoor);
  AddDataOptions(back, c);
  AddTrainingOptions(back, c);
  AddGridOptions(back, c);
  back->add_option("--trigger", c.trigger, "trigger JSON");
  back->add_option("--trials", c.trials, "train/test splits")
      ->capture_default_str();
  back->add_option("--out", c.out, "also write the JSON report here");

  CLI::App* sweep = add("sweep", "accuracy over an epsilon grid (CSV)",
                        CmdSweep);
  AddDataOptions(sweep, c);
  AddTrainingOptions(sweep, c);
  sweep->add_option("--epsilon-grid", c.epsilon_grid,
                    "comma-separated budgets; 'inf' allowed")
      ->delimiter(',');
  sweep->add_option("--folds", c.folds, "folds; 0 scores on the training data")
      ->capture_default_str();
  sweep->add_option("--trials", c.trials, "repetitions per budget")
      ->capture_default_str();
  sweep->add_option("--out", c.out, "also write the CSV here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    for (auto& [sub, handler] : handlers) {
      if (!sub->parsed()) continue;
      if (!c.config.empty()) ApplyJsonConfig(*sub, c.config);
      return handler(c, out);
    }
    return kExitValidation;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const LoadError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const DecodeError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
}

}  // namespace privatree::cli
