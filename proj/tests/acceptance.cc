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

// Acceptance run. Prints one PASS/FAIL line per criterion and exits nonzero
// if any criterion fails. Sub-checks are listed on indented lines.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "privatree/budget.h"
#include "privatree/evaluation.h"
#include "privatree/histogram.h"
#include "privatree/mechanisms.h"
#include "privatree/model_io.h"
#include "privatree/robustness.h"
#include "privatree/split.h"
#include "privatree/tree.h"
#include "testing.h"

namespace privatree {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Collects the sub-checks of one criterion.
class Criterion {
 public:
  explicit Criterion(int id, std::string title)
      : id_(id), title_(std::move(title)),
        start_(std::chrono::steady_clock::now()) {}

  void Check(bool ok, const std::string& what) {
    ok_ = ok_ && ok;
    lines_.push_back(std::string(ok ? "    ok   " : "    FAIL ") + what);
  }
  void Note(const std::string& what) { lines_.push_back("    info " + what); }

  bool Finish() const {
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start_)
                            .count();
    std::printf("%s criterion %d: %s (%.1f s)\n", ok_ ? "PASS" : "FAIL", id_,
                title_.c_str(), secs);
    for (const auto& l : lines_) std::printf("%s\n", l.c_str());
    std::fflush(stdout);
    return ok_;
  }

 private:
  int id_;
  std::string title_;
  std::chrono::steady_clock::time_point start_;
  bool ok_ = true;
  std::vector<std::string> lines_;
};

std::string Fmt(const char* format, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

// ---- 1: mechanism distributions

bool MechanismDistributions() {
  Criterion c(1, "mechanism output distributions");
  RandomStream rng(101);
  const int n = 1000000;
  for (double eps : {0.5, 1.0, 2.0}) {
    std::map<int64_t, int> counts;
    for (int i = 0; i < n; ++i) {
      ++counts[two_sided_geometric_noise(0, PrivacyBudget(eps), rng)];
    }
    const double a = std::exp(-eps);
    auto pmf = [&](int64_t k) {
      return (1 - a) / (1 + a) * std::pow(a, std::abs(static_cast<double>(k)));
    };
    double tv = 0, covered = 0;
    for (const auto& [k, cnt] : counts) {
      tv += std::abs(static_cast<double>(cnt) / n - pmf(k));
      covered += pmf(k);
    }
    tv = (tv + (1 - covered)) / 2;
    c.Check(tv < 0.005, Fmt("geometric eps=%.1f TV=%.5f < 0.005", eps, tv));
  }
  const UtilityVector u({1.0, 0.0}, 1.0);
  int pf = 0, em = 0;
  for (int i = 0; i < n; ++i) {
    pf += permute_and_flip(u, PrivacyBudget(2.0), rng) == 1;
    em += exponential_mechanism(u, PrivacyBudget(2.0), rng) == 1;
  }
  const double pf_rate = static_cast<double>(pf) / n;
  const double em_rate = static_cast<double>(em) / n;
  // Oracles: e^-1 / 2 and 1 / (1 + e).
  c.Check(std::abs(pf_rate - 0.18393972058572117) <= 0.005,
          Fmt("permute-and-flip suboptimal rate %.4f vs 0.1839", pf_rate));
  c.Check(std::abs(em_rate - 0.2689414213699951) <= 0.005,
          Fmt("exponential mechanism suboptimal rate %.4f vs 0.2689", em_rate));
  return c.Finish();
}

// ---- 2: leaf-budget arithmetic

bool BudgetMath() {
  Criterion c(2, "worst-case leaf error term and budget allocation");
  const double term = pf_worst_case_error_term(2).value;
  c.Check(std::abs(term - std::exp(-1.0)) <= 1e-6,
          Fmt("term(K=2)=%.9f vs 1/e", term));
  TrainerParams p;
  p.epsilon_total = 1;
  p.max_depth = 4;
  p.n_samples = 10000;
  p.n_classes = 2;
  p.max_leaf_error = 0.01;
  const double req = required_leaf_budget(p);
  c.Check(std::abs(req - 0.058861) <= 1e-5,
          Fmt("required_leaf_budget(2,4,1e4,0.01)=%.6f vs 0.058861", req));
  RandomStream rng(2);
  int bad = 0;
  auto rel = [](double a, double b) { return std::abs(a - b) / std::abs(b); };
  for (int i = 0; i < 10000; ++i) {
    p.epsilon_total = std::pow(10.0, -3 + 5 * rng.Uniform());
    p.max_depth = static_cast<int>(rng.UniformInt(9));
    p.n_samples = static_cast<int64_t>(std::pow(10.0, 1 + 5 * rng.Uniform()));
    p.n_classes = 2 + static_cast<int>(rng.UniformInt(9));
    const BudgetPlan b = allocate_budget(p);
    const double eps = p.epsilon_total;
    const int d = p.max_depth;
    bool ok = rel(b.eps_quantiles + d * b.eps_node_num + b.eps_leaf, eps) <= 1e-9 &&
              rel(d * b.eps_node_cat + b.eps_leaf, eps) <= 1e-9 &&
              b.eps_node_num >= 0 && b.eps_node_cat >= 0;
    if (d > 0) ok = ok && b.eps_leaf == std::min(eps / 2, required_leaf_budget(p));
    bad += !ok;
  }
  c.Check(bad == 0, Fmt("budget identities on 10^4 draws: %d violations", bad));
  return c.Finish();
}

// ---- 3: noiseless equivalence with a greedy reference

// Size-weighted Gini impurity of a two-way split, written out longhand.
double TwoClassGini(const std::array<double, 2>& l,
                    const std::array<double, 2>& r) {
  auto impurity = [](const std::array<double, 2>& s) {
    const double n = s[0] + s[1];
    if (n == 0) return 0.0;
    const double p = s[0] / n;
    return n * 2 * p * (1 - p);
  };
  const double total = l[0] + l[1] + r[0] + r[1];
  return total == 0 ? 0.5 : (impurity(l) + impurity(r)) / total;
}

bool OracleEquivalence() {
  Criterion c(3, "noiseless training equals greedy reference");
  RandomStream rng(3);
  int mismatched = 0;
  for (int rep = 0; rep < 20; ++rep) {
    const int n_features = 1 + static_cast<int>(rng.UniformInt(4));
    std::vector<int> cats(n_features);
    for (int& k : cats) k = rng.Bernoulli(0.5) ? 0 : 2 + rng.UniformInt(5);
    const int n_classes = 2 + static_cast<int>(rng.UniformInt(2));
    const size_t n = 20 + rng.UniformInt(181);
    const int depth = 1 + static_cast<int>(rng.UniformInt(4));
    const Dataset d = testing::RandomDataset(
        testing::MixedSchema(cats, n_classes), n, rng);
    const TreeModel m = fit(d, ParamsFor(d, kInf, depth), rep);
    mismatched +=
        m.nodes() != testing::GreedyReference(d, m.metadata().bin_edges, depth);
  }
  c.Check(mismatched == 0,
          Fmt("20 random datasets (n<=200): %d differ from reference",
              mismatched));

  int worse = 0;
  for (int rep = 0; rep < 100; ++rep) {
    const int k = 2 + static_cast<int>(rng.UniformInt(7));
    const auto sk = testing::MixedSchema({k}, 2);
    NoisyHistogram h(sk);
    std::vector<std::array<double, 2>> counts(k);
    for (int i = 0; i < k; ++i) {
      for (int y = 0; y < 2; ++y) {
        counts[i][y] = static_cast<double>(rng.UniformInt(30));
        h.cell(0, i)[y] = static_cast<int64_t>(counts[i][y]);
      }
    }
    const auto s = best_categorical_split(h, 0, order_categories_binary(h, 0));
    double brute = kInf;
    for (uint32_t mask = 1; mask + 1 < (1u << k); ++mask) {
      std::array<double, 2> l{0, 0}, r{0, 0};
      for (int i = 0; i < k; ++i) {
        auto& side = (mask >> i) & 1 ? l : r;
        side[0] += counts[i][0];
        side[1] += counts[i][1];
      }
      brute = std::min(brute, TwoClassGini(l, r));
    }
    worse += !s || std::abs(s->gini - brute) > 1e-12;
  }
  c.Check(worse == 0,
          Fmt("prefix scan vs exhaustive partitions, 100 histograms c<=8: "
              "%d differ",
              worse));
  return c.Finish();
}

// ---- 4: desk-scale reproduction of published numbers

bool PublishedNumbers() {
  Criterion c(4, "nursery, adult and Diabetes130US guarantee");
  ExperimentSettings s;
  s.epsilon = 0.1;
  s.max_depth = 4;
  const Dataset nursery =
      load_dataset(testing::DataPath("nursery.csv"),
                   testing::DataPath("nursery.schema.json"))
          .dataset;
  const CrossValidation n = cross_validate(nursery, s, 5, 10, 2024);
  c.Check(n.summary.mean >= 0.99,
          Fmt("nursery eps=0.1 d=4 5-fold x10: %.4f +- %.4f >= 0.99",
              n.summary.mean, n.summary.stderr_));
  const Dataset adult = load_dataset(testing::DataPath("adult.csv"),
                                     testing::DataPath("adult.schema.json"))
                            .dataset;
  const CrossValidation a = cross_validate(adult, s, 5, 10, 2024);
  c.Check(std::abs(a.summary.mean - 0.820) <= 0.03,
          Fmt("adult eps=0.1 d=4 5-fold x10: %.4f +- %.4f within 0.820 +- 0.03",
              a.summary.mean, a.summary.stderr_));
  // 0.1% of the 80% training split of 71,090 rows.
  const int64_t x = XFromFraction(0.001, 56872);
  const double bound = accuracy_lower_bound({0.01, x, 0.568});
  c.Check(x == 57 && std::abs(bound - 0.324) <= 0.005,
          Fmt("Diabetes130US eps=0.01 x=%lld: 0.568 -> %.4f vs 0.324",
              static_cast<long long>(x), bound));
  return c.Finish();
}

// ---- 5: property checks standing in for the full benchmarks

bool SeparableTrend(Criterion& c) {
  const Dataset sep = load_dataset(testing::DataPath("separable.csv"),
                                   testing::DataPath("separable.schema.json"))
                          .dataset;
  std::vector<double> means;
  std::string series;
  for (double eps : {0.01, 0.1, 1.0, kInf}) {
    ExperimentSettings s;
    s.epsilon = eps;
    s.max_depth = 4;
    means.push_back(cross_validate(sep, s, 0, 50, 5).summary.mean);
    series += Fmt(" %.4f", means.back());
  }
  bool monotone = true;
  for (size_t i = 1; i < means.size(); ++i) {
    monotone = monotone && means[i] >= means[i - 1] - 0.02;
  }
  c.Check(monotone, "separable accuracy at eps 0.01,0.1,1,inf (50 seeds):" +
                        series + " nondecreasing within 0.02");
  return monotone;
}

RobustnessReport Campaign(const Dataset& data, const TriggerSpec& trigger,
                          double eps, bool always_recurse,
                          const std::vector<int64_t>& xs) {
  CampaignSpec spec;
  spec.settings.epsilon = eps;
  spec.settings.max_depth = 4;
  spec.settings.fit_options.always_recurse = always_recurse;
  spec.trigger = trigger;
  spec.x_grid = xs;
  spec.n_trials = 200;
  return run_poisoning_campaign(data, spec, 77);
}

// Largest (mean - bound) / stderr over the grid; -inf when all means are
// at or below their bound.
double WorstExcess(const RobustnessReport& r, std::string* curve) {
  double worst = -kInf;
  for (size_t i = 0; i < r.guarantee_curve.size(); ++i) {
    const auto& m = (*r.empirical_curve)[i];
    const double bound = r.guarantee_curve[i].value;
    *curve += Fmt(" x=%lld:%.3f/%.3f", static_cast<long long>(m.x), m.value,
                  bound);
    if (m.value > bound) {
      worst = std::max(worst, m.stderr_ > 0 ? (m.value - bound) / m.stderr_
                                            : kInf);
    }
  }
  return worst;
}

bool Backdoor(Criterion& c) {
  const Dataset data = load_dataset(testing::DataPath("backdoor.csv"),
                                    testing::DataPath("backdoor.schema.json"))
                           .dataset;
  const TriggerSpec trigger = TriggerSpec::FromFile(
      testing::DataPath("backdoor.trigger.json"), data.schema());
  const size_t train = StratifiedTrainSize(data, 0.2);
  std::vector<int64_t> xs;
  for (double pct : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    xs.push_back(XFromFraction(pct / 100, train));
  }
  bool ok = true;
  double low_eps_max = 0;
  for (double eps : {0.01, 0.1}) {
    const RobustnessReport r = Campaign(data, trigger, eps, true, xs);
    std::string curve;
    const double worst = WorstExcess(r, &curve);
    const bool within = worst <= 2;
    ok = ok && within;
    c.Check(within, Fmt("eps=%g mean ASR <= bound + 2 stderr (200 trials, "
                        "mean/bound):",
                        eps) +
                        curve);
    if (eps == 0.01) {
      for (const auto& p : *r.empirical_curve) {
        low_eps_max = std::max(low_eps_max, p.value);
      }
    }
  }
  c.Check(low_eps_max <= 0.3,
          Fmt("eps=0.01 max mean ASR %.3f <= 0.3", low_eps_max));
  ok = ok && low_eps_max <= 0.3;

  const RobustnessReport r = Campaign(data, trigger, kInf, true, {0, xs.back()});
  const double asr = r.empirical_curve->back().value;
  c.Check(asr > 0.9, Fmt("eps=inf ASR at x=%lld (1%% of %zu rows) %.3f > 0.9",
                         static_cast<long long>(xs.back()), train, asr));
  ok = ok && asr > 0.9;

  // Same campaign with the raw-data stopping tests enabled. Reported only;
  // those tests read unprotected counts, so the bound need not hold there.
  const RobustnessReport raw = Campaign(data, trigger, 0.01, false, xs);
  std::string curve;
  const double worst = WorstExcess(raw, &curve);
  c.Note(Fmt("with raw stopping tests, eps=0.01 worst excess %s stderr:",
             std::isinf(worst) ? "none" : Fmt("%.2f", worst).c_str()) +
         curve);
  return ok;
}

bool Properties() {
  Criterion c(5, "privacy-accuracy trend and backdoor robustness");
  SeparableTrend(c);
  Backdoor(c);
  return c.Finish();
}

// ---- 6: serialization

bool Serialization() {
  Criterion c(6, "model JSON round trip");
  RandomStream rng(6);
  int broken = 0;
  for (int rep = 0; rep < 100; ++rep) {
    const int n_features = 1 + static_cast<int>(rng.UniformInt(4));
    std::vector<int> cats(n_features);
    for (int& k : cats) k = rng.Bernoulli(0.5) ? 0 : 2 + rng.UniformInt(6);
    const int n_classes = 2 + static_cast<int>(rng.UniformInt(3));
    const Dataset d = testing::RandomDataset(
        testing::MixedSchema(cats, n_classes), 50 + rng.UniformInt(300), rng);
    const double eps = rep % 5 == 0 ? kInf : std::pow(10.0, -1 + 2 * rng.Uniform());
    const int depth = static_cast<int>(rng.UniformInt(6));
    const TreeModel m = rep % 4 == 3
                            ? fit_random_baseline(d, ParamsFor(d, eps, depth), rep)
                            : fit(d, ParamsFor(d, eps, depth), rep);
    broken += deserialize(serialize(m)) != m;
  }
  c.Check(broken == 0, Fmt("100 random fitted models: %d differ after "
                           "round trip",
                           broken));

  ModelMetadata meta;
  meta.trainer = TrainerKind::kPrivaTree;
  meta.epsilon = kInf;
  meta.max_depth = 2;
  meta.max_leaf_error = 0.01;
  meta.seed = 3;
  meta.schema_hash = "0123456789abcdef";
  meta.n_classes = 2;
  meta.category_counts = {0, 3};
  meta.bin_edges = {BinEdges{{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}},
                    std::nullopt};
  meta.budget = {kInf, kInf, kInf, kInf, 0.36787944117144233};
  std::vector<Node> nodes(5);
  nodes[0].rule = NumericalRule{0, 0.5};
  nodes[0].left = 1;
  nodes[0].right = 2;
  nodes[1].label = 0;
  nodes[2].rule = CategoricalRule{1, {0, 2}};
  nodes[2].left = 3;
  nodes[2].right = 4;
  nodes[3].label = 1;
  nodes[4].label = 0;
  const TreeModel expected(meta, nodes);
  bool same = false;
  try {
    same = LoadModel(testing::FixturePath("stump_model.json")) == expected;
  } catch (const std::exception& e) {
    c.Note(std::string("fixture failed to load: ") + e.what());
  }
  c.Check(same, "hand-written stump fixture decodes to the expected model");
  return c.Finish();
}

}  // namespace
}  // namespace privatree

// With no argument every criterion runs; `privatree_acceptance N` runs only
// criterion N.
int main(int argc, char** argv) {
  using namespace privatree;
  bool (*criteria[])() = {MechanismDistributions, BudgetMath,
                          OracleEquivalence, PublishedNumbers, Properties,
                          Serialization};
  int only = 0;
  if (argc > 1) {
    only = std::atoi(argv[1]);
    if (only < 1 || only > 6) {
      std::fprintf(stderr, "usage: %s [criterion 1-6]\n", argv[0]);
      return 2;
    }
  }
  bool ok = true;
  for (int i = 0; i < 6; ++i) {
    if (only != 0 && only != i + 1) continue;
    try {
      ok = criteria[i]() && ok;
    } catch (const std::exception& e) {
      std::printf("FAIL criterion %d: threw %s\n", i + 1, e.what());
      ok = false;
    }
  }
  return ok ? 0 : 1;
}
