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

#include "privatree/mechanisms.h"

#include <cmath>
#include <numeric>
#include <string>

#include "privatree/errors.h"

namespace privatree {

PrivacyBudget::PrivacyBudget(double epsilon) : epsilon_(epsilon) {
  if (!(epsilon > 0)) {
    throw ArgumentError("epsilon must be positive, got " +
                        std::to_string(epsilon));
  }
}

UtilityVector::UtilityVector(std::vector<double> utilities, double sensitivity)
    : utilities_(std::move(utilities)), sensitivity_(sensitivity) {
  if (utilities_.empty()) throw ArgumentError("empty candidate list");
  if (!(sensitivity_ > 0) || !std::isfinite(sensitivity_)) {
    throw ArgumentError("sensitivity must be positive and finite");
  }
  max_ = utilities_[0];
  argmax_ = 0;
  for (size_t i = 0; i < utilities_.size(); ++i) {
    if (!std::isfinite(utilities_[i])) {
      throw ArgumentError("utilities must be finite");
    }
    if (utilities_[i] > max_) {
      max_ = utilities_[i];
      argmax_ = i;
    }
  }
}

double laplace_noise(double value, double sensitivity, PrivacyBudget budget,
                     RandomStream& rng) {
  if (!std::isfinite(value)) throw ArgumentError("value must be finite");
  if (!(sensitivity > 0) || !std::isfinite(sensitivity)) {
    throw ArgumentError("sensitivity must be positive and finite");
  }
  if (budget.is_infinite()) return value;
  const double scale = sensitivity / budget.epsilon();
  // u uniform on (-1/2, 1/2); 1 - 2|u| stays in (0, 1].
  const double u = rng.UniformPositive() - 0.5;
  const double magnitude = -scale * std::log(1.0 - 2.0 * std::fabs(u));
  return u < 0 ? value - magnitude : value + magnitude;
}

int64_t two_sided_geometric_noise(int64_t count, PrivacyBudget budget,
                                  RandomStream& rng) {
  if (budget.is_infinite()) return count;
  const double eps = budget.epsilon();
  // Pr[0] = (1-a)/(1+a) = tanh(eps/2).
  const double p_zero = std::tanh(eps / 2.0);
  if (rng.Uniform() < p_zero) return count;
  // Given non-zero, |d| - 1 is one-sided geometric with ratio a.
  const double steps = std::floor(std::log(rng.UniformPositive()) / -eps);
  constexpr double kCap = 4.0e18;
  const int64_t magnitude = 1 + static_cast<int64_t>(std::min(steps, kCap));
  return rng.Bernoulli(0.5) ? count + magnitude : count - magnitude;
}

size_t exponential_mechanism(const UtilityVector& candidates,
                             PrivacyBudget budget, RandomStream& rng) {
  if (budget.is_infinite()) return candidates.argmax();
  const double scale = budget.epsilon() / (2.0 * candidates.sensitivity());
  std::vector<double> weights(candidates.size());
  double total = 0.0;
  for (size_t i = 0; i < weights.size(); ++i) {
    weights[i] = std::exp(scale * (candidates.utilities()[i] - candidates.max()));
    total += weights[i];
  }
  double target = rng.Uniform() * total;
  for (size_t i = 0; i < weights.size(); ++i) {
    if (target < weights[i]) return i;
    target -= weights[i];
  }
  // Rounding left the target past the last positive weight.
  for (size_t i = weights.size(); i-- > 0;) {
    if (weights[i] > 0) return i;
  }
  return candidates.argmax();
}

size_t permute_and_flip(const UtilityVector& candidates, PrivacyBudget budget,
                        RandomStream& rng) {
  if (budget.is_infinite()) return candidates.argmax();
  const double scale = budget.epsilon() / (2.0 * candidates.sensitivity());
  std::vector<size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), size_t{0});
  for (size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[rng.UniformInt(i)]);
  }
  for (size_t r : order) {
    const double u = candidates.utilities()[r];
    if (u == candidates.max()) return r;
    if (rng.Bernoulli(std::exp(scale * (u - candidates.max())))) return r;
  }
  return candidates.argmax();  // unreachable: a maximal candidate exists
}

}  // namespace privatree
