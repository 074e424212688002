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

#ifndef PRIVATREE_MECHANISMS_H_
#define PRIVATREE_MECHANISMS_H_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "privatree/random.h"

namespace privatree {

// Pure epsilon-DP budget (delta is always 0). An infinite epsilon is the
// noiseless test mode: every mechanism degenerates to identity / argmax.
class PrivacyBudget {
 public:
  // Throws ArgumentError unless epsilon > 0 (NaN rejected, +inf allowed).
  explicit PrivacyBudget(double epsilon);

  static PrivacyBudget Infinite() {
    return PrivacyBudget(std::numeric_limits<double>::infinity());
  }

  double epsilon() const { return epsilon_; }
  bool is_infinite() const { return epsilon_ == kInf; }

 private:
  static constexpr double kInf = std::numeric_limits<double>::infinity();
  double epsilon_;
};

// Candidate scores for a selection mechanism plus their sensitivity.
class UtilityVector {
 public:
  // Throws ArgumentError on empty or non-finite utilities or a non-positive
  // sensitivity.
  UtilityVector(std::vector<double> utilities, double sensitivity);

  std::span<const double> utilities() const { return utilities_; }
  double sensitivity() const { return sensitivity_; }
  size_t size() const { return utilities_.size(); }
  double max() const { return max_; }
  // Lowest index attaining max().
  size_t argmax() const { return argmax_; }

 private:
  std::vector<double> utilities_;
  double sensitivity_;
  double max_;
  size_t argmax_;
};

// value + Lap(sensitivity / epsilon), sampled by inverse CDF from one uniform.
double laplace_noise(double value, double sensitivity, PrivacyBudget budget,
                     RandomStream& rng);

// count + two-sided geometric noise with Pr[d] = (1-a)/(1+a) * a^|d|,
// a = exp(-epsilon), i.e. the geometric mechanism for sensitivity-1 counts.
int64_t two_sided_geometric_noise(int64_t count, PrivacyBudget budget,
                                  RandomStream& rng);

// Returns index r with probability proportional to
// exp(epsilon * u_r / (2 * sensitivity)).
size_t exponential_mechanism(const UtilityVector& candidates,
                             PrivacyBudget budget, RandomStream& rng);

// Permute-and-flip: visit candidates in a uniformly random order and accept
// candidate r with probability exp(epsilon * (u_r - u_max) / (2 *
// sensitivity)). A maximal candidate is always accepted, so this terminates.
size_t permute_and_flip(const UtilityVector& candidates, PrivacyBudget budget,
                        RandomStream& rng);

}  // namespace privatree

#endif  // PRIVATREE_MECHANISMS_H_
