// Copyright 2026 The Parley Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PARLEY_BAYES_HPP
#define PARLEY_BAYES_HPP

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "domain.hpp"

namespace parley::bayes {

struct BeliefConfig {
  int n_hypotheses = 100;
  double concession_rate = 0.005;  // utility conceded per round
  double sigma = 0.25;             // likelihood width
};

/// Opponent utility conceded down to by round t under the constant-rate
/// assumption: max(0, 1 - rate * t).
double expected_concession_utility(double rate, int t);

/// Probability-weighted set of candidate opponent profiles. Hypotheses use
/// the same triangular/table family as real profiles, so a ground-truth
/// opponent drawn from the family is learnable.
class BeliefState {
 public:
  /// Samples n_hypotheses candidates: continuous peaks uniform on each
  /// issue range, categorical tables as randomly permuted rank scores
  /// {1, (m-1)/m, ..., 1/m}, weights uniform on the simplex. Prior is
  /// uniform.
  BeliefState(std::shared_ptr<const Domain> domain, const BeliefConfig& config,
              std::uint64_t seed);

  /// Uniform prior over a caller-supplied hypothesis set.
  BeliefState(std::shared_ptr<const Domain> domain, std::vector<PreferenceProfile> hypotheses,
              const BeliefConfig& config);

  /// Bayes step on one observed offer: Gaussian likelihood of the
  /// hypothesis utility around the concession curve at round t. If the
  /// total evidence underflows, the posterior is left unchanged.
  void update(const Bid& offer, int t);

  /// Posterior-weighted opponent utility of a bid.
  double estimated_utility(const Bid& bid) const;

  std::span<const double> probabilities() const { return probs_; }
  const std::vector<PreferenceProfile>& hypotheses() const { return hypotheses_; }
  const BeliefConfig& config() const { return config_; }

 private:
  std::shared_ptr<const Domain> domain_;
  BeliefConfig config_;
  std::vector<PreferenceProfile> hypotheses_;
  std::vector<double> probs_;
};

}  // namespace parley::bayes

#endif  // PARLEY_BAYES_HPP
