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

#include "bayes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "errors.hpp"

namespace parley::bayes {

namespace {

constexpr double kEvidenceFloor = 1e-300;

PreferenceProfile sample_hypothesis(const std::shared_ptr<const Domain>& domain, Rng& rng) {
  const std::size_t n = domain->issue_count();
  std::vector<double> weights(n);
  double sum = 0.0;
  for (double& w : weights) {
    w = rng.exponential();  // Dirichlet(1,...,1): uniform on the simplex
    sum += w;
  }
  for (double& w : weights) w /= sum;

  std::vector<Valuation> valuations;
  valuations.reserve(n);
  for (const Issue& issue : domain->issues()) {
    if (issue.is_continuous()) {
      const auto& r = issue.range();
      valuations.emplace_back(TriangularPeak{rng.uniform(r.lo, r.hi)});
    } else {
      const std::size_t m = issue.label_set().labels.size();
      std::vector<std::size_t> order(m);
      std::iota(order.begin(), order.end(), std::size_t{0});
      for (std::size_t i = m; i > 1; --i)
        std::swap(order[i - 1], order[rng.uniform_index(i)]);
      LabelScores scores;
      scores.scores.resize(m);
      for (std::size_t rank = 0; rank < m; ++rank)
        scores.scores[order[rank]] =
            static_cast<double>(m - rank) / static_cast<double>(m);
      valuations.emplace_back(std::move(scores));
    }
  }
  return PreferenceProfile(domain, std::move(weights), std::move(valuations), 0.0);
}

}  // namespace

double expected_concession_utility(double rate, int t) {
  if (t < 0) throw DomainError("round index must be >= 0");
  return std::max(0.0, 1.0 - rate * static_cast<double>(t));
}

BeliefState::BeliefState(std::shared_ptr<const Domain> domain, const BeliefConfig& config,
                         std::uint64_t seed)
    : domain_(std::move(domain)), config_(config) {
  if (config_.n_hypotheses < 1) throw ConfigError("n_hypotheses must be >= 1");
  if (!(config_.concession_rate > 0.0)) throw ConfigError("concession_rate must be > 0");
  if (!(config_.sigma > 0.0)) throw ConfigError("sigma must be > 0");
  Rng rng(seed);
  hypotheses_.reserve(static_cast<std::size_t>(config_.n_hypotheses));
  for (int i = 0; i < config_.n_hypotheses; ++i)
    hypotheses_.push_back(sample_hypothesis(domain_, rng));
  probs_.assign(hypotheses_.size(), 1.0 / static_cast<double>(hypotheses_.size()));
}

BeliefState::BeliefState(std::shared_ptr<const Domain> domain,
                         std::vector<PreferenceProfile> hypotheses, const BeliefConfig& config)
    : domain_(std::move(domain)), config_(config), hypotheses_(std::move(hypotheses)) {
  if (hypotheses_.empty()) throw ConfigError("belief state needs at least one hypothesis");
  if (!(config_.concession_rate > 0.0)) throw ConfigError("concession_rate must be > 0");
  if (!(config_.sigma > 0.0)) throw ConfigError("sigma must be > 0");
  probs_.assign(hypotheses_.size(), 1.0 / static_cast<double>(hypotheses_.size()));
}

void BeliefState::update(const Bid& offer, int t) {
  validate_bid(*domain_, offer);
  const double target = expected_concession_utility(config_.concession_rate, t);
  const double inv_two_sigma_sq = 1.0 / (2.0 * config_.sigma * config_.sigma);
  std::vector<double> weighted(hypotheses_.size());
  double evidence = 0.0;
  for (std::size_t i = 0; i < hypotheses_.size(); ++i) {
    const double gap = hypotheses_[i].utility(offer) - target;
    weighted[i] = probs_[i] * std::exp(-gap * gap * inv_two_sigma_sq);
    evidence += weighted[i];
  }
  if (evidence < kEvidenceFloor) return;  // degenerate evidence, keep the prior
  for (std::size_t i = 0; i < probs_.size(); ++i) probs_[i] = weighted[i] / evidence;
}

double BeliefState::estimated_utility(const Bid& bid) const {
  double total = 0.0;
  for (std::size_t i = 0; i < hypotheses_.size(); ++i)
    total += probs_[i] * hypotheses_[i].utility(bid);
  return total;
}

}  // namespace parley::bayes
