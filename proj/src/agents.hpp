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

#ifndef PARLEY_AGENTS_HPP
#define PARLEY_AGENTS_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "bayes.hpp"
#include "gpr.hpp"
#include "mcts.hpp"
#include "protocol.hpp"

namespace parley::agents {

struct MctsAgentConfig {
  mcts::SearchParams search;
  gp::KernelConfig kernel;                          // opponent bid model
  double gp_noise = gp::kDefaultNoiseVariance;
  std::size_t gp_window = gp::kDefaultWindow;
  bayes::BeliefConfig beliefs;                      // opponent utility model
};

/// Tree-search negotiator. Each turn it folds new opponent offers into
/// its belief state, freezes a GP forecast of the opponent's next bid,
/// searches for the best proposal, and accepts the standing offer when
/// it is worth at least as much as that proposal.
class MctsAgent : public Agent {
 public:
  explicit MctsAgent(MctsAgentConfig config = {});

  void init(std::shared_ptr<const Domain> domain, PreferenceProfile profile,
            std::uint64_t seed) override;
  Action act(const History& history) override;
  std::string_view name() const override { return "mcts"; }

  using TreeObserver = std::function<void(const mcts::Node& root, int round)>;
  /// Called with the finished search tree after every act.
  void set_tree_observer(TreeObserver observer) { observer_ = std::move(observer); }

  const MctsAgentConfig& config() const { return config_; }
  const mcts::SearchDiagnostics& last_diagnostics() const { return last_diagnostics_; }

 private:
  Bid fallback_bid(const History& history, double threshold) const;

  MctsAgentConfig config_;
  std::shared_ptr<const Domain> domain_;
  std::optional<PreferenceProfile> profile_;
  std::optional<bayes::BeliefState> beliefs_;
  std::optional<Rng> rng_;
  std::size_t offers_seen_ = 0;
  TreeObserver observer_;
  mcts::SearchDiagnostics last_diagnostics_;
};

/// Zero-intelligence baseline: draws a uniform random bid, accepts the
/// standing offer when it beats the draw, proposes the draw otherwise.
class RandomWalker : public Agent {
 public:
  void init(std::shared_ptr<const Domain> domain, PreferenceProfile profile,
            std::uint64_t seed) override;
  Action act(const History& history) override;
  std::string_view name() const override { return "rw"; }

 private:
  std::shared_ptr<const Domain> domain_;
  std::optional<PreferenceProfile> profile_;
  std::optional<Rng> rng_;
};

struct TftConfig {
  double floor = 0.05;  // lower clamp on the target, guards the ratio update
};

/// Reciprocal baseline with a moving utility target tau, starting at 1.
/// Each pair of consecutive opponent offers rescales tau by how much the
/// opponent conceded; proposals track tau, acceptance requires it.
class TitForTat : public Agent {
 public:
  explicit TitForTat(TftConfig config = {});

  void init(std::shared_ptr<const Domain> domain, PreferenceProfile profile,
            std::uint64_t seed) override;
  Action act(const History& history) override;
  std::string_view name() const override { return "tft"; }

  double target() const { return tau_; }
  const TftConfig& config() const { return config_; }

 private:
  TftConfig config_;
  std::shared_ptr<const Domain> domain_;
  std::optional<PreferenceProfile> profile_;
  std::optional<Rng> rng_;
  double tau_ = 1.0;
  std::size_t offers_seen_ = 0;
};

struct NiceTftConfig {
  bayes::BeliefConfig beliefs;
};

/// Cooperative baseline: estimates the Nash bid (product of own and
/// believed opponent utility), concedes from 1 toward that bid's utility
/// in proportion to the opponent's own progress toward it, and accepts
/// any standing offer at least as good as its target or next proposal.
class NiceTitForTat : public Agent {
 public:
  explicit NiceTitForTat(NiceTftConfig config = {});

  void init(std::shared_ptr<const Domain> domain, PreferenceProfile profile,
            std::uint64_t seed) override;
  Action act(const History& history) override;
  std::string_view name() const override { return "ntft"; }

  const NiceTftConfig& config() const { return config_; }
  /// Target utility and Nash-bid utility computed by the latest act.
  double last_target() const { return last_tau_; }
  double last_nash_utility() const { return last_nash_utility_; }

 private:
  NiceTftConfig config_;
  std::shared_ptr<const Domain> domain_;
  std::optional<PreferenceProfile> profile_;
  std::optional<bayes::BeliefState> beliefs_;
  std::optional<Rng> rng_;
  std::size_t offers_seen_ = 0;
  double last_tau_ = 1.0;
  double last_nash_utility_ = 0.0;
};

/// Builds an agent from a spec string: a kind ("mcts", "rw", "tft",
/// "ntft") followed by optional ":key=value,..." overrides, e.g.
/// "mcts:C=0.5,alpha=0.4,iters=1000,kernel=rqf". Unknown kinds, unknown
/// keys, and unparsable values all throw ConfigError.
std::unique_ptr<Agent> make_agent(std::string_view spec);

}  // namespace parley::agents

#endif  // PARLEY_AGENTS_HPP
