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

#ifndef PARLEY_MCTS_HPP
#define PARLEY_MCTS_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "domain.hpp"
#include "gpr.hpp"

namespace parley::mcts {

struct SearchParams {
  double exploration = 0.5;        // C in the selection formula
  double widening_exponent = 0.4;  // alpha in the widening rule
  int iterations = 1000;
  int rollout_cap = 20;  // plies per simulated playout
};

enum class Mover { Self, Opponent };

constexpr Mover other(Mover m) { return m == Mover::Self ? Mover::Opponent : Mover::Self; }

/// One tree node: the bid that led here and accumulated statistics for
/// both players. Dead nodes fell below a raised pruning threshold; they
/// keep their statistics but are skipped by selection.
struct Node {
  std::optional<Bid> move;     // empty at the root
  Mover to_move = Mover::Self; // who picks the next move from this node
  std::int64_t visits = 0;
  double self_score = 0.0;
  double opp_score = 0.0;
  bool dead = false;
  std::vector<std::unique_ptr<Node>> children;

  std::int64_t live_child_count() const;
};

/// Progressive-widening rule: expand a new child iff
/// parent_visits^exponent >= child_count.
bool should_widen(std::int64_t parent_visits, std::int64_t child_count, double exponent);

/// Selection score: s/(n_i + 1) + C * n^alpha * sqrt(ln(n) / (n_i + 1)).
double uct_score(double score_sum, std::int64_t node_visits, std::int64_t total_visits,
                 double exploration, double exponent);

/// Frozen per-turn snapshot of the opponent models. next_bid is absent
/// when there is no opponent history to regress on; rollouts then fall
/// back to random opponent bids.
struct OpponentModel {
  std::optional<gp::BidForecast> next_bid;
  std::function<double(const Bid&)> utility;  // estimated opponent utility, in [0, 1]
};

struct SearchDiagnostics {
  std::int64_t iterations = 0;
  std::int64_t expansions = 0;
  std::int64_t rollout_agreements = 0;
  std::int64_t rollout_disagreements = 0;
  std::int64_t model_fallbacks = 0;    // opponent rollout bids drawn at random
  std::int64_t dead_end_iterations = 0;
};

struct SearchContext {
  const Domain& domain;
  const PreferenceProfile& own_profile;
  const OpponentModel& model;
  double prune_threshold = 0.0;
  SearchParams params;
  /// Test/diagnostic hook, called after each completed iteration.
  std::function<void(const Node& root, int iteration)> on_iteration;
};

/// Best opponent offer so far from our point of view; bids worth less
/// than this are dominated (we could simply accept instead).
double prune_threshold(std::span<const Bid> opponent_offers, const PreferenceProfile& profile);

/// Random bid with utility >= threshold, or nullopt after max_attempts.
std::optional<Bid> sample_bid_above(const Domain& domain, const PreferenceProfile& profile,
                                    double threshold, Rng& rng, int max_attempts);

/// One descent through the tree. Passing through a node replays its
/// mover's accept-or-counter decision with the same candidate draws the
/// rollouts use, so tree statistics stay consistent with simulation:
/// - Expanded: widening appended a new child; simulate from path.back().
/// - Accepted: the mover at path.back() accepted the standing bid there;
///   self_value/opp_value hold the agreement payoff to backpropagate.
/// - Exhausted: no legal bid above the pruning threshold anywhere along
///   the descent; nothing to backpropagate.
struct SelectOutcome {
  enum class Kind { Expanded, Accepted, Exhausted };
  Kind kind = Kind::Exhausted;
  std::vector<Node*> path;
  double self_value = 0.0;  // set when kind == Accepted
  double opp_value = 0.0;
};

SelectOutcome select_and_expand(Node& root, const SearchContext& ctx, Rng& rng,
                                SearchDiagnostics& diag);

/// Plays out alternating moves from a standing offer: opponent candidates
/// come from the GP forecast perturbed by its own predictive noise, our
/// candidates are random bids above the pruning threshold, and each side
/// accepts when the standing offer beats its candidate. Returns the pair
/// (own utility, modeled opponent utility), or (0, 0) at the ply cap.
std::pair<double, double> simulate(const Bid& standing_offer, Mover to_move,
                                   const SearchContext& ctx, Rng& rng,
                                   SearchDiagnostics& diag);

/// Adds one playout result to every node on the path, root included.
void backpropagate(std::span<Node* const> path, double self_value, double opp_value);

/// Re-marks nodes against a (possibly raised) threshold: any node whose
/// move now falls below it is dead and will be skipped by selection.
void refresh_pruning(Node& root, const PreferenceProfile& profile, double threshold);

struct SearchReport {
  std::optional<Bid> best;  // nullopt when the search was exhausted at the root
  std::unique_ptr<Node> root;
  SearchDiagnostics diagnostics;
};

/// Full search: `iterations` cycles of select/expand -> simulate ->
/// backpropagate, then the most-visited live root child (ties: higher
/// mean self score, then lowest index).
SearchReport search(const SearchContext& ctx, Rng& rng);

/// Diagnostic rows (depth, n, self_score, opp_score, dead) for --dump-tree.
std::vector<std::string> tree_dump_lines(const Node& root);

}  // namespace parley::mcts

#endif  // PARLEY_MCTS_HPP
