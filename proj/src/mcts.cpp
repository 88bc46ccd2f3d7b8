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

#include "mcts.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "csv.hpp"

namespace parley::mcts {
namespace {

constexpr int kExpansionAttempts = 128;
constexpr int kRolloutAttempts = 32;

}  // namespace

std::int64_t Node::live_child_count() const {
  std::int64_t n = 0;
  for (const auto& child : children) {
    if (!child->dead) ++n;
  }
  return n;
}

bool should_widen(std::int64_t parent_visits, std::int64_t child_count, double exponent) {
  return std::pow(static_cast<double>(parent_visits), exponent) >=
         static_cast<double>(child_count);
}

double uct_score(double score_sum, std::int64_t node_visits, std::int64_t total_visits,
                 double exploration, double exponent) {
  const double n = static_cast<double>(std::max<std::int64_t>(total_visits, 1));
  const double denom = static_cast<double>(node_visits) + 1.0;
  return score_sum / denom +
         exploration * std::pow(n, exponent) * std::sqrt(std::log(n) / denom);
}

double prune_threshold(std::span<const Bid> opponent_offers, const PreferenceProfile& profile) {
  double best = 0.0;
  for (const Bid& bid : opponent_offers) {
    best = std::max(best, profile.utility(bid));
  }
  return best;
}

std::optional<Bid> sample_bid_above(const Domain& domain, const PreferenceProfile& profile,
                                    double threshold, Rng& rng, int max_attempts) {
  for (int i = 0; i < max_attempts; ++i) {
    Bid bid = random_bid(domain, rng);
    if (profile.utility(bid) >= threshold) return bid;
  }
  return std::nullopt;
}

namespace {

// Rollout variant of the filtered sampler: never fails, falls back to
// the best draw seen when nothing clears the threshold.
Bid sample_rollout_bid(const Domain& domain, const PreferenceProfile& profile,
                       double threshold, Rng& rng) {
  Bid best = random_bid(domain, rng);
  double best_utility = profile.utility(best);
  if (best_utility >= threshold) return best;
  for (int i = 1; i < kRolloutAttempts; ++i) {
    Bid bid = random_bid(domain, rng);
    const double u = profile.utility(bid);
    if (u >= threshold) return bid;
    if (u > best_utility) {
      best = bid;
      best_utility = u;
    }
  }
  return best;
}

Bid opponent_candidate(const SearchContext& ctx, Rng& rng, SearchDiagnostics& diag) {
  if (!ctx.model.next_bid) {
    ++diag.model_fallbacks;
    return random_bid(ctx.domain, rng);
  }
  const gp::BidForecast& forecast = *ctx.model.next_bid;
  std::vector<double> coords(forecast.encoded_mean.size());
  for (std::size_t j = 0; j < coords.size(); ++j) {
    const double sd = std::sqrt(std::max(0.0, forecast.encoded_variance[j]));
    coords[j] = forecast.encoded_mean[j] + sd * rng.normal();
  }
  return decode(ctx.domain, coords);
}

}  // namespace

SelectOutcome select_and_expand(Node& root, const SearchContext& ctx, Rng& rng,
                                SearchDiagnostics& diag) {
  SelectOutcome result;
  Node* node = &root;
  result.path.push_back(node);
  for (;;) {
    // Replay the mover's accept-or-counter decision against the standing
    // bid, exactly as a rollout would; an acceptance ends the iteration
    // here with the agreement payoff.
    if (node->move) {
      if (node->to_move == Mover::Opponent) {
        const double standing_value = ctx.model.utility(*node->move);
        const Bid candidate = opponent_candidate(ctx, rng, diag);
        if (standing_value >= ctx.model.utility(candidate)) {
          result.kind = SelectOutcome::Kind::Accepted;
          result.self_value = ctx.own_profile.utility(*node->move);
          result.opp_value = standing_value;
          return result;
        }
      } else {
        const double standing_value = ctx.own_profile.utility(*node->move);
        const Bid candidate =
            sample_rollout_bid(ctx.domain, ctx.own_profile, ctx.prune_threshold, rng);
        if (standing_value >= ctx.own_profile.utility(candidate)) {
          result.kind = SelectOutcome::Kind::Accepted;
          result.self_value = standing_value;
          result.opp_value = ctx.model.utility(*node->move);
          return result;
        }
      }
    }
    if (should_widen(node->visits, node->live_child_count(), ctx.params.widening_exponent)) {
      std::optional<Bid> bid = sample_bid_above(ctx.domain, ctx.own_profile,
                                                ctx.prune_threshold, rng, kExpansionAttempts);
      if (bid) {
        auto child = std::make_unique<Node>();
        child->move = std::move(*bid);
        child->to_move = other(node->to_move);
        node->children.push_back(std::move(child));
        result.path.push_back(node->children.back().get());
        result.kind = SelectOutcome::Kind::Expanded;
        return result;
      }
      // No bid clears the threshold right now; descend if possible.
    }
    Node* next = nullptr;
    double next_score = 0.0;
    for (const auto& child : node->children) {
      if (child->dead) continue;
      const double sum = node->to_move == Mover::Self ? child->self_score : child->opp_score;
      const double score = uct_score(sum, child->visits, node->visits,
                                     ctx.params.exploration, ctx.params.widening_exponent);
      if (next == nullptr || score > next_score) {
        next = child.get();
        next_score = score;
      }
    }
    if (next == nullptr) return result;  // stuck: nothing live and nothing expandable
    node = next;
    result.path.push_back(node);
  }
}

std::pair<double, double> simulate(const Bid& standing_offer, Mover to_move,
                                   const SearchContext& ctx, Rng& rng,
                                   SearchDiagnostics& diag) {
  Bid standing = standing_offer;
  Mover mover = to_move;
  for (int ply = 0; ply < ctx.params.rollout_cap; ++ply) {
    if (mover == Mover::Opponent) {
      const double standing_value = ctx.model.utility(standing);
      Bid candidate = opponent_candidate(ctx, rng, diag);
      if (standing_value >= ctx.model.utility(candidate)) {
        ++diag.rollout_agreements;
        return {ctx.own_profile.utility(standing), standing_value};
      }
      standing = std::move(candidate);
    } else {
      const double standing_value = ctx.own_profile.utility(standing);
      Bid candidate = sample_rollout_bid(ctx.domain, ctx.own_profile,
                                         ctx.prune_threshold, rng);
      if (standing_value >= ctx.own_profile.utility(candidate)) {
        ++diag.rollout_agreements;
        return {standing_value, ctx.model.utility(standing)};
      }
      standing = std::move(candidate);
    }
    mover = other(mover);
  }
  ++diag.rollout_disagreements;
  return {0.0, 0.0};
}

void backpropagate(std::span<Node* const> path, double self_value, double opp_value) {
  for (Node* node : path) {
    ++node->visits;
    node->self_score += self_value;
    node->opp_score += opp_value;
  }
}

void refresh_pruning(Node& root, const PreferenceProfile& profile, double threshold) {
  if (root.move && profile.utility(*root.move) < threshold) root.dead = true;
  for (auto& child : root.children) {
    refresh_pruning(*child, profile, threshold);
  }
}

SearchReport search(const SearchContext& ctx, Rng& rng) {
  SearchReport report;
  report.root = std::make_unique<Node>();
  report.root->to_move = Mover::Self;
  for (int it = 1; it <= ctx.params.iterations; ++it) {
    SelectOutcome outcome = select_and_expand(*report.root, ctx, rng, report.diagnostics);
    if (outcome.kind == SelectOutcome::Kind::Exhausted) {
      ++report.diagnostics.dead_end_iterations;
      // A bare root means no opening bid clears the threshold; retrying
      // with fresh draws is the only thing left, so give up instead.
      if (report.root->children.empty()) break;
      continue;
    }
    if (outcome.kind == SelectOutcome::Kind::Accepted) {
      backpropagate(outcome.path, outcome.self_value, outcome.opp_value);
    } else {
      ++report.diagnostics.expansions;
      Node* leaf = outcome.path.back();
      const auto [self_value, opp_value] = simulate(*leaf->move, leaf->to_move, ctx, rng,
                                                    report.diagnostics);
      backpropagate(outcome.path, self_value, opp_value);
    }
    ++report.diagnostics.iterations;
    if (ctx.on_iteration) ctx.on_iteration(*report.root, it);
  }

  const Node* best = nullptr;
  for (const auto& child : report.root->children) {
    if (child->dead) continue;
    if (best == nullptr) {
      best = child.get();
      continue;
    }
    if (child->visits > best->visits) {
      best = child.get();
    } else if (child->visits == best->visits) {
      const double child_mean = child->self_score / (static_cast<double>(child->visits) + 1.0);
      const double best_mean = best->self_score / (static_cast<double>(best->visits) + 1.0);
      if (child_mean > best_mean) best = child.get();
    }
  }
  if (best != nullptr) report.best = best->move;
  return report;
}

namespace {

void dump_node(const Node& node, int depth, std::vector<std::string>& out) {
  out.push_back(csv::join_row({std::to_string(depth), std::to_string(node.visits),
                               csv::format_double(node.self_score),
                               csv::format_double(node.opp_score),
                               node.dead ? "1" : "0"}));
  for (const auto& child : node.children) {
    dump_node(*child, depth + 1, out);
  }
}

}  // namespace

std::vector<std::string> tree_dump_lines(const Node& root) {
  std::vector<std::string> lines;
  lines.push_back("depth,visits,self_score,opp_score,dead");
  dump_node(root, 0, lines);
  return lines;
}

}  // namespace parley::mcts
