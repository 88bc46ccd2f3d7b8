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

#include "agents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "csv.hpp"
#include "errors.hpp"

namespace parley::agents {
namespace {

constexpr int kProposalSamples = 1024;
constexpr int kNashSamples = 2048;

// Seed streams so an agent's samplers and models stay decorrelated.
constexpr std::uint64_t kActionStream = 0x01;
constexpr std::uint64_t kBeliefStream = 0x02;

Bid nearest_to_target(const Domain& domain, const PreferenceProfile& profile, double target,
                      Rng& rng) {
  Bid best = random_bid(domain, rng);
  double best_gap = std::abs(profile.utility(best) - target);
  for (int i = 1; i < kProposalSamples; ++i) {
    Bid bid = random_bid(domain, rng);
    const double gap = std::abs(profile.utility(bid) - target);
    if (gap < best_gap) {
      best = std::move(bid);
      best_gap = gap;
    }
  }
  return best;
}

}  // namespace

MctsAgent::MctsAgent(MctsAgentConfig config) : config_(std::move(config)) {}

void MctsAgent::init(std::shared_ptr<const Domain> domain, PreferenceProfile profile,
                     std::uint64_t seed) {
  domain_ = std::move(domain);
  profile_.emplace(std::move(profile));
  beliefs_.emplace(domain_, config_.beliefs, derive_seed(seed, kBeliefStream));
  rng_.emplace(derive_seed(seed, kActionStream));
  offers_seen_ = 0;
  last_diagnostics_ = {};
}

Bid MctsAgent::fallback_bid(const History& history, double threshold) const {
  const Offer* best = nullptr;
  double best_utility = -1.0;
  for (const Offer& offer : history.own_offers()) {
    const double u = profile_->utility(offer.bid);
    if (u > best_utility) {
      best = &offer;
      best_utility = u;
    }
  }
  // Repeat the strongest own offer so far; restate the ideal when there
  // is none or even it is dominated by an opponent offer.
  if (best == nullptr || best_utility < threshold) return profile_->ideal_bid();
  return best->bid;
}

Action MctsAgent::act(const History& history) {
  const auto opponent = history.opponent_offers();
  for (; offers_seen_ < opponent.size(); ++offers_seen_) {
    beliefs_->update(opponent[offers_seen_].bid, static_cast<int>(offers_seen_) + 1);
  }

  std::vector<Bid> opponent_bids;
  opponent_bids.reserve(opponent.size());
  for (const Offer& offer : opponent) opponent_bids.push_back(offer.bid);
  const double threshold = mcts::prune_threshold(opponent_bids, *profile_);

  mcts::OpponentModel model;
  if (!opponent_bids.empty()) {
    model.next_bid = gp::predict_next_bid(opponent_bids, *domain_, config_.kernel,
                                          config_.gp_noise, config_.gp_window);
  }
  model.utility = [this](const Bid& bid) { return beliefs_->estimated_utility(bid); };

  mcts::SearchContext ctx{*domain_, *profile_, model, threshold, config_.search, {}};
  mcts::SearchReport report = mcts::search(ctx, *rng_);
  last_diagnostics_ = report.diagnostics;
  if (observer_) observer_(*report.root, history.next_round());

  Bid proposal = report.best ? std::move(*report.best) : fallback_bid(history, threshold);
  const auto standing = history.standing_offer();
  if (standing && profile_->utility(*standing) >= profile_->utility(proposal)) {
    return AcceptAction{};
  }
  return ProposeAction{std::move(proposal)};
}

void RandomWalker::init(std::shared_ptr<const Domain> domain, PreferenceProfile profile,
                        std::uint64_t seed) {
  domain_ = std::move(domain);
  profile_.emplace(std::move(profile));
  rng_.emplace(derive_seed(seed, kActionStream));
}

Action RandomWalker::act(const History& history) {
  Bid draw = random_bid(*domain_, *rng_);
  const auto standing = history.standing_offer();
  if (standing && profile_->utility(*standing) >= profile_->utility(draw)) {
    return AcceptAction{};
  }
  return ProposeAction{std::move(draw)};
}

TitForTat::TitForTat(TftConfig config) : config_(config) {
  if (!(config_.floor > 0.0) || config_.floor > 1.0) {
    throw ConfigError("tft floor must lie in (0, 1]");
  }
}

void TitForTat::init(std::shared_ptr<const Domain> domain, PreferenceProfile profile,
                     std::uint64_t seed) {
  domain_ = std::move(domain);
  profile_.emplace(std::move(profile));
  rng_.emplace(derive_seed(seed, kActionStream));
  tau_ = 1.0;
  offers_seen_ = 0;
}

Action TitForTat::act(const History& history) {
  const auto opponent = history.opponent_offers();
  for (; offers_seen_ < opponent.size(); ++offers_seen_) {
    if (offers_seen_ == 0) continue;  // the update needs a consecutive pair
    const double u_prev = profile_->utility(opponent[offers_seen_ - 1].bid);
    const double u_cur = profile_->utility(opponent[offers_seen_].bid);
    if (u_cur > 0.0) {
      tau_ = std::clamp(tau_ * u_prev / u_cur, config_.floor, 1.0);
    }
  }
  const auto standing = history.standing_offer();
  if (standing && profile_->utility(*standing) >= tau_) {
    return AcceptAction{};
  }
  return ProposeAction{nearest_to_target(*domain_, *profile_, tau_, *rng_)};
}

NiceTitForTat::NiceTitForTat(NiceTftConfig config) : config_(std::move(config)) {}

void NiceTitForTat::init(std::shared_ptr<const Domain> domain, PreferenceProfile profile,
                         std::uint64_t seed) {
  domain_ = std::move(domain);
  profile_.emplace(std::move(profile));
  beliefs_.emplace(domain_, config_.beliefs, derive_seed(seed, kBeliefStream));
  rng_.emplace(derive_seed(seed, kActionStream));
  offers_seen_ = 0;
}

Action NiceTitForTat::act(const History& history) {
  const auto opponent = history.opponent_offers();
  for (; offers_seen_ < opponent.size(); ++offers_seen_) {
    beliefs_->update(opponent[offers_seen_].bid, static_cast<int>(offers_seen_) + 1);
  }

  // Nash-product estimate over the believed opponent utility.
  Bid nash = random_bid(*domain_, *rng_);
  double nash_product = profile_->utility(nash) * beliefs_->estimated_utility(nash);
  for (int i = 1; i < kNashSamples; ++i) {
    Bid bid = random_bid(*domain_, *rng_);
    const double product = profile_->utility(bid) * beliefs_->estimated_utility(bid);
    if (product > nash_product) {
      nash = std::move(bid);
      nash_product = product;
    }
  }
  const double u_nash = profile_->utility(nash);

  double gamma = 0.0;
  if (!opponent.empty()) {
    const double u_first = profile_->utility(opponent.front().bid);
    const double u_cur = profile_->utility(opponent.back().bid);
    gamma = std::clamp((u_cur - u_first) / std::max(1e-6, u_nash - u_first), 0.0, 1.0);
  }
  const double tau = u_nash + (1.0 - gamma) * (1.0 - u_nash);
  last_tau_ = tau;
  last_nash_utility_ = u_nash;

  Bid proposal = nearest_to_target(*domain_, *profile_, tau, *rng_);
  const auto standing = history.standing_offer();
  if (standing &&
      profile_->utility(*standing) >= std::min(tau, profile_->utility(proposal))) {
    return AcceptAction{};
  }
  return ProposeAction{std::move(proposal)};
}

namespace {

struct ParsedSpec {
  std::string kind;
  std::vector<std::pair<std::string, std::string>> params;
};

ParsedSpec parse_spec(std::string_view spec) {
  ParsedSpec parsed;
  const auto colon = spec.find(':');
  parsed.kind = std::string(spec.substr(0, colon));
  if (colon == std::string_view::npos) return parsed;
  std::string_view rest = spec.substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    std::string_view item = rest.substr(0, comma);
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("agent spec: expected key=value, got '" + std::string(item) + "'");
    }
    parsed.params.emplace_back(std::string(item.substr(0, eq)), std::string(item.substr(eq + 1)));
  }
  return parsed;
}

double spec_double(const std::string& key, const std::string& value) {
  try {
    return csv::parse_double(value);
  } catch (const IoError&) {
    throw ConfigError("agent spec: bad numeric value for '" + key + "': '" + value + "'");
  }
}

int spec_int(const std::string& key, const std::string& value) {
  try {
    return static_cast<int>(csv::parse_int(value));
  } catch (const IoError&) {
    throw ConfigError("agent spec: bad integer value for '" + key + "': '" + value + "'");
  }
}

std::unique_ptr<Agent> make_mcts(const ParsedSpec& spec) {
  MctsAgentConfig config;
  for (const auto& [key, value] : spec.params) {
    if (key == "C") {
      config.search.exploration = spec_double(key, value);
    } else if (key == "alpha") {
      config.search.widening_exponent = spec_double(key, value);
    } else if (key == "iters") {
      config.search.iterations = spec_int(key, value);
    } else if (key == "rollout_cap") {
      config.search.rollout_cap = spec_int(key, value);
    } else if (key == "kernel") {
      config.kernel.kind = gp::kernel_kind_from_string(value);
    } else if (key == "lengthscale") {
      config.kernel.length_scale = spec_double(key, value);
    } else if (key == "kernel_alpha") {
      config.kernel.alpha = spec_double(key, value);
    } else if (key == "period") {
      config.kernel.period = spec_double(key, value);
    } else if (key == "noise") {
      config.gp_noise = spec_double(key, value);
    } else if (key == "window") {
      config.gp_window = static_cast<std::size_t>(spec_int(key, value));
    } else if (key == "nh") {
      config.beliefs.n_hypotheses = spec_int(key, value);
    } else if (key == "crate") {
      config.beliefs.concession_rate = spec_double(key, value);
    } else if (key == "sigma") {
      config.beliefs.sigma = spec_double(key, value);
    } else {
      throw ConfigError("agent spec: unknown mcts key '" + key + "'");
    }
  }
  if (config.search.iterations < 1) throw ConfigError("agent spec: iters must be >= 1");
  if (config.search.rollout_cap < 1) throw ConfigError("agent spec: rollout_cap must be >= 1");
  if (!(config.search.exploration > 0.0)) throw ConfigError("agent spec: C must be > 0");
  if (!(config.search.widening_exponent > 0.0) || !(config.search.widening_exponent < 1.0)) {
    throw ConfigError("agent spec: alpha must lie in (0, 1)");
  }
  if (config.gp_noise < 0.0) throw ConfigError("agent spec: noise must be >= 0");
  if (config.gp_window < 2) throw ConfigError("agent spec: window must be >= 2");
  return std::make_unique<MctsAgent>(std::move(config));
}

std::unique_ptr<Agent> make_ntft(const ParsedSpec& spec) {
  NiceTftConfig config;
  for (const auto& [key, value] : spec.params) {
    if (key == "nh") {
      config.beliefs.n_hypotheses = spec_int(key, value);
    } else if (key == "crate") {
      config.beliefs.concession_rate = spec_double(key, value);
    } else if (key == "sigma") {
      config.beliefs.sigma = spec_double(key, value);
    } else {
      throw ConfigError("agent spec: unknown ntft key '" + key + "'");
    }
  }
  return std::make_unique<NiceTitForTat>(std::move(config));
}

std::unique_ptr<Agent> make_tft(const ParsedSpec& spec) {
  TftConfig config;
  for (const auto& [key, value] : spec.params) {
    if (key == "floor") {
      config.floor = spec_double(key, value);
    } else {
      throw ConfigError("agent spec: unknown tft key '" + key + "'");
    }
  }
  return std::make_unique<TitForTat>(config);
}

}  // namespace

std::unique_ptr<Agent> make_agent(std::string_view spec) {
  const ParsedSpec parsed = parse_spec(spec);
  if (parsed.kind == "mcts") return make_mcts(parsed);
  if (parsed.kind == "ntft") return make_ntft(parsed);
  if (parsed.kind == "tft") return make_tft(parsed);
  if (parsed.kind == "rw") {
    if (!parsed.params.empty()) {
      throw ConfigError("agent spec: rw takes no parameters");
    }
    return std::make_unique<RandomWalker>();
  }
  throw ConfigError("agent spec: unknown agent kind '" + parsed.kind + "'");
}

}  // namespace parley::agents
