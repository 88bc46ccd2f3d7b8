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

#ifndef PARLEY_PROTOCOL_HPP
#define PARLEY_PROTOCOL_HPP

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "domain.hpp"

namespace parley {

struct AcceptAction {
  bool operator==(const AcceptAction&) const = default;
};

struct ProposeAction {
  Bid bid;
  bool operator==(const ProposeAction&) const = default;
};

/// One move of the game. Accept is only legal when an opponent offer is
/// standing.
using Action = std::variant<AcceptAction, ProposeAction>;

/// A recorded proposal: the action index (1-based) at which it was made.
struct Offer {
  int round = 0;
  Bid bid;
};

/// The public negotiation record as seen by the acting agent. Carries
/// nothing but proposals: no profiles, reservations, budgets, or clocks.
class History {
 public:
  History(std::span<const Offer> own, std::span<const Offer> opponent, int next_round)
      : own_(own), opponent_(opponent), next_round_(next_round) {}

  std::span<const Offer> own_offers() const { return own_; }
  std::span<const Offer> opponent_offers() const { return opponent_; }

  /// The opponent proposal currently on the table, empty on the opening move.
  std::optional<Bid> standing_offer() const {
    if (opponent_.empty()) return std::nullopt;
    return opponent_.back().bid;
  }

  /// Index (1-based) of the action about to be taken.
  int next_round() const { return next_round_; }

 private:
  std::span<const Offer> own_;
  std::span<const Offer> opponent_;
  int next_round_ = 1;
};

/// A negotiating agent. The engine calls init exactly once with the
/// agent's own profile, then act once per turn. Stateful agents are
/// permitted; determinism under a fixed seed is required.
class Agent {
 public:
  virtual ~Agent() = default;
  virtual void init(std::shared_ptr<const Domain> domain, PreferenceProfile profile,
                    std::uint64_t seed) = 0;
  virtual Action act(const History& history) = 0;
  virtual std::string_view name() const = 0;
};

enum class OutcomeKind { Agreement, NoAgreement };

struct Outcome {
  OutcomeKind kind = OutcomeKind::NoAgreement;
  std::optional<Bid> bid;  // set for agreements
  int final_round = 0;     // round of the accept, or the action cap
};

struct TranscriptEntry {
  int round = 0;  // t >= 1
  char actor = 'a';
  Action action;
};

/// The ordered public record of one session.
struct Transcript {
  std::vector<TranscriptEntry> entries;
  std::optional<Outcome> outcome;
};

/// Session plumbing invisible to the agents: max_rounds is a safety cap
/// that converts endless negotiation into a reportable NoAgreement, not a
/// protocol deadline.
struct SessionConfig {
  int max_rounds = 2000;  // total action cap, >= 2
  std::uint64_t seed = 0;
};

/// Runs one alternating-offers session; agent_a moves first. Throws
/// ProtocolError if an agent accepts on the opening move or proposes an
/// invalid bid.
Transcript run_session(Agent& agent_a, Agent& agent_b, std::shared_ptr<const Domain> domain,
                       const PreferenceProfile& profile_a, const PreferenceProfile& profile_b,
                       const SessionConfig& config);

/// Utility each side realized: the agreement bid's utility, or the
/// reservation value on NoAgreement. Throws StateError on an incomplete
/// transcript.
std::pair<double, double> realized_utilities(const Transcript& transcript,
                                             const PreferenceProfile& profile_a,
                                             const PreferenceProfile& profile_b);

/// CSV rows: (round, actor, action, issue values..., u_self); the final
/// line records (outcome, final_round, u_a, u_b).
std::vector<std::string> transcript_csv_lines(const Transcript& transcript,
                                              const PreferenceProfile& profile_a,
                                              const PreferenceProfile& profile_b);

void write_transcript_csv(const Transcript& transcript, const PreferenceProfile& profile_a,
                          const PreferenceProfile& profile_b,
                          const std::filesystem::path& path);

}  // namespace parley

#endif  // PARLEY_PROTOCOL_HPP
