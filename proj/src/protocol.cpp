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

#include "protocol.hpp"

#include "csv.hpp"
#include "errors.hpp"

namespace parley {

Transcript run_session(Agent& agent_a, Agent& agent_b, std::shared_ptr<const Domain> domain,
                       const PreferenceProfile& profile_a, const PreferenceProfile& profile_b,
                       const SessionConfig& config) {
  if (config.max_rounds < 2) throw ConfigError("max_rounds must be >= 2");
  agent_a.init(domain, profile_a, derive_seed(config.seed, 0xA1));
  agent_b.init(domain, profile_b, derive_seed(config.seed, 0xB2));

  std::vector<Offer> offers_a, offers_b;
  Transcript transcript;
  for (int t = 1; t <= config.max_rounds; ++t) {
    const bool a_to_move = (t % 2 == 1);
    Agent& mover = a_to_move ? agent_a : agent_b;
    const char actor = a_to_move ? 'a' : 'b';
    std::vector<Offer>& own = a_to_move ? offers_a : offers_b;
    std::vector<Offer>& theirs = a_to_move ? offers_b : offers_a;

    const History history(own, theirs, t);
    Action action = mover.act(history);

    if (std::holds_alternative<AcceptAction>(action)) {
      if (theirs.empty())
        throw ProtocolError("accept with no offer on the table", actor);
      transcript.entries.push_back({t, actor, action});
      transcript.outcome = Outcome{OutcomeKind::Agreement, theirs.back().bid, t};
      return transcript;
    }

    const Bid& bid = std::get<ProposeAction>(action).bid;
    try {
      validate_bid(*domain, bid);
    } catch (const DomainError& e) {
      throw ProtocolError(std::string("invalid bid: ") + e.what(), actor);
    }
    own.push_back({t, bid});
    transcript.entries.push_back({t, actor, std::move(action)});
  }
  transcript.outcome = Outcome{OutcomeKind::NoAgreement, std::nullopt, config.max_rounds};
  return transcript;
}

std::pair<double, double> realized_utilities(const Transcript& transcript,
                                             const PreferenceProfile& profile_a,
                                             const PreferenceProfile& profile_b) {
  if (!transcript.outcome)
    throw StateError("transcript has no outcome; session did not complete");
  const Outcome& outcome = *transcript.outcome;
  if (outcome.kind == OutcomeKind::Agreement)
    return {profile_a.utility(*outcome.bid), profile_b.utility(*outcome.bid)};
  return {profile_a.reservation(), profile_b.reservation()};
}

std::vector<std::string> transcript_csv_lines(const Transcript& transcript,
                                              const PreferenceProfile& profile_a,
                                              const PreferenceProfile& profile_b) {
  const Domain& domain = profile_a.domain();
  std::vector<std::string> header{"round", "actor", "action"};
  for (const Issue& issue : domain.issues()) header.push_back(issue.name);
  header.push_back("u_self");

  std::vector<std::string> lines{csv::join_row(header)};
  std::optional<Bid> last_proposed;
  for (const TranscriptEntry& entry : transcript.entries) {
    const PreferenceProfile& actor_profile = entry.actor == 'a' ? profile_a : profile_b;
    const bool is_accept = std::holds_alternative<AcceptAction>(entry.action);
    const Bid* bid =
        is_accept ? (last_proposed ? &*last_proposed : nullptr)
                  : &std::get<ProposeAction>(entry.action).bid;
    std::vector<std::string> row{std::to_string(entry.round), std::string(1, entry.actor),
                                 is_accept ? "accept" : "propose"};
    for (std::size_t i = 0; i < domain.issue_count(); ++i)
      row.push_back(bid ? issue_value_to_string(domain.issue(i), bid->values[i]) : "");
    row.push_back(bid ? csv::format_double(actor_profile.utility(*bid)) : "");
    lines.push_back(csv::join_row(row));
    if (!is_accept) last_proposed = std::get<ProposeAction>(entry.action).bid;
  }
  if (transcript.outcome) {
    const auto [u_a, u_b] = realized_utilities(transcript, profile_a, profile_b);
    const Outcome& outcome = *transcript.outcome;
    lines.push_back(csv::join_row(
        {outcome.kind == OutcomeKind::Agreement ? "agreement" : "no_agreement",
         std::to_string(outcome.final_round), csv::format_double(u_a),
         csv::format_double(u_b)}));
  }
  return lines;
}

void write_transcript_csv(const Transcript& transcript, const PreferenceProfile& profile_a,
                          const PreferenceProfile& profile_b,
                          const std::filesystem::path& path) {
  csv::write_file(path, transcript_csv_lines(transcript, profile_a, profile_b));
}

}  // namespace parley
