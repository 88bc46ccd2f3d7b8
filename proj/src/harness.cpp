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

#include "harness.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include <json.hpp>

#include "agents.hpp"
#include "csv.hpp"
#include "errors.hpp"
#include "gpr.hpp"

namespace parley::harness {

std::uint64_t session_seed(std::uint64_t master, int assignment, int index) {
  std::uint64_t s = mix64(master);
  s = mix64(s ^ static_cast<std::uint64_t>(assignment));
  return mix64(s ^ static_cast<std::uint64_t>(index));
}

Moments moments(std::span<const double> values) {
  Moments m;
  if (values.empty()) return m;
  const double n = static_cast<double>(values.size());
  for (double v : values) m.mean += v;
  m.mean /= n;
  double ss = 0.0;
  for (double v : values) ss += (v - m.mean) * (v - m.mean);
  m.stddev = std::sqrt(ss / n);
  return m;
}

namespace {

const AgentFactory kDefaultFactory = [](std::string_view spec) {
  return agents::make_agent(spec);
};

void aggregate(TournamentResult& result, const TournamentOptions& options) {
  // Agent A holds profile 1 under assignment 0 and profile 2 under
  // assignment 1; agent B the reverse.
  for (char side : {'a', 'b'}) {
    for (int profile : {1, 2}) {
      const int assignment = (side == 'a') == (profile == 1) ? 0 : 1;
      std::vector<double> utilities;
      std::int64_t agreements = 0;
      for (const SessionRow& row : result.rows) {
        if (row.assignment != assignment || row.outcome == "error") continue;
        utilities.push_back(side == 'a' ? row.u_a : row.u_b);
        if (row.outcome == "agreement") ++agreements;
      }
      if (utilities.empty()) continue;
      AggregateRow agg;
      agg.side = side;
      agg.spec = side == 'a' ? options.agent_a : options.agent_b;
      agg.profile = profile;
      agg.n = static_cast<std::int64_t>(utilities.size());
      const Moments m = moments(utilities);
      agg.mean = m.mean;
      agg.stddev = m.stddev;
      agg.agreement_rate = static_cast<double>(agreements) / static_cast<double>(agg.n);
      result.aggregates.push_back(std::move(agg));
    }
  }
}

void attach_tree_dump(Agent* agent, char side, int assignment, int session,
                      const std::filesystem::path& dir) {
  auto* searcher = dynamic_cast<agents::MctsAgent*>(agent);
  if (searcher == nullptr) return;
  searcher->set_tree_observer([side, assignment, session, dir](const mcts::Node& root,
                                                               int round) {
    const std::string name = "tree_a" + std::to_string(assignment) + "_s" +
                             std::to_string(session) + "_" + std::string(1, side) + "_r" +
                             std::to_string(round) + ".csv";
    csv::write_file(dir / name, mcts::tree_dump_lines(root));
  });
}

}  // namespace

TournamentResult run_tournament(std::shared_ptr<const Domain> domain,
                                const PreferenceProfile& profile1,
                                const PreferenceProfile& profile2,
                                const TournamentOptions& options,
                                const AgentFactory& factory) {
  if (options.sessions < 1) throw ConfigError("tournament: sessions must be >= 1");
  const AgentFactory& make =
      factory ? factory : static_cast<const AgentFactory&>(kDefaultFactory);
  TournamentResult result;
  for (int assignment = 0; assignment < 2; ++assignment) {
    const PreferenceProfile& held_a = assignment == 0 ? profile1 : profile2;
    const PreferenceProfile& held_b = assignment == 0 ? profile2 : profile1;
    for (int i = 0; i < options.sessions; ++i) {
      SessionRow row;
      row.session = i;
      row.assignment = assignment;
      row.first_mover = i % 2 == 0 ? 'a' : 'b';

      auto agent_a = make(options.agent_a);
      auto agent_b = make(options.agent_b);
      if (!options.dump_tree_dir.empty()) {
        attach_tree_dump(agent_a.get(), 'a', assignment, i, options.dump_tree_dir);
        attach_tree_dump(agent_b.get(), 'b', assignment, i, options.dump_tree_dir);
      }
      SessionConfig config;
      config.max_rounds = options.max_rounds;
      config.seed = session_seed(options.seed, assignment, i);

      Transcript transcript;
      try {
        // run_session's first argument moves first; transcript actor 'a'
        // is therefore this session's first mover.
        transcript = row.first_mover == 'a'
                         ? run_session(*agent_a, *agent_b, domain, held_a, held_b, config)
                         : run_session(*agent_b, *agent_a, domain, held_b, held_a, config);
        const Outcome& outcome = *transcript.outcome;
        row.outcome = outcome.kind == OutcomeKind::Agreement ? "agreement" : "no_agreement";
        row.rounds = outcome.final_round;
        const auto [u_first, u_second] =
            row.first_mover == 'a' ? realized_utilities(transcript, held_a, held_b)
                                   : realized_utilities(transcript, held_b, held_a);
        row.u_a = row.first_mover == 'a' ? u_first : u_second;
        row.u_b = row.first_mover == 'a' ? u_second : u_first;
      } catch (const ProtocolError& e) {
        row.outcome = "error";
        row.note = e.what();
        ++result.failed_sessions;
        transcript = {};
      }
      if (options.keep_transcripts) result.transcripts.push_back(std::move(transcript));
      result.rows.push_back(std::move(row));
    }
  }
  aggregate(result, options);
  return result;
}

std::vector<std::string> sessions_csv_lines(const TournamentResult& result) {
  std::vector<std::string> lines;
  lines.push_back("session,assignment,first_mover,outcome,rounds,u_a,u_b,note");
  for (const SessionRow& row : result.rows) {
    lines.push_back(csv::join_row({std::to_string(row.session), std::to_string(row.assignment),
                                   std::string(1, row.first_mover), row.outcome,
                                   std::to_string(row.rounds), csv::format_double(row.u_a),
                                   csv::format_double(row.u_b), row.note}));
  }
  return lines;
}

std::vector<std::string> aggregates_csv_lines(const TournamentResult& result) {
  std::vector<std::string> lines;
  lines.push_back("side,spec,profile,n,mean,stddev,agreement_rate");
  for (const AggregateRow& agg : result.aggregates) {
    lines.push_back(csv::join_row({std::string(1, agg.side), agg.spec,
                                   std::to_string(agg.profile), std::to_string(agg.n),
                                   csv::format_double(agg.mean), csv::format_double(agg.stddev),
                                   csv::format_double(agg.agreement_rate)}));
  }
  return lines;
}

std::vector<std::string> plot_data_csv_lines(const TournamentResult& result) {
  std::vector<std::string> lines;
  lines.push_back("agent,profile,mean,stddev");
  for (const AggregateRow& agg : result.aggregates) {
    lines.push_back(csv::join_row({std::string(1, agg.side) + ":" + agg.spec,
                                   std::to_string(agg.profile), csv::format_double(agg.mean),
                                   csv::format_double(agg.stddev)}));
  }
  return lines;
}

std::vector<SessionRow> parse_sessions_csv(std::span<const std::string> lines) {
  std::vector<SessionRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {  // lines[0] is the header
    const auto fields = csv::split_row(lines[i]);
    if (fields.size() != 8) {
      throw IoError("sessions row " + std::to_string(i) + ": expected 8 columns, got " +
                    std::to_string(fields.size()));
    }
    SessionRow row;
    row.session = static_cast<int>(csv::parse_int(fields[0]));
    row.assignment = static_cast<int>(csv::parse_int(fields[1]));
    row.first_mover = fields[2].empty() ? 'a' : fields[2][0];
    row.outcome = fields[3];
    row.rounds = static_cast<int>(csv::parse_int(fields[4]));
    row.u_a = csv::parse_double(fields[5]);
    row.u_b = csv::parse_double(fields[6]);
    row.note = fields[7];
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::string> export_result(const TournamentResult& result,
                                       const std::filesystem::path& out_dir) {
  std::vector<std::string> warnings;
  csv::write_file(out_dir / "sessions.csv", sessions_csv_lines(result));
  csv::write_file(out_dir / "aggregates.csv", aggregates_csv_lines(result));
  csv::write_file(out_dir / "plot_data.csv", plot_data_csv_lines(result));
  if (result.aggregates.empty()) {
    warnings.push_back("no session succeeded; aggregate files contain headers only");
  }
  return warnings;
}

int write_transcripts(const TournamentResult& result, const PreferenceProfile& profile1,
                      const PreferenceProfile& profile2, const std::filesystem::path& out_dir) {
  if (result.transcripts.size() != result.rows.size()) {
    throw StateError("write_transcripts: transcripts were not kept for this run");
  }
  int written = 0;
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    const SessionRow& row = result.rows[i];
    if (row.outcome == "error") continue;
    const PreferenceProfile& held_a = row.assignment == 0 ? profile1 : profile2;
    const PreferenceProfile& held_b = row.assignment == 0 ? profile2 : profile1;
    const PreferenceProfile& first = row.first_mover == 'a' ? held_a : held_b;
    const PreferenceProfile& second = row.first_mover == 'a' ? held_b : held_a;
    const std::string name = "transcript_a" + std::to_string(row.assignment) + "_s" +
                             std::to_string(row.session) + ".csv";
    write_transcript_csv(result.transcripts[i], first, second, out_dir / name);
    ++written;
  }
  return written;
}

std::vector<std::vector<Bid>> record_traces(std::shared_ptr<const Domain> domain,
                                            const PreferenceProfile& profile1,
                                            const PreferenceProfile& profile2,
                                            const TournamentOptions& options,
                                            char traced_side, const AgentFactory& factory) {
  if (traced_side != 'a' && traced_side != 'b') {
    throw ConfigError("record_traces: traced side must be 'a' or 'b'");
  }
  if (options.sessions < 1) throw ConfigError("record_traces: sessions must be >= 1");
  const AgentFactory& make =
      factory ? factory : static_cast<const AgentFactory&>(kDefaultFactory);
  std::vector<std::vector<Bid>> traces;
  for (int i = 0; i < options.sessions; ++i) {
    auto agent_a = make(options.agent_a);
    auto agent_b = make(options.agent_b);
    SessionConfig config;
    config.max_rounds = options.max_rounds;
    config.seed = session_seed(options.seed, 0, i);
    const char first_mover = i % 2 == 0 ? 'a' : 'b';
    Transcript transcript;
    try {
      transcript = first_mover == 'a'
                       ? run_session(*agent_a, *agent_b, domain, profile1, profile2, config)
                       : run_session(*agent_b, *agent_a, domain, profile2, profile1, config);
    } catch (const ProtocolError&) {
      continue;  // failed sessions contribute no trace
    }
    const char traced_actor = first_mover == traced_side ? 'a' : 'b';
    std::vector<Bid> trace;
    for (const TranscriptEntry& entry : transcript.entries) {
      if (entry.actor != traced_actor) continue;
      if (const auto* propose = std::get_if<ProposeAction>(&entry.action)) {
        trace.push_back(propose->bid);
      }
    }
    traces.push_back(std::move(trace));
  }
  return traces;
}

std::vector<std::string> traces_csv_lines(const Domain& domain,
                                          std::span<const std::vector<Bid>> traces) {
  std::vector<std::string> lines;
  std::vector<std::string> header{"session", "round"};
  for (std::size_t i = 0; i < domain.issue_count(); ++i) {
    header.push_back(domain.issue(i).name);
  }
  lines.push_back(csv::join_row(header));
  for (std::size_t s = 0; s < traces.size(); ++s) {
    for (std::size_t r = 0; r < traces[s].size(); ++r) {
      std::vector<std::string> fields{std::to_string(s), std::to_string(r + 1)};
      for (std::size_t i = 0; i < domain.issue_count(); ++i) {
        fields.push_back(issue_value_to_string(domain.issue(i), traces[s][r].values[i]));
      }
      lines.push_back(csv::join_row(fields));
    }
  }
  return lines;
}

void write_traces_csv(const Domain& domain, std::span<const std::vector<Bid>> traces,
                      const std::filesystem::path& path) {
  csv::write_file(path, traces_csv_lines(domain, traces));
}

std::string default_config_json() {
  const agents::MctsAgentConfig mcts_defaults;
  const agents::TftConfig tft_defaults;
  const TournamentOptions tournament_defaults;
  nlohmann::ordered_json j;
  j["mcts"]["C"] = mcts_defaults.search.exploration;
  j["mcts"]["alpha"] = mcts_defaults.search.widening_exponent;
  j["mcts"]["iterations"] = mcts_defaults.search.iterations;
  j["mcts"]["rollout_cap"] = mcts_defaults.search.rollout_cap;
  j["gp"]["kernel"] = gp::to_string(mcts_defaults.kernel.kind);
  j["gp"]["noise_variance"] = mcts_defaults.gp_noise;
  j["gp"]["window"] = mcts_defaults.gp_window;
  j["bayes"]["n_hypotheses"] = mcts_defaults.beliefs.n_hypotheses;
  j["bayes"]["concession_rate"] = mcts_defaults.beliefs.concession_rate;
  j["bayes"]["sigma"] = mcts_defaults.beliefs.sigma;
  j["tft"]["floor"] = tft_defaults.floor;
  j["tournament"]["sessions"] = tournament_defaults.sessions;
  j["tournament"]["max_rounds"] = tournament_defaults.max_rounds;
  j["tournament"]["seed"] = tournament_defaults.seed;
  return j.dump(2) + "\n";
}

}  // namespace parley::harness
