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

#ifndef PARLEY_HARNESS_HPP
#define PARLEY_HARNESS_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "domain.hpp"
#include "protocol.hpp"

namespace parley::harness {

struct TournamentOptions {
  std::string agent_a = "mcts";
  std::string agent_b = "rw";
  int sessions = 20;  // per profile assignment
  int max_rounds = 2000;
  std::uint64_t seed = 42;
  bool keep_transcripts = false;
  /// When set, every tree-search agent writes one search-tree CSV per
  /// move into this directory.
  std::string dump_tree_dir;
};

/// One finished (or failed) session. u_a / u_b are the realized utilities
/// of tournament agents A and B regardless of who moved first.
struct SessionRow {
  int session = 0;     // index within the assignment, 0-based
  int assignment = 0;  // 0: A holds profile 1, B profile 2; 1: swapped
  char first_mover = 'a';
  std::string outcome;  // "agreement" | "no_agreement" | "error"
  int rounds = 0;
  double u_a = 0.0;
  double u_b = 0.0;
  std::string note;  // error text for failed rows
};

struct AggregateRow {
  char side = 'a';
  std::string spec;  // agent spec string
  int profile = 1;   // profile held by this agent
  std::int64_t n = 0;
  double mean = 0.0;
  double stddev = 0.0;  // population standard deviation
  double agreement_rate = 0.0;
};

struct TournamentResult {
  std::vector<SessionRow> rows;
  std::vector<AggregateRow> aggregates;
  std::int64_t failed_sessions = 0;
  /// Present only with keep_transcripts; indexed like rows.
  std::vector<Transcript> transcripts;
};

/// Documented per-session seed: three rounds of the 64-bit mix over
/// (master, assignment, index).
std::uint64_t session_seed(std::uint64_t master, int assignment, int index);

/// Builds one agent from its spec string. The default factory is
/// agents::make_agent; tests substitute stubs to exercise failure paths.
using AgentFactory = std::function<std::unique_ptr<Agent>(std::string_view)>;

/// Runs `sessions` sessions under each profile assignment. The first
/// mover alternates with session parity (even index: agent A). A session
/// that throws ProtocolError becomes an "error" row, counted and excluded
/// from aggregates.
TournamentResult run_tournament(std::shared_ptr<const Domain> domain,
                                const PreferenceProfile& profile1,
                                const PreferenceProfile& profile2,
                                const TournamentOptions& options,
                                const AgentFactory& factory = {});

struct Moments {
  double mean = 0.0;
  double stddev = 0.0;
};

/// Mean and population standard deviation; zero for an empty span.
Moments moments(std::span<const double> values);

std::vector<std::string> sessions_csv_lines(const TournamentResult& result);
std::vector<std::string> aggregates_csv_lines(const TournamentResult& result);
/// Fig-style rows: agent,profile,mean,stddev with agent = "<side>:<spec>".
std::vector<std::string> plot_data_csv_lines(const TournamentResult& result);

/// Parses rows written by sessions_csv_lines (used to audit aggregates).
std::vector<SessionRow> parse_sessions_csv(std::span<const std::string> lines);

/// Writes sessions.csv, aggregates.csv, and plot_data.csv under out_dir;
/// returns warnings (e.g. when no session succeeded and the aggregate
/// files carry only headers).
std::vector<std::string> export_result(const TournamentResult& result,
                                       const std::filesystem::path& out_dir);

/// Writes one CSV per successful session (transcript_a<assignment>_s<n>.csv)
/// and returns the file count. Requires keep_transcripts; throws
/// StateError otherwise. In each file, actor 'a' is that session's first
/// mover.
int write_transcripts(const TournamentResult& result, const PreferenceProfile& profile1,
                      const PreferenceProfile& profile2, const std::filesystem::path& out_dir);

/// Runs `sessions` sessions under the first profile assignment only and
/// collects the chosen side's proposal sequence from each, one trace per
/// session, for the kernel evaluation pipeline.
std::vector<std::vector<Bid>> record_traces(std::shared_ptr<const Domain> domain,
                                            const PreferenceProfile& profile1,
                                            const PreferenceProfile& profile2,
                                            const TournamentOptions& options,
                                            char traced_side = 'b',
                                            const AgentFactory& factory = {});

std::vector<std::string> traces_csv_lines(const Domain& domain,
                                          std::span<const std::vector<Bid>> traces);

void write_traces_csv(const Domain& domain, std::span<const std::vector<Bid>> traces,
                      const std::filesystem::path& path);

/// Every tunable default as a JSON object, for `--print-config`.
std::string default_config_json();

}  // namespace parley::harness

#endif  // PARLEY_HARNESS_HPP
