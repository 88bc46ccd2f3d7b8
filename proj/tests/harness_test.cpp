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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "agents.hpp"
#include "domain.hpp"
#include "errors.hpp"
#include "gpr.hpp"
#include "harness.hpp"
#include "protocol.hpp"

using namespace parley;

namespace {

std::shared_ptr<const Domain> single_bid_domain() {
  return std::make_shared<Domain>(
      std::vector<Issue>{Issue{"deal", LabelSet{{"yes"}}}});
}

PreferenceProfile single_bid_profile(std::shared_ptr<const Domain> d) {
  return PreferenceProfile(std::move(d), {1.0}, {LabelScores{{1.0}}}, 0.0);
}

std::shared_ptr<const Domain> desk_domain() {
  return Domain::load(std::filesystem::path(PARLEY_DATA_DIR) / "desk_domain.json");
}

PreferenceProfile desk_profile(std::shared_ptr<const Domain> d, int index) {
  const std::string name = "desk_profile" + std::to_string(index) + ".json";
  return PreferenceProfile::load(std::move(d),
                                 std::filesystem::path(PARLEY_DATA_DIR) / name);
}

// Proposes a continuous value for the categorical issue: always invalid.
class InvalidBidder : public Agent {
 public:
  void init(std::shared_ptr<const Domain>, PreferenceProfile, std::uint64_t) override {}
  Action act(const History&) override { return ProposeAction{Bid{{0.5}}}; }
  std::string_view name() const override { return "invalid"; }
};

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::string joined(const std::vector<std::string>& lines) {
  std::string out;
  for (const std::string& line : lines) {
    out += line;
    out += '\n';
  }
  return out;
}

std::filesystem::path fresh_dir(const std::string& leaf) {
  const auto dir = std::filesystem::temp_directory_path() / ("parley_test_" + leaf);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// The same splitmix64 finalizer chain, written out independently.
std::uint64_t reference_mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

TEST_CASE("session seeds follow the documented three-round mix") {
  for (std::uint64_t master : {0ULL, 42ULL, 0xdeadbeefULL}) {
    for (int assignment : {0, 1}) {
      for (int index : {0, 1, 7, 19}) {
        std::uint64_t expected = reference_mix(master);
        expected = reference_mix(expected ^ static_cast<std::uint64_t>(assignment));
        expected = reference_mix(expected ^ static_cast<std::uint64_t>(index));
        CHECK(harness::session_seed(master, assignment, index) == expected);
      }
    }
  }
}

TEST_CASE("session seeds differ across masters, assignments, and indices") {
  std::vector<std::uint64_t> seen;
  for (std::uint64_t master : {1ULL, 2ULL}) {
    for (int assignment : {0, 1}) {
      for (int index = 0; index < 25; ++index) {
        seen.push_back(harness::session_seed(master, assignment, index));
      }
    }
  }
  std::sort(seen.begin(), seen.end());
  CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
}

TEST_CASE("moments use the population standard deviation") {
  const std::vector<double> values{0.2, 0.4, 0.6};
  const harness::Moments m = harness::moments(values);
  CHECK(m.mean == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(m.stddev == doctest::Approx(0.16329931618554518).epsilon(1e-12));

  const std::vector<double> pair{0.0, 1.0};
  CHECK(harness::moments(pair).stddev == 0.5);  // sample stddev would be 0.707

  CHECK(harness::moments({}).mean == 0.0);
  CHECK(harness::moments({}).stddev == 0.0);

  const std::vector<double> one{0.7};
  CHECK(harness::moments(one).mean == 0.7);
  CHECK(harness::moments(one).stddev == 0.0);
}

TEST_CASE("a one-bid domain settles every session in two rounds") {
  auto domain = single_bid_domain();
  const PreferenceProfile p1 = single_bid_profile(domain);
  const PreferenceProfile p2 = single_bid_profile(domain);
  harness::TournamentOptions options;
  options.agent_a = "rw";
  options.agent_b = "rw";
  options.sessions = 5;
  options.max_rounds = 50;
  const harness::TournamentResult result = harness::run_tournament(domain, p1, p2, options);

  REQUIRE(result.rows.size() == 10);
  for (const harness::SessionRow& row : result.rows) {
    CHECK(row.outcome == "agreement");
    CHECK(row.rounds == 2);
    CHECK(row.u_a == 1.0);
    CHECK(row.u_b == 1.0);
    CHECK(row.first_mover == (row.session % 2 == 0 ? 'a' : 'b'));
  }
  REQUIRE(result.aggregates.size() == 4);
  const char expected_sides[] = {'a', 'a', 'b', 'b'};
  const int expected_profiles[] = {1, 2, 1, 2};
  for (int i = 0; i < 4; ++i) {
    CHECK(result.aggregates[i].side == expected_sides[i]);
    CHECK(result.aggregates[i].profile == expected_profiles[i]);
    CHECK(result.aggregates[i].n == 5);
    CHECK(result.aggregates[i].mean == 1.0);
    CHECK(result.aggregates[i].stddev == 0.0);
    CHECK(result.aggregates[i].agreement_rate == 1.0);
  }
  CHECK(result.failed_sessions == 0);
}

TEST_CASE("identical options reproduce the session table byte for byte") {
  auto domain = desk_domain();
  const PreferenceProfile p1 = desk_profile(domain, 1);
  const PreferenceProfile p2 = desk_profile(domain, 2);
  harness::TournamentOptions options;
  options.agent_a = "rw";
  options.agent_b = "tft";
  options.sessions = 4;
  options.max_rounds = 80;
  options.seed = 2024;
  const auto first = harness::run_tournament(domain, p1, p2, options);
  const auto second = harness::run_tournament(domain, p1, p2, options);
  CHECK(harness::sessions_csv_lines(first) == harness::sessions_csv_lines(second));
  CHECK(harness::aggregates_csv_lines(first) == harness::aggregates_csv_lines(second));
  CHECK(harness::plot_data_csv_lines(first) == harness::plot_data_csv_lines(second));
}

TEST_CASE("aggregates recomputed from the session table match the reported ones") {
  auto domain = desk_domain();
  const PreferenceProfile p1 = desk_profile(domain, 1);
  const PreferenceProfile p2 = desk_profile(domain, 2);
  harness::TournamentOptions options;
  options.agent_a = "rw";
  options.agent_b = "tft";
  options.sessions = 6;
  options.max_rounds = 80;
  options.seed = 5;
  const auto result = harness::run_tournament(domain, p1, p2, options);
  const auto parsed = harness::parse_sessions_csv(harness::sessions_csv_lines(result));
  REQUIRE(parsed.size() == result.rows.size());

  for (const harness::AggregateRow& agg : result.aggregates) {
    const int assignment = (agg.side == 'a') == (agg.profile == 1) ? 0 : 1;
    std::vector<double> utilities;
    std::int64_t agreements = 0;
    for (const harness::SessionRow& row : parsed) {
      if (row.assignment != assignment || row.outcome == "error") continue;
      utilities.push_back(agg.side == 'a' ? row.u_a : row.u_b);
      if (row.outcome == "agreement") ++agreements;
    }
    REQUIRE(static_cast<std::int64_t>(utilities.size()) == agg.n);
    const harness::Moments m = harness::moments(utilities);
    CHECK(std::abs(m.mean - agg.mean) <= 1e-12);
    CHECK(std::abs(m.stddev - agg.stddev) <= 1e-12);
    CHECK(static_cast<double>(agreements) / static_cast<double>(agg.n) ==
          doctest::Approx(agg.agreement_rate).epsilon(1e-12));
  }
}

TEST_CASE("failed sessions are counted and left out of the aggregates") {
  auto domain = single_bid_domain();
  const PreferenceProfile p1 = single_bid_profile(domain);
  const PreferenceProfile p2 = single_bid_profile(domain);
  harness::TournamentOptions options;
  options.agent_a = "rw";
  options.agent_b = "rw";
  options.sessions = 4;

  // Agent B misbehaves in every even session (counting across both
  // assignments); those sessions must become error rows.
  int calls = 0;
  auto factory = [&calls](std::string_view spec) -> std::unique_ptr<Agent> {
    const int session_index = calls / 2;
    const bool making_b = calls % 2 == 1;
    ++calls;
    if (making_b && session_index % 2 == 0) return std::make_unique<InvalidBidder>();
    return agents::make_agent(spec);
  };
  const auto result = harness::run_tournament(domain, p1, p2, options, factory);

  REQUIRE(result.rows.size() == 8);
  int errors = 0;
  for (const harness::SessionRow& row : result.rows) {
    if (row.outcome == "error") {
      ++errors;
      CHECK_FALSE(row.note.empty());
    }
  }
  CHECK(errors == 4);
  CHECK(result.failed_sessions == 4);
  REQUIRE(result.aggregates.size() == 4);
  for (const harness::AggregateRow& agg : result.aggregates) {
    CHECK(agg.n == 2);
    CHECK(agg.mean == 1.0);
    CHECK(agg.agreement_rate == 1.0);
  }
}

TEST_CASE("a tournament with no surviving session exports headers and a warning") {
  auto domain = single_bid_domain();
  const PreferenceProfile p1 = single_bid_profile(domain);
  const PreferenceProfile p2 = single_bid_profile(domain);
  harness::TournamentOptions options;
  options.sessions = 2;
  auto factory = [](std::string_view) -> std::unique_ptr<Agent> {
    return std::make_unique<InvalidBidder>();
  };
  const auto result = harness::run_tournament(domain, p1, p2, options, factory);
  CHECK(result.failed_sessions == 4);
  CHECK(result.aggregates.empty());

  const auto dir = fresh_dir("empty_aggregates");
  const auto warnings = harness::export_result(result, dir);
  REQUIRE(warnings.size() == 1);
  CHECK(read_file(dir / "aggregates.csv") == "side,spec,profile,n,mean,stddev,agreement_rate\n");
  CHECK(read_file(dir / "plot_data.csv") == "agent,profile,mean,stddev\n");
  const auto sessions = read_file(dir / "sessions.csv");
  CHECK(sessions.find("error") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("the session table round-trips through its parser") {
  auto domain = desk_domain();
  const PreferenceProfile p1 = desk_profile(domain, 1);
  const PreferenceProfile p2 = desk_profile(domain, 2);
  harness::TournamentOptions options;
  options.agent_a = "rw";
  options.agent_b = "rw";
  options.sessions = 3;
  options.max_rounds = 60;
  options.seed = 9;
  const auto result = harness::run_tournament(domain, p1, p2, options);
  const auto lines = harness::sessions_csv_lines(result);
  CHECK(lines[0] == "session,assignment,first_mover,outcome,rounds,u_a,u_b,note");
  const auto parsed = harness::parse_sessions_csv(lines);
  REQUIRE(parsed.size() == result.rows.size());
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    CHECK(parsed[i].session == result.rows[i].session);
    CHECK(parsed[i].assignment == result.rows[i].assignment);
    CHECK(parsed[i].first_mover == result.rows[i].first_mover);
    CHECK(parsed[i].outcome == result.rows[i].outcome);
    CHECK(parsed[i].rounds == result.rows[i].rounds);
    CHECK(parsed[i].u_a == result.rows[i].u_a);  // to_chars round-trips exactly
    CHECK(parsed[i].u_b == result.rows[i].u_b);
    CHECK(parsed[i].note == result.rows[i].note);
  }

  const std::vector<std::string> malformed{lines[0], "0,0,a,agreement,2"};
  CHECK_THROWS_AS(harness::parse_sessions_csv(malformed), IoError);
}

TEST_CASE("exported files match the frozen golden run") {
  auto domain = desk_domain();
  const PreferenceProfile p1 = desk_profile(domain, 1);
  const PreferenceProfile p2 = desk_profile(domain, 2);
  harness::TournamentOptions options;
  options.agent_a = "rw";
  options.agent_b = "tft";
  options.sessions = 3;
  options.max_rounds = 60;
  options.seed = 7;
  const auto result = harness::run_tournament(domain, p1, p2, options);
  const auto dir = fresh_dir("golden");
  harness::export_result(result, dir);
  const std::filesystem::path golden(PARLEY_GOLDEN_DIR);
  for (const char* name : {"sessions.csv", "aggregates.csv", "plot_data.csv"}) {
    CHECK(read_file(dir / name) == read_file(golden / name));
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("recorded traces feed the kernel evaluation pipeline unchanged") {
  auto domain = desk_domain();
  const PreferenceProfile p1 = desk_profile(domain, 1);
  const PreferenceProfile p2 = desk_profile(domain, 2);
  harness::TournamentOptions options;
  options.agent_a = "rw";
  options.agent_b = "tft";
  options.sessions = 5;
  options.max_rounds = 60;
  options.seed = 12;
  const auto traces = harness::record_traces(domain, p1, p2, options);
  REQUIRE(traces.size() == 5);
  for (const auto& trace : traces) {
    for (const Bid& bid : trace) CHECK_NOTHROW(validate_bid(*domain, bid));
  }

  const auto lines = harness::traces_csv_lines(*domain, traces);
  CHECK(lines[0] == "session,round,price,delivery_days,finish");
  const auto dir = fresh_dir("traces");
  const auto path = dir / "traces.csv";
  harness::write_traces_csv(*domain, traces, path);
  const auto reread = gp::read_traces_csv(path, *domain);
  REQUIRE(reread.size() == traces.size());
  for (std::size_t i = 0; i < traces.size(); ++i) {
    REQUIRE(reread[i].size() == traces[i].size());
    for (std::size_t j = 0; j < traces[i].size(); ++j) {
      CHECK(gp::raw_bid_distance(*domain, reread[i][j], traces[i][j]) <= 1e-9);
    }
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("trace recording skips failed sessions") {
  auto domain = single_bid_domain();
  const PreferenceProfile p1 = single_bid_profile(domain);
  const PreferenceProfile p2 = single_bid_profile(domain);
  harness::TournamentOptions options;
  options.sessions = 4;
  int calls = 0;
  auto factory = [&calls](std::string_view spec) -> std::unique_ptr<Agent> {
    const int session_index = calls / 2;
    ++calls;
    if (session_index % 2 == 1) return std::make_unique<InvalidBidder>();
    return agents::make_agent(spec);
  };
  const auto traces = harness::record_traces(domain, p1, p2, options, 'b', factory);
  CHECK(traces.size() == 2);

  CHECK_THROWS_AS(harness::record_traces(domain, p1, p2, options, 'x'), ConfigError);
}

TEST_CASE("transcripts are written only when they were kept") {
  auto domain = single_bid_domain();
  const PreferenceProfile p1 = single_bid_profile(domain);
  const PreferenceProfile p2 = single_bid_profile(domain);
  harness::TournamentOptions options;
  options.agent_a = "rw";
  options.agent_b = "rw";
  options.sessions = 2;

  const auto without = harness::run_tournament(domain, p1, p2, options);
  const auto dir = fresh_dir("transcripts");
  CHECK_THROWS_AS(harness::write_transcripts(without, p1, p2, dir), StateError);

  options.keep_transcripts = true;
  const auto with = harness::run_tournament(domain, p1, p2, options);
  CHECK(harness::write_transcripts(with, p1, p2, dir) == 4);
  CHECK(std::filesystem::exists(dir / "transcript_a0_s0.csv"));
  CHECK(std::filesystem::exists(dir / "transcript_a1_s1.csv"));
  const auto text = read_file(dir / "transcript_a0_s0.csv");
  CHECK(text.rfind("round,actor,action,", 0) == 0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("swapping profiles does not tilt a symmetric matchup") {
  auto domain = desk_domain();
  const PreferenceProfile p1 = desk_profile(domain, 1);
  const PreferenceProfile p2 = desk_profile(domain, 2);
  harness::TournamentOptions options;
  options.agent_a = "rw";
  options.agent_b = "rw";
  options.sessions = 100;
  options.max_rounds = 200;
  options.seed = 77;
  const auto result = harness::run_tournament(domain, p1, p2, options);
  double mean_a_p1 = 0.0;
  double mean_b_p1 = 0.0;
  for (const harness::AggregateRow& agg : result.aggregates) {
    if (agg.profile != 1) continue;
    (agg.side == 'a' ? mean_a_p1 : mean_b_p1) = agg.mean;
  }
  CHECK(std::abs(mean_a_p1 - mean_b_p1) <= 0.1);
}

TEST_CASE("invalid tournament options are rejected") {
  auto domain = single_bid_domain();
  const PreferenceProfile p1 = single_bid_profile(domain);
  const PreferenceProfile p2 = single_bid_profile(domain);
  harness::TournamentOptions options;
  options.sessions = 0;
  CHECK_THROWS_AS(harness::run_tournament(domain, p1, p2, options), ConfigError);
  CHECK_THROWS_AS(harness::record_traces(domain, p1, p2, options), ConfigError);
}

TEST_CASE("the default config dump carries every tunable") {
  const nlohmann::json j = nlohmann::json::parse(harness::default_config_json());
  CHECK(j["mcts"]["C"] == 0.5);
  CHECK(j["mcts"]["alpha"] == 0.4);
  CHECK(j["mcts"]["iterations"] == 1000);
  CHECK(j["mcts"]["rollout_cap"] == 20);
  CHECK(j["gp"]["kernel"] == "rqf");
  CHECK(j["gp"]["noise_variance"] == 1e-4);
  CHECK(j["gp"]["window"] == 50);
  CHECK(j["bayes"]["n_hypotheses"] == 100);
  CHECK(j["bayes"]["concession_rate"] == 0.005);
  CHECK(j["bayes"]["sigma"] == 0.25);
  CHECK(j["tft"]["floor"] == 0.05);
  CHECK(j["tournament"]["sessions"] == 20);
  CHECK(j["tournament"]["max_rounds"] == 2000);
  CHECK(j["tournament"]["seed"] == 42);
}
