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

#include <memory>
#include <vector>

#include "domain.hpp"
#include "errors.hpp"
#include "protocol.hpp"

using namespace parley;

namespace {

std::shared_ptr<const Domain> two_issue_domain() {
  return std::make_shared<Domain>(std::vector<Issue>{
      Issue{"x", ContinuousRange{0.0, 10.0}},
      Issue{"c", LabelSet{{"A", "B"}}},
  });
}

PreferenceProfile profile_low(std::shared_ptr<const Domain> d) {
  return PreferenceProfile(std::move(d), {0.7, 0.3},
                           {TriangularPeak{0.0}, LabelScores{{1.0, 0.2}}}, 0.0);
}

PreferenceProfile profile_high(std::shared_ptr<const Domain> d) {
  return PreferenceProfile(std::move(d), {0.6, 0.4},
                           {TriangularPeak{10.0}, LabelScores{{0.1, 1.0}}}, 0.0);
}

// Proposes its ideal bid forever.
class Stubborn : public Agent {
 public:
  void init(std::shared_ptr<const Domain>, PreferenceProfile profile, std::uint64_t) override {
    ideal_ = profile.ideal_bid();
  }
  Action act(const History&) override { return ProposeAction{ideal_}; }
  std::string_view name() const override { return "stubborn"; }

 private:
  Bid ideal_;
};

// Accepts anything on the table; proposes its ideal when opening.
class Acceptor : public Agent {
 public:
  void init(std::shared_ptr<const Domain>, PreferenceProfile profile, std::uint64_t) override {
    ideal_ = profile.ideal_bid();
  }
  Action act(const History& history) override {
    if (history.standing_offer()) return AcceptAction{};
    return ProposeAction{ideal_};
  }
  std::string_view name() const override { return "acceptor"; }

 private:
  Bid ideal_;
};

// Accepts even with nothing on the table (a protocol violation).
class EagerAcceptor : public Agent {
 public:
  void init(std::shared_ptr<const Domain>, PreferenceProfile, std::uint64_t) override {}
  Action act(const History&) override { return AcceptAction{}; }
  std::string_view name() const override { return "eager"; }
};

// Proposes a bid outside the domain.
class Cheater : public Agent {
 public:
  void init(std::shared_ptr<const Domain>, PreferenceProfile, std::uint64_t) override {}
  Action act(const History&) override { return ProposeAction{Bid{{99.0, std::int32_t{0}}}}; }
  std::string_view name() const override { return "cheater"; }
};

// Records the history it is shown each turn.
class Recorder : public Agent {
 public:
  struct Snapshot {
    std::vector<Offer> own;
    std::vector<Offer> opponent;
    int next_round = 0;
  };

  void init(std::shared_ptr<const Domain>, PreferenceProfile profile, std::uint64_t) override {
    ideal_ = profile.ideal_bid();
  }
  Action act(const History& history) override {
    Snapshot snap;
    snap.own.assign(history.own_offers().begin(), history.own_offers().end());
    snap.opponent.assign(history.opponent_offers().begin(), history.opponent_offers().end());
    snap.next_round = history.next_round();
    snapshots.push_back(std::move(snap));
    return ProposeAction{ideal_};
  }
  std::string_view name() const override { return "recorder"; }

  std::vector<Snapshot> snapshots;

 private:
  Bid ideal_;
};

SessionConfig config_with(int max_rounds, std::uint64_t seed = 0) {
  SessionConfig c;
  c.max_rounds = max_rounds;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("immediate acceptance ends at round 2 on the opening bid") {
  auto domain = two_issue_domain();
  Stubborn a;
  Acceptor b;
  const Transcript t =
      run_session(a, b, domain, profile_low(domain), profile_high(domain), config_with(2000));
  REQUIRE(t.outcome.has_value());
  CHECK(t.outcome->kind == OutcomeKind::Agreement);
  CHECK(t.outcome->final_round == 2);
  REQUIRE(t.entries.size() == 2);
  const auto* opening = std::get_if<ProposeAction>(&t.entries[0].action);
  REQUIRE(opening != nullptr);
  CHECK(*t.outcome->bid == opening->bid);
  CHECK(std::holds_alternative<AcceptAction>(t.entries[1].action));
}

TEST_CASE("two stubborn agents hit the cap with NoAgreement") {
  auto domain = two_issue_domain();
  Stubborn a, b;
  const int cap = 50;
  const Transcript t =
      run_session(a, b, domain, profile_low(domain), profile_high(domain), config_with(cap));
  REQUIRE(t.outcome.has_value());
  CHECK(t.outcome->kind == OutcomeKind::NoAgreement);
  CHECK(t.outcome->final_round == cap);
  CHECK(t.entries.size() == static_cast<std::size_t>(cap));
  CHECK_FALSE(t.outcome->bid.has_value());
}

TEST_CASE("actors strictly alternate and round indices are 1-based") {
  auto domain = two_issue_domain();
  Stubborn a, b;
  const Transcript t =
      run_session(a, b, domain, profile_low(domain), profile_high(domain), config_with(21));
  for (std::size_t i = 0; i < t.entries.size(); ++i) {
    CHECK(t.entries[i].round == static_cast<int>(i) + 1);
    CHECK(t.entries[i].actor == (i % 2 == 0 ? 'a' : 'b'));
  }
}

TEST_CASE("agents see exactly the public history") {
  auto domain = two_issue_domain();
  Recorder a, b;
  const Transcript t =
      run_session(a, b, domain, profile_low(domain), profile_high(domain), config_with(10));
  REQUIRE(a.snapshots.size() == 5);
  REQUIRE(b.snapshots.size() == 5);
  for (std::size_t turn = 0; turn < a.snapshots.size(); ++turn) {
    const auto& snap = a.snapshots[turn];
    CHECK(snap.next_round == static_cast<int>(2 * turn) + 1);
    CHECK(snap.own.size() == turn);
    CHECK(snap.opponent.size() == turn);
    // Offers replay the transcript prefix, in order, with matching rounds.
    for (std::size_t k = 0; k < snap.opponent.size(); ++k) {
      const auto& entry = t.entries[2 * k + 1];
      CHECK(snap.opponent[k].round == entry.round);
      CHECK(snap.opponent[k].bid == std::get<ProposeAction>(entry.action).bid);
    }
  }
  // b's view is shifted by one action and sees a's offers as the opponent's.
  for (std::size_t turn = 0; turn < b.snapshots.size(); ++turn) {
    const auto& snap = b.snapshots[turn];
    CHECK(snap.next_round == static_cast<int>(2 * turn) + 2);
    CHECK(snap.opponent.size() == turn + 1);
    CHECK(snap.own.size() == turn);
  }
}

TEST_CASE("accepting with nothing standing is a protocol error blamed on the actor") {
  auto domain = two_issue_domain();
  EagerAcceptor a;
  Stubborn b;
  try {
    run_session(a, b, domain, profile_low(domain), profile_high(domain), config_with(10));
    FAIL("expected ProtocolError");
  } catch (const ProtocolError& e) {
    CHECK(e.offender() == 'a');
  }
}

TEST_CASE("proposing an invalid bid is a protocol error blamed on the proposer") {
  auto domain = two_issue_domain();
  Cheater a;
  Stubborn b;
  try {
    run_session(a, b, domain, profile_low(domain), profile_high(domain), config_with(10));
    FAIL("expected ProtocolError");
  } catch (const ProtocolError& e) {
    CHECK(e.offender() == 'a');
  }
  // Same violation by the second mover is attributed to b.
  Stubborn a2;
  Cheater b2;
  try {
    run_session(a2, b2, domain, profile_low(domain), profile_high(domain), config_with(10));
    FAIL("expected ProtocolError");
  } catch (const ProtocolError& e) {
    CHECK(e.offender() == 'b');
  }
}

TEST_CASE("max_rounds below 2 is rejected") {
  auto domain = two_issue_domain();
  Stubborn a, b;
  CHECK_THROWS_AS(
      run_session(a, b, domain, profile_low(domain), profile_high(domain), config_with(1)),
      ConfigError);
}

TEST_CASE("sessions are deterministic: same seed gives identical transcripts") {
  auto domain = two_issue_domain();
  // Stateless scripted agents; determinism here exercises the engine path.
  Stubborn a1, b1, a2, b2;
  const auto t1 =
      run_session(a1, b1, domain, profile_low(domain), profile_high(domain), config_with(30, 9));
  const auto t2 =
      run_session(a2, b2, domain, profile_low(domain), profile_high(domain), config_with(30, 9));
  REQUIRE(t1.entries.size() == t2.entries.size());
  for (std::size_t i = 0; i < t1.entries.size(); ++i) {
    CHECK(t1.entries[i].action == t2.entries[i].action);
  }
  const auto lines1 = transcript_csv_lines(t1, profile_low(domain), profile_high(domain));
  const auto lines2 = transcript_csv_lines(t2, profile_low(domain), profile_high(domain));
  CHECK(lines1 == lines2);
}

TEST_CASE("realized utilities report the agreement bid's worth") {
  auto domain = two_issue_domain();
  Stubborn a;
  Acceptor b;
  const PreferenceProfile pa = profile_low(domain);
  const PreferenceProfile pb = profile_high(domain);
  const Transcript t = run_session(a, b, domain, pa, pb, config_with(10));
  const auto [ua, ub] = realized_utilities(t, pa, pb);
  REQUIRE(t.outcome->bid.has_value());
  CHECK(ua == doctest::Approx(pa.utility(*t.outcome->bid)));
  CHECK(ub == doctest::Approx(pb.utility(*t.outcome->bid)));
  CHECK(ua == doctest::Approx(1.0));  // agreement on a's ideal
}

TEST_CASE("no agreement pays each side its reservation") {
  auto domain = two_issue_domain();
  Stubborn a, b;
  const PreferenceProfile pa = profile_low(domain);
  const PreferenceProfile pb(domain, {0.6, 0.4}, {TriangularPeak{10.0}, LabelScores{{0.1, 1.0}}},
                             0.25);
  const Transcript t = run_session(a, b, domain, pa, pb, config_with(6));
  const auto [ua, ub] = realized_utilities(t, pa, pb);
  CHECK(ua == 0.0);
  CHECK(ub == 0.25);
}

TEST_CASE("realized utilities require a completed transcript") {
  auto domain = two_issue_domain();
  Transcript incomplete;
  CHECK_THROWS_AS(realized_utilities(incomplete, profile_low(domain), profile_high(domain)),
                  StateError);
}

TEST_CASE("transcript CSV carries actions, issue values, and the outcome line") {
  auto domain = two_issue_domain();
  Stubborn a;
  Acceptor b;
  const PreferenceProfile pa = profile_low(domain);
  const PreferenceProfile pb = profile_high(domain);
  const Transcript t = run_session(a, b, domain, pa, pb, config_with(10));
  const auto lines = transcript_csv_lines(t, pa, pb);
  REQUIRE(lines.size() == 4);  // header, propose, accept, outcome
  CHECK(lines[0] == "round,actor,action,x,c,u_self");
  CHECK(lines[1].rfind("1,a,propose,", 0) == 0);
  CHECK(lines[2].rfind("2,b,accept,", 0) == 0);
  CHECK(lines[3].rfind("agreement,2,", 0) == 0);
  // The accept row repeats the accepted bid and scores it for the accepter.
  CHECK(lines[2].find(",0,") != std::string::npos);  // x = 0 (a's ideal)
}
