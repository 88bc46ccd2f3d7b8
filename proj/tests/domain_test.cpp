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
#include <memory>
#include <string>
#include <vector>

#include "domain.hpp"
#include "errors.hpp"
#include "rng.hpp"

using namespace parley;

namespace {

Issue cont(std::string name, double lo, double hi) {
  return Issue{std::move(name), ContinuousRange{lo, hi}};
}

Issue cat(std::string name, std::vector<std::string> labels) {
  return Issue{std::move(name), LabelSet{std::move(labels)}};
}

std::shared_ptr<const Domain> make_domain(std::vector<Issue> issues) {
  return std::make_shared<Domain>(std::move(issues));
}

}  // namespace

TEST_CASE("domain rejects invalid issue sets") {
  CHECK_THROWS_AS(Domain({}), DomainError);
  CHECK_THROWS_AS(Domain({cont("x", 2.0, 1.0)}), DomainError);          // lo >= hi
  CHECK_THROWS_AS(Domain({cont("x", 0.0, 0.0)}), DomainError);          // empty interval
  CHECK_THROWS_AS(Domain({cat("c", {})}), DomainError);                 // no labels
  CHECK_THROWS_AS(Domain({cat("c", {"A", "A"})}), DomainError);         // duplicate labels
  CHECK_THROWS_AS(Domain({cont("x", 0, 1), cont("x", 0, 1)}), DomainError);  // duplicate names
}

TEST_CASE("bid validation checks arity, range, and label index") {
  auto domain = make_domain({cont("x", 0.0, 10.0), cat("c", {"A", "B"})});
  CHECK(bid_is_valid(*domain, Bid{{5.0, std::int32_t{1}}}));
  CHECK_FALSE(bid_is_valid(*domain, Bid{{5.0}}));                        // arity
  CHECK_FALSE(bid_is_valid(*domain, Bid{{11.0, std::int32_t{0}}}));      // out of range
  CHECK_FALSE(bid_is_valid(*domain, Bid{{5.0, std::int32_t{2}}}));       // bad label index
  CHECK_FALSE(bid_is_valid(*domain, Bid{{std::int32_t{0}, std::int32_t{0}}}));  // wrong kind
  CHECK_THROWS_AS(validate_bid(*domain, Bid{{-0.1, std::int32_t{0}}}), DomainError);
}

TEST_CASE("utility is 1 at the ideal bid") {
  auto domain = make_domain({cont("x", 0.0, 20.0), cat("c", {"A", "B", "C"})});
  PreferenceProfile profile(domain, {0.6, 0.4},
                            {TriangularPeak{7.5}, LabelScores{{0.3, 1.0, 0.1}}}, 0.0);
  const Bid ideal = profile.ideal_bid();
  CHECK(ideal == Bid{{7.5, std::int32_t{1}}});
  CHECK(profile.utility(ideal) == doctest::Approx(1.0));
}

TEST_CASE("utility of a half-half profile is the convex combination") {
  auto domain = make_domain({cont("x", 0.0, 1.0), cont("y", 0.0, 1.0)});
  PreferenceProfile profile(domain, {0.5, 0.5}, {TriangularPeak{1.0}, TriangularPeak{1.0}}, 0.0);
  // v1 = 1 at the peak, v2 = 0 at the far endpoint of a peak-at-endpoint ramp.
  CHECK(profile.utility(Bid{{1.0, 0.0}}) == doctest::Approx(0.5));
}

TEST_CASE("utility evaluates the triangular formula and table") {
  auto domain = make_domain({cont("x", 0.0, 20.0), cat("c", {"A", "B"})});
  PreferenceProfile profile(domain, {0.7, 0.3},
                            {TriangularPeak{10.0}, LabelScores{{1.0, 0.2}}}, 0.0);
  // Peak 10 on [0,20]: half-width 10, so v(15) = 0.5; label B scores 0.2.
  CHECK(profile.utility(Bid{{15.0, std::int32_t{1}}}) == doctest::Approx(0.41));
}

TEST_CASE("peak at an endpoint degenerates to a monotone ramp") {
  auto domain = make_domain({cont("x", 0.0, 10.0)});
  PreferenceProfile profile(domain, {1.0}, {TriangularPeak{0.0}}, 0.0);
  CHECK(profile.utility(Bid{{0.0}}) == doctest::Approx(1.0));
  CHECK(profile.utility(Bid{{5.0}}) == doctest::Approx(0.5));
  CHECK(profile.utility(Bid{{10.0}}) == doctest::Approx(0.0));
}

TEST_CASE("profile construction validates weights, tables, and reservation") {
  auto domain = make_domain({cont("x", 0.0, 1.0), cat("c", {"A", "B"})});
  const std::vector<Valuation> vals{TriangularPeak{0.5}, LabelScores{{1.0, 0.4}}};
  CHECK_THROWS_AS(PreferenceProfile(domain, {0.6, 0.5}, vals, 0.0), DomainError);   // sum != 1
  CHECK_THROWS_AS(PreferenceProfile(domain, {1.1, -0.1}, vals, 0.0), DomainError);  // negative
  CHECK_THROWS_AS(PreferenceProfile(domain, {0.5}, vals, 0.0), DomainError);        // arity
  CHECK_THROWS_AS(PreferenceProfile(domain, {0.5, 0.5}, vals, 1.0), DomainError);   // reservation
  CHECK_THROWS_AS(PreferenceProfile(domain, {0.5, 0.5}, vals, -0.1), DomainError);
  // Table whose best entry is not 1.
  CHECK_THROWS_AS(PreferenceProfile(domain, {0.5, 0.5},
                                    {TriangularPeak{0.5}, LabelScores{{0.9, 0.4}}}, 0.0),
                  DomainError);
  // Peak outside the interval.
  CHECK_THROWS_AS(PreferenceProfile(domain, {0.5, 0.5},
                                    {TriangularPeak{1.5}, LabelScores{{1.0, 0.4}}}, 0.0),
                  DomainError);
}

TEST_CASE("utility stays in [0,1] over random bids and profiles") {
  auto domain = make_domain({cont("x", -3.0, 7.0), cont("y", 0.0, 1.0), cat("c", {"A", "B", "C"})});
  Rng rng(2026);
  for (int trial = 0; trial < 200; ++trial) {
    const double w0 = rng.uniform01(), w1 = rng.uniform01(), w2 = rng.uniform01();
    const double sum = w0 + w1 + w2;
    std::vector<double> scores{rng.uniform01(), rng.uniform01(), rng.uniform01()};
    const double top = *std::max_element(scores.begin(), scores.end());
    for (double& s : scores) s /= top;  // force max entry 1
    PreferenceProfile profile(domain, {w0 / sum, w1 / sum, w2 / sum},
                              {TriangularPeak{rng.uniform(-3.0, 7.0)},
                               TriangularPeak{rng.uniform(0.0, 1.0)},
                               LabelScores{scores}},
                              0.0);
    for (int i = 0; i < 50; ++i) {
      const double u = profile.utility(random_bid(*domain, rng));
      CHECK(u >= 0.0);
      CHECK(u <= 1.0);
    }
    CHECK(profile.utility(profile.ideal_bid()) == doctest::Approx(1.0));
  }
}

TEST_CASE("utility is continuous in each continuous issue") {
  auto domain = make_domain({cont("x", 0.0, 10.0)});
  PreferenceProfile profile(domain, {1.0}, {TriangularPeak{4.0}}, 0.0);
  // Triangular slope is 1/max(p-lo, hi-p) = 1/6 here; check the Lipschitz bound.
  Rng rng(7);
  for (int i = 0; i < 1000; ++i) {
    const double x = rng.uniform(0.0, 10.0 - 1e-6);
    const double eps = 1e-6;
    const double gap = std::abs(profile.utility(Bid{{x + eps}}) - profile.utility(Bid{{x}}));
    CHECK(gap <= eps / 6.0 + 1e-15);
  }
}

TEST_CASE("encode rescales continuous issues") {
  auto domain = make_domain({cont("x", 0.0, 100.0)});
  CHECK(encode(*domain, Bid{{25.0}}) == std::vector<double>{0.25});
}

TEST_CASE("encode one-hots categorical issues") {
  auto domain = make_domain({cat("c", {"A", "B", "C"})});
  CHECK(encode(*domain, Bid{{std::int32_t{1}}}) == std::vector<double>{0.0, 1.0, 0.0});
}

TEST_CASE("encode concatenates issue blocks in canonical order") {
  auto domain = make_domain({cont("x", 0.0, 10.0), cat("c", {"X", "Y"})});
  CHECK(encode(*domain, Bid{{4.0, std::int32_t{1}}}) == std::vector<double>{0.4, 0.0, 1.0});
  CHECK(domain->encoded_size() == 3);
}

TEST_CASE("decode inverts encode for every label") {
  auto domain = make_domain({cont("x", -5.0, 5.0), cat("c", {"A", "B", "C", "D"})});
  for (std::int32_t label = 0; label < 4; ++label) {
    const Bid bid{{1.25, label}};
    CHECK(decode(*domain, encode(*domain, bid)) == bid);
  }
}

TEST_CASE("decode clamps continuous coordinates and breaks one-hot ties low") {
  auto domain = make_domain({cont("x", 0.0, 10.0), cat("c", {"A", "B"})});
  const Bid low = decode(*domain, std::vector<double>{-0.5, 0.3, 0.3});
  CHECK(low == Bid{{0.0, std::int32_t{0}}});
  const Bid high = decode(*domain, std::vector<double>{1.5, 0.1, 0.9});
  CHECK(high == Bid{{10.0, std::int32_t{1}}});
}

TEST_CASE("random_bid is deterministic under a fixed seed") {
  auto domain = make_domain({cont("x", 0.0, 1.0), cat("c", {"A", "B", "C"})});
  Rng rng1(99), rng2(99);
  for (int i = 0; i < 20; ++i) {
    CHECK(random_bid(*domain, rng1) == random_bid(*domain, rng2));
  }
}

TEST_CASE("random_bid is uniform on a continuous issue") {
  auto domain = make_domain({cont("x", 0.0, 1.0)});
  Rng rng(4);
  double sum = 0.0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) sum += std::get<double>(random_bid(*domain, rng).values[0]);
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.04));  // 0.5 +- 0.02
}

TEST_CASE("random_bid is uniform over labels") {
  auto domain = make_domain({cat("c", {"A", "B"})});
  Rng rng(5);
  int count_a = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    if (std::get<std::int32_t>(random_bid(*domain, rng).values[0]) == 0) ++count_a;
  }
  CHECK(static_cast<double>(count_a) / n == doctest::Approx(0.5).epsilon(0.06));  // +- 0.03
}

TEST_CASE("domain JSON loader round-trips and names violated fields") {
  const std::string good = R"({"issues":[
    {"name":"price","type":"continuous","lo":0.0,"hi":10.0},
    {"name":"color","type":"categorical","labels":["red","blue"]}]})";
  const Domain domain = Domain::from_json(good);
  CHECK(domain.issue_count() == 2);
  CHECK(domain.issue(0).is_continuous());
  CHECK(domain.issue(1).label_set().labels == std::vector<std::string>{"red", "blue"});

  CHECK_THROWS_AS(Domain::from_json("not json"), DomainError);
  CHECK_THROWS_AS(Domain::from_json(R"({"issues":[]})"), DomainError);
  CHECK_THROWS_WITH_AS(
      Domain::from_json(R"({"issues":[{"name":"x","type":"continuous","lo":5,"hi":1}]})"),
      doctest::Contains("lo"), DomainError);
  CHECK_THROWS_WITH_AS(Domain::from_json(R"({"issues":[{"name":"x","type":"rgb"}]})"),
                       doctest::Contains("type"), DomainError);
}

TEST_CASE("profile JSON loader validates against its domain") {
  auto domain = make_domain({cont("x", 0.0, 10.0), cat("c", {"A", "B"})});
  const std::string good = R"({"weights":[0.7,0.3],
    "valuations":[{"peak":2.0},{"table":{"A":1.0,"B":0.25}}],"reservation":0.0})";
  const PreferenceProfile profile = PreferenceProfile::from_json(domain, good);
  CHECK(profile.utility(Bid{{2.0, std::int32_t{0}}}) == doctest::Approx(1.0));
  CHECK(profile.reservation() == 0.0);

  CHECK_THROWS_WITH_AS(
      PreferenceProfile::from_json(domain, R"({"weights":[0.7,0.4],
        "valuations":[{"peak":2.0},{"table":{"A":1.0,"B":0.25}}]})"),
      doctest::Contains("weights"), DomainError);
  // Missing label in the table.
  CHECK_THROWS_AS(PreferenceProfile::from_json(domain, R"({"weights":[0.7,0.3],
        "valuations":[{"peak":2.0},{"table":{"A":1.0}}]})"),
                  DomainError);
  // Unknown label.
  CHECK_THROWS_AS(PreferenceProfile::from_json(domain, R"({"weights":[0.7,0.3],
        "valuations":[{"peak":2.0},{"table":{"A":1.0,"Z":0.2}}]})"),
                  DomainError);
}

TEST_CASE("missing files raise io errors") {
  CHECK_THROWS_AS(Domain::load("/nonexistent/path/domain.json"), IoError);
  auto domain = make_domain({cont("x", 0.0, 1.0)});
  CHECK_THROWS_AS(PreferenceProfile::load(domain, "/nonexistent/path/p.json"), IoError);
}

TEST_CASE("issue values round-trip through their text form") {
  const Issue price = cont("price", 0.0, 10.0);
  const Issue color = cat("color", {"red", "blue"});
  CHECK(issue_value_from_string(price, issue_value_to_string(price, 3.25)) == IssueValue{3.25});
  CHECK(issue_value_from_string(color, "blue") == IssueValue{std::int32_t{1}});
  CHECK(issue_value_to_string(color, std::int32_t{0}) == "red");
  CHECK_THROWS_AS(issue_value_from_string(color, "green"), DomainError);
  CHECK_THROWS_AS(issue_value_from_string(price, "not-a-number"), DomainError);
}

TEST_CASE("ideal bid breaks label ties toward the lowest index") {
  auto domain = make_domain({cat("c", {"A", "B", "C"})});
  PreferenceProfile profile(domain, {1.0}, {LabelScores{{1.0, 1.0, 0.5}}}, 0.0);
  CHECK(profile.ideal_bid() == Bid{{std::int32_t{0}}});
}
