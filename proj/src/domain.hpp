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

#ifndef PARLEY_DOMAIN_HPP
#define PARLEY_DOMAIN_HPP

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rng.hpp"

namespace parley {

/// Continuous issue over a closed interval.
struct ContinuousRange {
  double lo = 0.0;
  double hi = 1.0;
};

/// Categorical issue over an ordered set of distinct labels.
struct LabelSet {
  std::vector<std::string> labels;
};

/// One dimension of the negotiation object.
struct Issue {
  std::string name;
  std::variant<ContinuousRange, LabelSet> kind;

  bool is_continuous() const { return std::holds_alternative<ContinuousRange>(kind); }
  const ContinuousRange& range() const { return std::get<ContinuousRange>(kind); }
  const LabelSet& label_set() const { return std::get<LabelSet>(kind); }
  /// Width of this issue's block in the numeric encoding (1 or label count).
  std::size_t encoded_width() const;
};

/// One value per issue: the real value for continuous issues, the label
/// index for categorical ones.
using IssueValue = std::variant<double, std::int32_t>;

/// A complete assignment of one value to every issue; the atomic move of
/// the negotiation game.
struct Bid {
  std::vector<IssueValue> values;
  bool operator==(const Bid&) const = default;
};

/// An immutable, validated set of issues with a canonical order.
class Domain {
 public:
  explicit Domain(std::vector<Issue> issues);  // throws DomainError

  std::span<const Issue> issues() const { return issues_; }
  const Issue& issue(std::size_t i) const { return issues_[i]; }
  std::size_t issue_count() const { return issues_.size(); }
  std::size_t encoded_size() const { return encoded_size_; }

  static Domain from_json(const std::string& text);
  static std::shared_ptr<const Domain> load(const std::filesystem::path& path);

 private:
  std::vector<Issue> issues_;
  std::size_t encoded_size_ = 0;
};

void validate_bid(const Domain& domain, const Bid& bid);  // throws DomainError
bool bid_is_valid(const Domain& domain, const Bid& bid);

/// Triangular scoring for a continuous issue: 1 at the peak, falling
/// linearly to reach 0 at the farther interval endpoint.
struct TriangularPeak {
  double peak = 0.0;
};

/// Per-label scores for a categorical issue, aligned with the label order.
struct LabelScores {
  std::vector<double> scores;
};

using Valuation = std::variant<TriangularPeak, LabelScores>;

/// Score of a single issue value in [0, 1].
double valuation_score(const Issue& issue, const Valuation& valuation, const IssueValue& value);

/// Additive-weighted utility over issues, with a reservation value for
/// the no-agreement outcome. Immutable after construction.
class PreferenceProfile {
 public:
  PreferenceProfile(std::shared_ptr<const Domain> domain, std::vector<double> weights,
                    std::vector<Valuation> valuations, double reservation);

  double utility(const Bid& bid) const;         // in [0, 1]
  double reservation() const { return reservation_; }
  const Domain& domain() const { return *domain_; }
  const std::shared_ptr<const Domain>& domain_ptr() const { return domain_; }
  std::span<const double> weights() const { return weights_; }
  std::span<const Valuation> valuations() const { return valuations_; }

  /// The unique utility-1 bid: peak / best label per issue (ties to the
  /// lowest label index).
  Bid ideal_bid() const;

  static PreferenceProfile from_json(std::shared_ptr<const Domain> domain,
                                     const std::string& text);
  static PreferenceProfile load(std::shared_ptr<const Domain> domain,
                                const std::filesystem::path& path);

 private:
  std::shared_ptr<const Domain> domain_;
  std::vector<double> weights_;
  std::vector<Valuation> valuations_;
  double reservation_ = 0.0;
};

/// Numeric encoding for learning: continuous values rescaled to [0, 1],
/// categorical values one-hot. Length is Domain::encoded_size().
std::vector<double> encode(const Domain& domain, const Bid& bid);

/// Inverse of encode up to one-hot rounding: continuous coordinates are
/// clamped to [0, 1] and rescaled; one-hot blocks decode by argmax with
/// ties broken toward the lowest label index.
Bid decode(const Domain& domain, std::span<const double> coords);

/// Uniform random bid: continuous values uniform on [lo, hi], categorical
/// uniform over labels.
Bid random_bid(const Domain& domain, Rng& rng);

/// Text form of a value for CSV output (label text for categorical issues).
std::string issue_value_to_string(const Issue& issue, const IssueValue& value);

/// Parses a CSV field back into a value; throws DomainError on unknown labels.
IssueValue issue_value_from_string(const Issue& issue, const std::string& text);

}  // namespace parley

#endif  // PARLEY_DOMAIN_HPP
