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

#include "domain.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "csv.hpp"
#include "errors.hpp"

namespace parley {

namespace {

using nlohmann::json;

constexpr double kWeightSumTolerance = 1e-9;
constexpr double kScoreMaxTolerance = 1e-9;

[[noreturn]] void fail(const std::string& field, const std::string& message) {
  throw DomainError(field + ": " + message);
}

json parse_json(const std::string& text, const char* what) {
  json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) throw DomainError(std::string(what) + ": malformed JSON");
  return doc;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

std::size_t Issue::encoded_width() const {
  return is_continuous() ? 1 : label_set().labels.size();
}

Domain::Domain(std::vector<Issue> issues) : issues_(std::move(issues)) {
  if (issues_.empty()) fail("issues", "at least one issue required");
  std::unordered_set<std::string> names;
  for (std::size_t i = 0; i < issues_.size(); ++i) {
    const Issue& issue = issues_[i];
    const std::string field = "issues[" + std::to_string(i) + "]";
    if (issue.name.empty()) fail(field + ".name", "must not be empty");
    if (!names.insert(issue.name).second)
      fail(field + ".name", "duplicate issue name '" + issue.name + "'");
    if (issue.is_continuous()) {
      const auto& r = issue.range();
      if (!(std::isfinite(r.lo) && std::isfinite(r.hi)))
        fail(field, "lo and hi must be finite");
      if (!(r.lo < r.hi)) fail(field + ".lo", "lo must be < hi");
    } else {
      const auto& labels = issue.label_set().labels;
      if (labels.empty()) fail(field + ".labels", "must not be empty");
      std::unordered_set<std::string> seen;
      for (const auto& label : labels)
        if (!seen.insert(label).second)
          fail(field + ".labels", "duplicate label '" + label + "'");
    }
    encoded_size_ += issue.encoded_width();
  }
}

Domain Domain::from_json(const std::string& text) {
  json doc = parse_json(text, "domain");
  if (!doc.is_object() || !doc.contains("issues")) fail("issues", "missing");
  const json& arr = doc["issues"];
  if (!arr.is_array()) fail("issues", "must be an array");
  std::vector<Issue> issues;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const json& item = arr[i];
    const std::string field = "issues[" + std::to_string(i) + "]";
    if (!item.is_object()) fail(field, "must be an object");
    Issue issue;
    issue.name = item.value("name", std::string{});
    const std::string type = item.value("type", std::string{});
    if (type == "continuous") {
      if (!item.contains("lo") || !item.contains("hi"))
        fail(field, "continuous issue requires lo and hi");
      issue.kind = ContinuousRange{item["lo"].get<double>(), item["hi"].get<double>()};
    } else if (type == "categorical") {
      if (!item.contains("labels") || !item["labels"].is_array())
        fail(field + ".labels", "categorical issue requires a labels array");
      LabelSet set;
      for (const json& label : item["labels"]) {
        if (!label.is_string()) fail(field + ".labels", "labels must be strings");
        set.labels.push_back(label.get<std::string>());
      }
      issue.kind = std::move(set);
    } else {
      fail(field + ".type", "must be 'continuous' or 'categorical'");
    }
    issues.push_back(std::move(issue));
  }
  return Domain(std::move(issues));
}

std::shared_ptr<const Domain> Domain::load(const std::filesystem::path& path) {
  return std::make_shared<const Domain>(from_json(read_text(path)));
}

void validate_bid(const Domain& domain, const Bid& bid) {
  if (bid.values.size() != domain.issue_count())
    fail("bid", "expected " + std::to_string(domain.issue_count()) + " values, got " +
                    std::to_string(bid.values.size()));
  for (std::size_t i = 0; i < bid.values.size(); ++i) {
    const Issue& issue = domain.issue(i);
    const std::string field = "bid[" + std::to_string(i) + "]";
    if (issue.is_continuous()) {
      const double* x = std::get_if<double>(&bid.values[i]);
      if (x == nullptr) fail(field, "expected a real value for issue '" + issue.name + "'");
      const auto& r = issue.range();
      if (!(std::isfinite(*x) && *x >= r.lo && *x <= r.hi))
        fail(field, "value out of range for issue '" + issue.name + "'");
    } else {
      const std::int32_t* idx = std::get_if<std::int32_t>(&bid.values[i]);
      if (idx == nullptr) fail(field, "expected a label for issue '" + issue.name + "'");
      if (*idx < 0 || static_cast<std::size_t>(*idx) >= issue.label_set().labels.size())
        fail(field, "label index out of range for issue '" + issue.name + "'");
    }
  }
}

bool bid_is_valid(const Domain& domain, const Bid& bid) {
  try {
    validate_bid(domain, bid);
    return true;
  } catch (const DomainError&) {
    return false;
  }
}

double valuation_score(const Issue& issue, const Valuation& valuation, const IssueValue& value) {
  if (issue.is_continuous()) {
    const auto& peak = std::get<TriangularPeak>(valuation);
    const auto& r = issue.range();
    const double x = std::get<double>(value);
    const double half_width = std::max(peak.peak - r.lo, r.hi - peak.peak);
    const double score = 1.0 - std::abs(x - peak.peak) / half_width;
    return std::clamp(score, 0.0, 1.0);
  }
  const auto& table = std::get<LabelScores>(valuation);
  return table.scores[static_cast<std::size_t>(std::get<std::int32_t>(value))];
}

PreferenceProfile::PreferenceProfile(std::shared_ptr<const Domain> domain,
                                     std::vector<double> weights,
                                     std::vector<Valuation> valuations, double reservation)
    : domain_(std::move(domain)),
      weights_(std::move(weights)),
      valuations_(std::move(valuations)),
      reservation_(reservation) {
  if (!domain_) fail("domain", "profile requires a domain");
  const std::size_t n = domain_->issue_count();
  if (weights_.size() != n)
    fail("weights", "expected " + std::to_string(n) + " weights, got " +
                        std::to_string(weights_.size()));
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(std::isfinite(weights_[i]) && weights_[i] >= 0.0))
      fail("weights[" + std::to_string(i) + "]", "must be >= 0");
    sum += weights_[i];
  }
  if (std::abs(sum - 1.0) > kWeightSumTolerance) fail("weights", "must sum to 1");
  if (valuations_.size() != n)
    fail("valuations", "expected " + std::to_string(n) + " valuations, got " +
                           std::to_string(valuations_.size()));
  for (std::size_t i = 0; i < n; ++i) {
    const Issue& issue = domain_->issue(i);
    const std::string field = "valuations[" + std::to_string(i) + "]";
    if (issue.is_continuous()) {
      const auto* peak = std::get_if<TriangularPeak>(&valuations_[i]);
      if (peak == nullptr) fail(field, "continuous issue '" + issue.name + "' requires a peak");
      const auto& r = issue.range();
      if (!(std::isfinite(peak->peak) && peak->peak >= r.lo && peak->peak <= r.hi))
        fail(field + ".peak", "must lie within [lo, hi] of issue '" + issue.name + "'");
    } else {
      const auto* table = std::get_if<LabelScores>(&valuations_[i]);
      if (table == nullptr) fail(field, "categorical issue '" + issue.name + "' requires a table");
      const auto& labels = issue.label_set().labels;
      if (table->scores.size() != labels.size())
        fail(field + ".table", "must map every label of issue '" + issue.name + "'");
      double best = 0.0;
      for (std::size_t j = 0; j < table->scores.size(); ++j) {
        const double s = table->scores[j];
        if (!(std::isfinite(s) && s >= 0.0 && s <= 1.0))
          fail(field + ".table", "score for label '" + labels[j] + "' must be in [0, 1]");
        best = std::max(best, s);
      }
      if (std::abs(best - 1.0) > kScoreMaxTolerance)
        fail(field + ".table", "max score must equal 1");
    }
  }
  if (!(std::isfinite(reservation_) && reservation_ >= 0.0 && reservation_ < 1.0))
    fail("reservation", "must be in [0, 1)");
}

double PreferenceProfile::utility(const Bid& bid) const {
  validate_bid(*domain_, bid);
  double total = 0.0;
  for (std::size_t i = 0; i < weights_.size(); ++i)
    total += weights_[i] * valuation_score(domain_->issue(i), valuations_[i], bid.values[i]);
  return total;
}

Bid PreferenceProfile::ideal_bid() const {
  Bid bid;
  bid.values.reserve(domain_->issue_count());
  for (std::size_t i = 0; i < domain_->issue_count(); ++i) {
    const Issue& issue = domain_->issue(i);
    if (issue.is_continuous()) {
      bid.values.emplace_back(std::get<TriangularPeak>(valuations_[i]).peak);
    } else {
      const auto& scores = std::get<LabelScores>(valuations_[i]).scores;
      std::size_t best = 0;
      for (std::size_t j = 1; j < scores.size(); ++j)
        if (scores[j] > scores[best]) best = j;
      bid.values.emplace_back(static_cast<std::int32_t>(best));
    }
  }
  return bid;
}

PreferenceProfile PreferenceProfile::from_json(std::shared_ptr<const Domain> domain,
                                               const std::string& text) {
  if (!domain) fail("domain", "profile requires a domain");
  json doc = parse_json(text, "profile");
  if (!doc.is_object()) fail("profile", "must be an object");
  if (!doc.contains("weights") || !doc["weights"].is_array())
    fail("weights", "missing or not an array");
  std::vector<double> weights;
  for (const json& w : doc["weights"]) weights.push_back(w.get<double>());

  if (!doc.contains("valuations") || !doc["valuations"].is_array())
    fail("valuations", "missing or not an array");
  const json& vals = doc["valuations"];
  if (vals.size() != domain->issue_count())
    fail("valuations", "expected " + std::to_string(domain->issue_count()) + " entries");
  std::vector<Valuation> valuations;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    const json& item = vals[i];
    const Issue& issue = domain->issue(i);
    const std::string field = "valuations[" + std::to_string(i) + "]";
    if (item.contains("peak")) {
      valuations.emplace_back(TriangularPeak{item["peak"].get<double>()});
    } else if (item.contains("table")) {
      const json& table = item["table"];
      if (!table.is_object()) fail(field + ".table", "must be an object");
      if (issue.is_continuous())
        fail(field, "issue '" + issue.name + "' is continuous; expected a peak");
      const auto& labels = issue.label_set().labels;
      LabelScores scores;
      scores.scores.resize(labels.size(), -1.0);
      for (const auto& [label, score] : table.items()) {
        auto it = std::find(labels.begin(), labels.end(), label);
        if (it == labels.end())
          fail(field + ".table", "unknown label '" + label + "' for issue '" + issue.name + "'");
        scores.scores[static_cast<std::size_t>(it - labels.begin())] = score.get<double>();
      }
      for (std::size_t j = 0; j < labels.size(); ++j)
        if (scores.scores[j] < 0.0)
          fail(field + ".table", "missing score for label '" + labels[j] + "'");
      valuations.emplace_back(std::move(scores));
    } else {
      fail(field, "requires either a peak or a table");
    }
  }
  const double reservation = doc.value("reservation", 0.0);
  return PreferenceProfile(std::move(domain), std::move(weights), std::move(valuations),
                           reservation);
}

PreferenceProfile PreferenceProfile::load(std::shared_ptr<const Domain> domain,
                                          const std::filesystem::path& path) {
  return from_json(std::move(domain), read_text(path));
}

std::vector<double> encode(const Domain& domain, const Bid& bid) {
  validate_bid(domain, bid);
  std::vector<double> coords;
  coords.reserve(domain.encoded_size());
  for (std::size_t i = 0; i < domain.issue_count(); ++i) {
    const Issue& issue = domain.issue(i);
    if (issue.is_continuous()) {
      const auto& r = issue.range();
      coords.push_back((std::get<double>(bid.values[i]) - r.lo) / (r.hi - r.lo));
    } else {
      const auto idx = static_cast<std::size_t>(std::get<std::int32_t>(bid.values[i]));
      for (std::size_t j = 0; j < issue.label_set().labels.size(); ++j)
        coords.push_back(j == idx ? 1.0 : 0.0);
    }
  }
  return coords;
}

Bid decode(const Domain& domain, std::span<const double> coords) {
  if (coords.size() != domain.encoded_size())
    fail("coords", "expected " + std::to_string(domain.encoded_size()) + " coordinates");
  Bid bid;
  bid.values.reserve(domain.issue_count());
  std::size_t offset = 0;
  for (const Issue& issue : domain.issues()) {
    if (issue.is_continuous()) {
      const auto& r = issue.range();
      const double unit = std::clamp(coords[offset], 0.0, 1.0);
      bid.values.emplace_back(r.lo + unit * (r.hi - r.lo));
      offset += 1;
    } else {
      const std::size_t m = issue.label_set().labels.size();
      std::size_t best = 0;
      for (std::size_t j = 1; j < m; ++j)
        if (coords[offset + j] > coords[offset + best]) best = j;
      bid.values.emplace_back(static_cast<std::int32_t>(best));
      offset += m;
    }
  }
  return bid;
}

Bid random_bid(const Domain& domain, Rng& rng) {
  Bid bid;
  bid.values.reserve(domain.issue_count());
  for (const Issue& issue : domain.issues()) {
    if (issue.is_continuous()) {
      const auto& r = issue.range();
      bid.values.emplace_back(rng.uniform(r.lo, r.hi));
    } else {
      bid.values.emplace_back(
          static_cast<std::int32_t>(rng.uniform_index(issue.label_set().labels.size())));
    }
  }
  return bid;
}

std::string issue_value_to_string(const Issue& issue, const IssueValue& value) {
  if (issue.is_continuous()) return csv::format_double(std::get<double>(value));
  return issue.label_set().labels[static_cast<std::size_t>(std::get<std::int32_t>(value))];
}

IssueValue issue_value_from_string(const Issue& issue, const std::string& text) {
  if (issue.is_continuous()) {
    try {
      return IssueValue{csv::parse_double(text)};
    } catch (const IoError&) {
      fail("bid", "expected a number for issue '" + issue.name + "', got '" + text + "'");
    }
  }
  const auto& labels = issue.label_set().labels;
  auto it = std::find(labels.begin(), labels.end(), text);
  if (it == labels.end())
    fail("bid", "unknown label '" + text + "' for issue '" + issue.name + "'");
  return IssueValue{static_cast<std::int32_t>(it - labels.begin())};
}

}  // namespace parley
