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

#include "gpr.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>

#include "csv.hpp"
#include "errors.hpp"

namespace parley::gp {

namespace {

constexpr double kInitialJitter = 1e-9;
constexpr double kMaxJitter = 1e-3;

void require_positive(double value, const char* name) {
  if (!(std::isfinite(value) && value > 0.0))
    throw DomainError(std::string("kernel hyperparameter '") + name + "' must be positive");
}

}  // namespace

double kernel_eval(const Kernel& kernel, double x, double y) {
  const double r = std::abs(x - y);
  return std::visit(
      [r](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, RbfKernel>) {
          require_positive(k.length_scale, "length_scale");
          return std::exp(-r * r / (2.0 * k.length_scale * k.length_scale));
        } else if constexpr (std::is_same_v<K, RqfKernel>) {
          require_positive(k.length_scale, "length_scale");
          require_positive(k.alpha, "alpha");
          return std::pow(1.0 + r * r / (2.0 * k.alpha * k.length_scale * k.length_scale),
                          -k.alpha);
        } else if constexpr (std::is_same_v<K, Matern52Kernel>) {
          require_positive(k.length_scale, "length_scale");
          const double s = std::sqrt(5.0) * r / k.length_scale;
          return (1.0 + s + 5.0 * r * r / (3.0 * k.length_scale * k.length_scale)) *
                 std::exp(-s);
        } else {
          require_positive(k.length_scale, "length_scale");
          require_positive(k.period, "period");
          const double s = std::sin(std::numbers::pi * r / k.period);
          return std::exp(-2.0 * s * s / (k.length_scale * k.length_scale));
        }
      },
      kernel);
}

std::string kernel_name(const Kernel& kernel) {
  return std::visit(
      [](const auto& k) -> std::string {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, RbfKernel>) return "rbf";
        if constexpr (std::is_same_v<K, RqfKernel>) return "rqf";
        if constexpr (std::is_same_v<K, Matern52Kernel>) return "matern52";
        return "ess";
      },
      kernel);
}

KernelKind kernel_kind_from_string(std::string_view name) {
  if (name == "rbf") return KernelKind::Rbf;
  if (name == "rqf") return KernelKind::Rqf;
  if (name == "matern52" || name == "matern") return KernelKind::Matern52;
  if (name == "ess") return KernelKind::Ess;
  throw ConfigError("unknown kernel '" + std::string(name) +
                    "' (expected rbf, rqf, matern52, or ess)");
}

std::string to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::Rbf: return "rbf";
    case KernelKind::Rqf: return "rqf";
    case KernelKind::Matern52: return "matern52";
    case KernelKind::Ess: return "ess";
  }
  return "?";
}

Kernel make_kernel(const KernelConfig& config, std::size_t window) {
  const double n = static_cast<double>(std::max<std::size_t>(window, 2));
  const double ls = config.length_scale.value_or(n / 4.0);
  switch (config.kind) {
    case KernelKind::Rbf: return RbfKernel{ls};
    case KernelKind::Rqf: return RqfKernel{ls, config.alpha.value_or(1.0)};
    case KernelKind::Matern52: return Matern52Kernel{ls};
    case KernelKind::Ess: return EssKernel{ls, config.period.value_or(n / 2.0)};
  }
  throw ConfigError("invalid kernel kind");
}

GpModel::GpModel(std::vector<double> inputs, std::vector<double> targets, Kernel kernel,
                 double noise_variance)
    : inputs_(std::move(inputs)), kernel_(std::move(kernel)), noise_variance_(noise_variance) {
  const auto n = static_cast<Eigen::Index>(inputs_.size());
  if (n == 0 || inputs_.size() != targets.size())
    throw DomainError("fit requires equally many inputs and targets, at least one each");
  if (!(std::isfinite(noise_variance_) && noise_variance_ >= 0.0))
    throw DomainError("noise variance must be >= 0");
  if (noise_variance_ == 0.0) {
    std::set<double> distinct(inputs_.begin(), inputs_.end());
    if (distinct.size() != inputs_.size())
      throw NumericError("duplicate inputs make the noiseless Gram matrix singular");
  }

  Eigen::MatrixXd gram(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double k = kernel_eval(kernel_, inputs_[i], inputs_[j]);
      gram(i, j) = k;
      gram(j, i) = k;
    }
  gram.diagonal().array() += noise_variance_;

  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  double jitter = 0.0;
  while (llt.info() != Eigen::Success) {
    jitter = (jitter == 0.0) ? kInitialJitter : jitter * 2.0;
    if (jitter > kMaxJitter)
      throw NumericError("Gram matrix is not positive definite even at maximum jitter");
    Eigen::MatrixXd bumped = gram;
    bumped.diagonal().array() += jitter;
    llt.compute(bumped);
  }
  jitter_ = jitter;
  factor_ = llt.matrixL();

  // Regress residuals around the empirical target mean. A constant series
  // then forecasts itself exactly, and extrapolation reverts to the data
  // mean instead of shrinking toward zero.
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) y(i) = targets[static_cast<std::size_t>(i)];
  target_mean_ = y.mean();
  alpha_ = llt.solve(Eigen::VectorXd(y.array() - target_mean_));
}

Prediction GpModel::predict(double x) const {
  const auto n = static_cast<Eigen::Index>(inputs_.size());
  Eigen::VectorXd k_star(n);
  for (Eigen::Index i = 0; i < n; ++i)
    k_star(i) = kernel_eval(kernel_, x, inputs_[static_cast<std::size_t>(i)]);
  const double mean = target_mean_ + k_star.dot(alpha_);
  // var = k(x,x) - k*ᵀ (K + σ²I)⁻¹ k*, via the triangular solve L v = k*.
  const Eigen::VectorXd v = factor_.triangularView<Eigen::Lower>().solve(k_star);
  const double variance = kernel_eval(kernel_, x, x) - v.squaredNorm();
  return {mean, std::max(variance, 0.0)};
}

BidForecast predict_next_bid(std::span<const Bid> history, const Domain& domain,
                             const KernelConfig& config, double noise_variance,
                             std::size_t window) {
  if (history.empty()) throw DomainError("predict_next_bid requires at least one bid");
  const std::size_t dims = domain.encoded_size();
  if (history.size() < 2) {
    BidForecast forecast;
    forecast.bid = history.back();
    forecast.encoded_mean = encode(domain, forecast.bid);
    forecast.encoded_variance.assign(dims, 1.0);
    return forecast;
  }

  const std::size_t total = history.size();
  const std::size_t used = std::min(total, std::max<std::size_t>(window, 2));
  const std::size_t first = total - used;
  const Kernel kernel = make_kernel(config, used);

  std::vector<double> inputs(used);
  std::vector<std::vector<double>> coords(used);
  for (std::size_t i = 0; i < used; ++i) {
    inputs[i] = static_cast<double>(first + i + 1);  // 1-based round index
    coords[i] = encode(domain, history[first + i]);
  }

  BidForecast forecast;
  forecast.encoded_mean.resize(dims);
  forecast.encoded_variance.resize(dims);
  const double query = static_cast<double>(total + 1);
  std::vector<double> targets(used);
  for (std::size_t j = 0; j < dims; ++j) {
    for (std::size_t i = 0; i < used; ++i) targets[i] = coords[i][j];
    GpModel model(inputs, targets, kernel, noise_variance);
    const Prediction p = model.predict(query);
    forecast.encoded_mean[j] = p.mean;
    forecast.encoded_variance[j] = p.variance;
  }
  forecast.bid = decode(domain, forecast.encoded_mean);
  return forecast;
}

double raw_bid_distance(const Domain& domain, const Bid& x, const Bid& y) {
  double sum = 0.0;
  for (std::size_t i = 0; i < domain.issue_count(); ++i) {
    if (domain.issue(i).is_continuous()) {
      const double d = std::get<double>(x.values[i]) - std::get<double>(y.values[i]);
      sum += d * d;
    } else if (std::get<std::int32_t>(x.values[i]) != std::get<std::int32_t>(y.values[i])) {
      sum += 1.0;
    }
  }
  return std::sqrt(sum);
}

namespace {

template <typename Predict>
std::pair<double, std::int64_t> walk_forward(std::span<const std::vector<Bid>> traces,
                                             const Domain& domain, Predict&& predict,
                                             std::int64_t* skipped) {
  double total = 0.0;
  std::int64_t count = 0;
  for (const auto& trace : traces) {
    if (trace.size() < 3) {
      if (skipped != nullptr) ++*skipped;
      continue;
    }
    for (std::size_t t = 2; t < trace.size(); ++t) {
      const Bid predicted = predict(std::span<const Bid>(trace.data(), t));
      total += raw_bid_distance(domain, predicted, trace[t]);
      ++count;
    }
  }
  return {count > 0 ? total / static_cast<double>(count) : 0.0, count};
}

}  // namespace

std::vector<KernelEvalRow> evaluate_kernels(std::span<const std::vector<Bid>> traces,
                                            const Domain& domain,
                                            std::span<const KernelConfig> kernels,
                                            double noise_variance, std::size_t window) {
  std::vector<KernelEvalRow> rows;
  rows.reserve(kernels.size());
  for (const KernelConfig& config : kernels) {
    std::int64_t skipped = 0;
    auto [avg, count] = walk_forward(
        traces, domain,
        [&](std::span<const Bid> prefix) {
          return predict_next_bid(prefix, domain, config, noise_variance, window).bid;
        },
        &skipped);
    rows.push_back({to_string(config.kind), avg, count, skipped});
  }
  return rows;
}

KernelEvalRow evaluate_repeat_last_baseline(std::span<const std::vector<Bid>> traces,
                                            const Domain& domain) {
  std::int64_t skipped = 0;
  auto [avg, count] = walk_forward(
      traces, domain, [](std::span<const Bid> prefix) { return prefix.back(); }, &skipped);
  return {"repeat_last", avg, count, skipped};
}

std::vector<std::string> kernel_table_csv_lines(std::span<const KernelEvalRow> rows) {
  std::vector<std::string> lines{"kernel,avg_distance,n_predictions,n_skipped_traces"};
  for (const KernelEvalRow& row : rows)
    lines.push_back(csv::join_row({row.kernel, csv::format_double(row.avg_distance),
                                   std::to_string(row.n_predictions),
                                   std::to_string(row.n_skipped_traces)}));
  return lines;
}

std::vector<std::vector<Bid>> read_traces_csv(const std::filesystem::path& path,
                                              const Domain& domain) {
  const auto rows = csv::read_file(path);
  if (rows.empty()) throw IoError("traces file is empty: " + path.string());
  const std::size_t expected = 2 + domain.issue_count();
  std::vector<std::vector<Bid>> traces;
  std::map<std::string, std::size_t> index;  // session id -> trace slot
  std::map<std::string, std::int64_t> last_round;
  for (std::size_t r = 1; r < rows.size(); ++r) {  // rows[0] is the header
    const auto& row = rows[r];
    if (row.size() != expected)
      throw IoError("traces row " + std::to_string(r) + ": expected " +
                    std::to_string(expected) + " columns, got " + std::to_string(row.size()));
    const std::string& session = row[0];
    const std::int64_t round = csv::parse_int(row[1]);
    auto [it, fresh] = index.try_emplace(session, traces.size());
    if (fresh) {
      traces.emplace_back();
    } else if (round <= last_round[session]) {
      throw IoError("traces row " + std::to_string(r) +
                    ": rounds must increase within session '" + session + "'");
    }
    last_round[session] = round;
    Bid bid;
    for (std::size_t i = 0; i < domain.issue_count(); ++i)
      bid.values.push_back(issue_value_from_string(domain.issue(i), row[2 + i]));
    validate_bid(domain, bid);
    traces[it->second].push_back(std::move(bid));
  }
  return traces;
}

}  // namespace parley::gp
