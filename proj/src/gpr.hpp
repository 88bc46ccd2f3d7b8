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

#ifndef PARLEY_GPR_HPP
#define PARLEY_GPR_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "domain.hpp"

namespace parley::gp {

// Stationary covariance functions on the real line, normalized so that
// k(x, x) = 1.

struct RbfKernel {
  double length_scale = 1.0;
};

struct RqfKernel {
  double length_scale = 1.0;
  double alpha = 1.0;
};

struct Matern52Kernel {
  double length_scale = 1.0;
};

struct EssKernel {
  double length_scale = 1.0;
  double period = 1.0;
};

using Kernel = std::variant<RbfKernel, RqfKernel, Matern52Kernel, EssKernel>;

/// Covariance between two inputs. Throws DomainError on non-positive
/// hyperparameters.
double kernel_eval(const Kernel& kernel, double x, double y);

std::string kernel_name(const Kernel& kernel);

enum class KernelKind { Rbf, Rqf, Matern52, Ess };

/// Parses "rbf" / "rqf" / "matern52" / "ess"; throws ConfigError otherwise.
KernelKind kernel_kind_from_string(std::string_view name);
std::string to_string(KernelKind kind);

/// Kernel choice with optional hyperparameter overrides. Unset parameters
/// are resolved from the length of the fitted history: length_scale =
/// window/4, ESS period = window/2, RQF alpha = 1.
struct KernelConfig {
  KernelKind kind = KernelKind::Rqf;
  std::optional<double> length_scale;
  std::optional<double> alpha;
  std::optional<double> period;
};

Kernel make_kernel(const KernelConfig& config, std::size_t window);

struct Prediction {
  double mean = 0.0;
  double variance = 0.0;  // clamped at 0
};

/// Exact GP regressor over scalar inputs. Targets are centered on their
/// empirical mean, so predictions far from the data revert to that mean.
/// Factorizes (K + sigma_n^2 I) once at fit time; jitter starts at 1e-9
/// and doubles up to 1e-3 before the fit fails with NumericError.
class GpModel {
 public:
  GpModel(std::vector<double> inputs, std::vector<double> targets, Kernel kernel,
          double noise_variance);

  Prediction predict(double x) const;

  const Kernel& kernel() const { return kernel_; }
  double jitter() const { return jitter_; }
  /// Lower-triangular factor L with L Lᵀ = K + sigma_n^2 I + jitter I.
  const Eigen::MatrixXd& factor() const { return factor_; }

 private:
  std::vector<double> inputs_;
  Kernel kernel_;
  double noise_variance_ = 0.0;
  double jitter_ = 0.0;
  double target_mean_ = 0.0;
  Eigen::MatrixXd factor_;
  Eigen::VectorXd alpha_;  // (K + sigma_n^2 I)^{-1} y
};

/// GP next-bid forecast in both encoded and decoded form.
struct BidForecast {
  Bid bid;
  std::vector<double> encoded_mean;
  std::vector<double> encoded_variance;
};

inline constexpr std::size_t kDefaultWindow = 50;
inline constexpr double kDefaultNoiseVariance = 1e-4;

/// Predicts the opponent's next bid from its offer history: one
/// independent GP per encoded coordinate over round indices, fitted on
/// the most recent `window` bids. With fewer than two bids the last bid
/// is returned unchanged with variance 1 per coordinate.
BidForecast predict_next_bid(std::span<const Bid> history, const Domain& domain,
                             const KernelConfig& config,
                             double noise_variance = kDefaultNoiseVariance,
                             std::size_t window = kDefaultWindow);

/// Distance in raw issue space: squared continuous differences plus 1 per
/// mismatched categorical issue, square-rooted.
double raw_bid_distance(const Domain& domain, const Bid& x, const Bid& y);

struct KernelEvalRow {
  std::string kernel;
  double avg_distance = 0.0;
  std::int64_t n_predictions = 0;
  std::int64_t n_skipped_traces = 0;
};

/// Walk-forward evaluation: for each trace and each t in [2, T-1],
/// predict bid t+1 from the first t bids and accumulate the raw-space
/// distance to the actual bid. Traces shorter than 3 bids are skipped and
/// counted.
std::vector<KernelEvalRow> evaluate_kernels(std::span<const std::vector<Bid>> traces,
                                            const Domain& domain,
                                            std::span<const KernelConfig> kernels,
                                            double noise_variance = kDefaultNoiseVariance,
                                            std::size_t window = kDefaultWindow);

/// Average distance of the predictor that repeats the last seen bid, over
/// the same walk-forward schedule.
KernelEvalRow evaluate_repeat_last_baseline(std::span<const std::vector<Bid>> traces,
                                            const Domain& domain);

/// CSV rows (kernel, avg_distance, n_predictions, n_skipped_traces).
std::vector<std::string> kernel_table_csv_lines(std::span<const KernelEvalRow> rows);

/// Traces CSV: columns (session, round, issue values...). Bids grouped by
/// session id in file order; rounds must increase within a session.
std::vector<std::vector<Bid>> read_traces_csv(const std::filesystem::path& path,
                                              const Domain& domain);

}  // namespace parley::gp

#endif  // PARLEY_GPR_HPP
