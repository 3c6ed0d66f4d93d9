//
// Copyright 2026 The ulclip Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Randomized releases of the sample mean under user-level epsilon-DP:
//
//   * vanilla Laplace:   f(D) + Lap(Delta_f / eps) per coordinate;
//   * OPT worst-case:    optimally clipped mean + Lap(Delta / eps);
//   * AKMV:              clip per-user sums to a privately chosen threshold T
//                        (eps/2), release their mean with the other eps/2.
//
// Every mechanism draws from an explicit RandomStream and records an audit of
// how the budget was spent and how the noise was calibrated.

#ifndef ULCLIP_MECHANISMS_H_
#define ULCLIP_MECHANISMS_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"
#include "ulclip/clipping.h"
#include "ulclip/data_model.h"
#include "ulclip/error_analysis.h"
#include "ulclip/geometry.h"
#include "ulclip/optimizer.h"
#include "ulclip/random.h"

namespace ulclip {

struct PrivacyBudget {
  double epsilon = 1.0;

  static absl::StatusOr<PrivacyBudget> Create(double epsilon) {
    if (absl::Status s = CheckEpsilon(epsilon); !s.ok()) return s;
    return PrivacyBudget{epsilon};
  }
};

struct NoiseDraw {
  std::vector<double> values;
  // Laplace scale b = sensitivity / epsilon; 0 when no noise was needed.
  double scale = 0.0;
};

struct MechanismAudit {
  std::string mechanism;
  double epsilon_total = 0.0;
  double epsilon_quantile = 0.0;
  double epsilon_release = 0.0;
  double sensitivity = 0.0;
  double noise_scale = 0.0;
  std::optional<double> threshold;
  std::optional<double> threshold_rank;
  std::optional<uint64_t> seed;
};

struct MechanismOutput {
  // estimate[i] == pre_noise[i] + noise.values[i].
  std::vector<double> estimate;
  Point pre_noise;
  NoiseDraw noise;
  std::optional<ClipSpec> spec_used;
  MechanismAudit audit;
};

inline constexpr char kVanillaLaplace[] = "laplace";
inline constexpr char kOptWorstCase[] = "opt-wc";
inline constexpr char kAkmv[] = "akmv";

// Inverse-CDF Laplace transform of u in (-1/2, 1/2).
inline double LaplaceFromUniform(double u, double scale) {
  const double sign = u > 0.0 ? 1.0 : (u < 0.0 ? -1.0 : 0.0);
  return -scale * sign * std::log(1.0 - 2.0 * std::abs(u));
}

inline absl::StatusOr<NoiseDraw> SampleLaplaceVector(double scale, int d,
                                                     RandomStream& rng) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("Laplace scale must be finite and > 0, got %g", scale));
  }
  if (d < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("noise dimension must be >= 1, got %d", d));
  }
  NoiseDraw draw;
  draw.scale = scale;
  draw.values.reserve(d);
  for (int i = 0; i < d; ++i) {
    double u = rng.NextUniform() - 0.5;
    while (u == -0.5) u = rng.NextUniform() - 0.5;
    draw.values.push_back(LaplaceFromUniform(u, scale));
  }
  return draw;
}

namespace internal {

// Adds Lap(sensitivity / epsilon) to every coordinate. A zero sensitivity
// means the estimator ignores the data, so it is released as is.
inline absl::StatusOr<MechanismOutput> Release(Point pre_noise,
                                               double sensitivity,
                                               double epsilon_release,
                                               RandomStream& rng) {
  MechanismOutput out;
  const int d = pre_noise.dim();
  if (sensitivity > 0.0) {
    absl::StatusOr<NoiseDraw> noise =
        SampleLaplaceVector(sensitivity / epsilon_release, d, rng);
    if (!noise.ok()) return noise.status();
    out.noise = *std::move(noise);
  } else {
    out.noise.values.assign(d, 0.0);
    out.noise.scale = 0.0;
  }
  out.estimate.resize(d);
  for (int i = 0; i < d; ++i) {
    out.estimate[i] = pre_noise[i] + out.noise.values[i];
  }
  out.pre_noise = std::move(pre_noise);
  out.audit.sensitivity = sensitivity;
  out.audit.noise_scale = out.noise.scale;
  out.audit.epsilon_release = epsilon_release;
  return out;
}

}  // namespace internal

// Unclipped sample mean plus noise at the sensitivity of the full-range
// estimator.
inline absl::StatusOr<MechanismOutput> VanillaLaplace(const Dataset& ds,
                                                      PrivacyBudget budget,
                                                      RandomStream& rng) {
  if (absl::Status s = CheckEpsilon(budget.epsilon); !s.ok()) return s;
  const ClipSpec full = ClipSpec::FullRange(ds.profile());
  absl::StatusOr<double> sens = Sensitivity(full, ds.profile());
  if (!sens.ok()) return sens.status();
  absl::StatusOr<MechanismOutput> out =
      internal::Release(SampleMean(ds), *sens, budget.epsilon, rng);
  if (!out.ok()) return out.status();
  out->audit.mechanism = kVanillaLaplace;
  out->audit.epsilon_total = budget.epsilon;
  out->spec_used = full;
  return out;
}

// Clipped mean under the worst-case-optimal spec plus calibrated noise.
inline absl::StatusOr<MechanismOutput> OptWorstCaseMechanism(
    const Dataset& ds, PrivacyBudget budget, RandomStream& rng) {
  absl::StatusOr<OptimalPlan> plan = OptimalClipSpec(ds.profile(), budget.epsilon);
  if (!plan.ok()) return plan.status();
  absl::StatusOr<Point> clipped = ClippedMean(ds, plan->spec);
  if (!clipped.ok()) return clipped.status();
  absl::StatusOr<MechanismOutput> out = internal::Release(
      *std::move(clipped), plan->predicted.sensitivity, budget.epsilon, rng);
  if (!out.ok()) return out.status();
  out->audit.mechanism = kOptWorstCase;
  out->audit.epsilon_total = budget.epsilon;
  out->audit.threshold = plan->t_epsilon;
  out->audit.threshold_rank = plan->rank;
  out->spec_used = std::move(plan->spec);
  return out;
}

// ---------------------------------------------------------------------------
// Private k-th largest value via the exponential mechanism.
//
// Candidates are t_i = i * range_hi / grid_steps, i = 0..grid_steps, with
// utility u(t) = -|#{v : v > t} - k|. Changing one user's value moves every
// count by at most one, so the utility has sensitivity 1 and sampling with
// probability proportional to exp(budget * u / 2) is budget-DP.

inline constexpr int kDefaultQuantileGridSteps = 1000;

inline absl::StatusOr<std::vector<double>> KthLargestSelectionProbabilities(
    std::vector<double> values, double k, double quantile_budget,
    double range_hi, int grid_steps) {
  if (values.empty()) {
    return absl::InvalidArgumentError("private k-th largest: no values");
  }
  if (!(k >= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("private k-th largest: k must be >= 1, got %g", k));
  }
  if (absl::Status s = CheckEpsilon(quantile_budget); !s.ok()) return s;
  if (grid_steps < 1) {
    return absl::InvalidArgumentError("private k-th largest: grid_steps < 1");
  }
  if (!(range_hi >= 0.0) || !std::isfinite(range_hi)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("private k-th largest: bad range_hi %g", range_hi));
  }
  std::sort(values.begin(), values.end());
  std::vector<double> log_weights(grid_steps + 1);
  for (int i = 0; i <= grid_steps; ++i) {
    const double t = range_hi * i / grid_steps;
    const auto above = static_cast<double>(
        values.end() - std::upper_bound(values.begin(), values.end(), t));
    log_weights[i] = -quantile_budget * std::abs(above - k) / 2.0;
  }
  const double top = *std::max_element(log_weights.begin(), log_weights.end());
  std::vector<double> probs(log_weights.size());
  double total = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    probs[i] = std::exp(log_weights[i] - top);
    total += probs[i];
  }
  for (double& p : probs) p /= total;
  return probs;
}

inline absl::StatusOr<double> PrivateKthLargest(
    std::vector<double> values, double k, double quantile_budget,
    double range_hi, int grid_steps, RandomStream& rng) {
  absl::StatusOr<std::vector<double>> probs = KthLargestSelectionProbabilities(
      std::move(values), k, quantile_budget, range_hi, grid_steps);
  if (!probs.ok()) return probs.status();
  const double u = rng.NextUniform();
  double cumulative = 0.0;
  std::size_t chosen = probs->size() - 1;
  for (std::size_t i = 0; i < probs->size(); ++i) {
    cumulative += (*probs)[i];
    if (u < cumulative) {
      chosen = i;
      break;
    }
  }
  return range_hi * static_cast<double>(chosen) / grid_steps;
}

// Scalar only. Per-user sums are clipped to [0, T] where T privately
// estimates the ceil(2/eps)-th largest user sum with budget eps/2; the mean of
// the clipped sums has sensitivity T / N and is released with budget eps/2.
inline absl::StatusOr<MechanismOutput> AkmvMechanism(
    const Dataset& ds, PrivacyBudget budget, RandomStream& rng,
    int grid_steps = kDefaultQuantileGridSteps) {
  if (absl::Status s = CheckEpsilon(budget.epsilon); !s.ok()) return s;
  const ContributionProfile& profile = ds.profile();
  if (profile.d() != 1) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "AKMV mechanism is scalar; dataset has d = %d", profile.d()));
  }
  std::vector<double> sums;
  sums.reserve(profile.num_users());
  for (const auto& user : ds.samples()) sums.push_back(UserSum(user, 1)[0]);

  const double quantile_budget = budget.epsilon / 2.0;
  const double release_budget = budget.epsilon / 2.0;
  const double rank = ThresholdRank(1, budget.epsilon);
  const double range_hi = profile.U() * static_cast<double>(profile.max_count());
  absl::StatusOr<double> threshold =
      PrivateKthLargest(sums, rank, quantile_budget, range_hi, grid_steps, rng);
  if (!threshold.ok()) return threshold.status();
  const double T = *threshold;

  CompensatedSum clipped;
  for (double s : sums) clipped.Add(std::clamp(s, 0.0, T));
  const double N = static_cast<double>(profile.total());
  Point estimator{clipped.Result() / N};

  absl::StatusOr<MechanismOutput> out =
      internal::Release(std::move(estimator), T / N, release_budget, rng);
  if (!out.ok()) return out.status();
  out->audit.mechanism = kAkmv;
  out->audit.epsilon_total = budget.epsilon;
  out->audit.epsilon_quantile = quantile_budget;
  out->audit.threshold = T;
  out->audit.threshold_rank = rank;
  return out;
}

// Dispatches on the mechanism name ("laplace", "opt-wc", "akmv").
inline absl::StatusOr<MechanismOutput> RunMechanism(const std::string& name,
                                                    const Dataset& ds,
                                                    PrivacyBudget budget,
                                                    RandomStream& rng) {
  if (name == kVanillaLaplace) return VanillaLaplace(ds, budget, rng);
  if (name == kOptWorstCase) return OptWorstCaseMechanism(ds, budget, rng);
  if (name == kAkmv) return AkmvMechanism(ds, budget, rng);
  return absl::InvalidArgumentError(
      absl::StrFormat("unknown mechanism '%s' (expected laplace, opt-wc, akmv)",
                      name));
}

}  // namespace ulclip

#endif  // ULCLIP_MECHANISMS_H_
