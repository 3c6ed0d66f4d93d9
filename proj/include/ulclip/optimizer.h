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

// The worst-case-optimal clipping strategy.
//
// With k = ceil(2d / epsilon), T_eps is the k-th largest value of
// {U * m_l} (0 when k > L). For d = 1 user l clips each sample to
//   [max{(U m_l - T) / (2 m_l), 0},  min{(U m_l + T) / (2 m_l), U}],
// and for d >= 2 to the annulus [0, min{T / m_l, U}].
//
// LpGridOracle certifies optimality independently by minimizing the reduced
// per-user objective over a grid.

#ifndef ULCLIP_OPTIMIZER_H_
#define ULCLIP_OPTIMIZER_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"
#include "ulclip/clipping.h"
#include "ulclip/data_model.h"
#include "ulclip/error_analysis.h"
#include "ulclip/geometry.h"

namespace ulclip {

// ceil(x), except that x within 1e-12 of an integer snaps to that integer.
inline double SnappedCeil(double x) {
  const double nearest = std::round(x);
  if (std::abs(x - nearest) <= 1e-12) return nearest;
  return std::ceil(x);
}

// The rank k = ceil(2d / epsilon), as a double so that tiny epsilon cannot
// overflow an integer type.
inline double ThresholdRank(int d, double epsilon) {
  return SnappedCeil(2.0 * d / epsilon);
}

// k-th largest of `values` (1-based, duplicates counted), or 0 if k exceeds
// the number of values.
inline double KthLargest(std::vector<double> values, double k) {
  if (k > static_cast<double>(values.size()) || k < 1.0) return 0.0;
  const auto rank = static_cast<std::size_t>(k) - 1;
  std::nth_element(values.begin(), values.begin() + rank, values.end(),
                   std::greater<>());
  return values[rank];
}

inline absl::StatusOr<double> TEpsilon(const ContributionProfile& profile,
                                       double epsilon) {
  if (absl::Status s = CheckEpsilon(epsilon); !s.ok()) return s;
  std::vector<double> scaled;
  scaled.reserve(profile.num_users());
  for (int64_t m : profile.counts()) {
    scaled.push_back(profile.U() * static_cast<double>(m));
  }
  return KthLargest(std::move(scaled), ThresholdRank(profile.d(), epsilon));
}

struct OptimalPlan {
  double t_epsilon = 0.0;
  double rank = 0.0;
  // One interval per user; the full spec repeats it for each sample.
  std::vector<ClipInterval> per_user;
  ClipSpec spec;
  ErrorReport predicted;
};

// Optimal interval for one user given T.
inline ClipInterval OptimalInterval(double U, int64_t m, double T, int d) {
  const double mm = static_cast<double>(m);
  if (d == 1) {
    // Clamping a to U/2 keeps a <= b = U - a under rounding.
    const double a = std::clamp((U * mm - T) / (2.0 * mm), 0.0, U / 2.0);
    return {a, U - a};
  }
  return {0.0, std::min(T / mm, U)};
}

inline absl::StatusOr<OptimalPlan> OptimalClipSpec(
    const ContributionProfile& profile, double epsilon) {
  absl::StatusOr<double> t = TEpsilon(profile, epsilon);
  if (!t.ok()) return t.status();
  OptimalPlan plan;
  plan.t_epsilon = *t;
  plan.rank = ThresholdRank(profile.d(), epsilon);
  plan.per_user.reserve(profile.num_users());
  for (int64_t m : profile.counts()) {
    plan.per_user.push_back(
        OptimalInterval(profile.U(), m, plan.t_epsilon, profile.d()));
  }
  plan.spec = ClipSpec::PerUser(plan.per_user, profile);
  absl::StatusOr<ErrorReport> report =
      WorstCaseError(plan.spec, profile, epsilon);
  if (!report.ok()) return report.status();
  plan.predicted = *report;
  return plan;
}

// The minimum worst-case error, evaluated directly from T_eps.
inline absl::StatusOr<double> OptimalErrorClosedForm(
    const ContributionProfile& profile, double epsilon) {
  absl::StatusOr<double> t = TEpsilon(profile, epsilon);
  if (!t.ok()) return t.status();
  const double T = *t;
  const double U = profile.U();
  const int d = profile.d();
  CompensatedSum bias;
  for (int64_t m : profile.counts()) {
    const double excess = U * static_cast<double>(m) - T;
    bias.Add(d == 1 ? std::max(excess / 2.0, 0.0) : std::max(excess, 0.0));
  }
  const double noise = d == 1 ? T / epsilon : 2.0 * d * T / epsilon;
  return (bias.Result() + noise) / static_cast<double>(profile.total());
}

// The d = 1 optimal intervals applied to every coordinate of cube-valued data
// (samples in [0, U]^d rather than the l1 ball). Structural helper only.
inline absl::StatusOr<std::vector<ClipInterval>> OptimalCubeIntervals(
    const ContributionProfile& profile, double epsilon) {
  absl::StatusOr<ContributionProfile> scalar = ContributionProfile::Create(
      std::vector<int64_t>(profile.counts().begin(), profile.counts().end()),
      profile.U(), 1);
  if (!scalar.ok()) return scalar.status();
  absl::StatusOr<OptimalPlan> plan = OptimalClipSpec(*scalar, epsilon);
  if (!plan.ok()) return plan.status();
  return plan->per_user;
}

inline Point ClipCubeSample(const Point& x, ClipInterval interval) {
  return ClampCoordinatewise(x, interval.a, interval.b);
}

// ---------------------------------------------------------------------------
// LP grid oracle.
//
// Restricting to a + b = U (d = 1) or a = 0 (d >= 2), the worst-case error
// depends on each user only through an aggregate S_l:
//   d = 1:  S_l = sum_j a_j,        S_l in [0, U m_l / 2],
//           E = (sum_l S_l + max_l (U m_l - 2 S_l) / eps) / N
//   d >= 2: S_l = sum_j (U - b_j),  S_l in [0, U m_l],
//           E = (sum_l S_l + (2d / eps) max_l (U m_l - S_l)) / N.
// The oracle minimizes E over the grid S_l = i * step_l, i = 0..G, for every
// user. Each residual U m_l - c S_l decreases in i, so for a fixed value tau
// of the max term every user's best choice is the smallest i whose residual
// is at most tau. Sweeping tau over all residual values therefore visits the
// grid minimizer, and the search is equivalent to enumerating all (G+1)^L
// grid points.

inline constexpr int kLpOracleMaxUsers = 6;
inline constexpr int kLpOracleMaxSteps = 200;

struct LpGridResult {
  double best_error = 0.0;
  std::vector<double> aggregates;
  std::vector<int> grid_index;
  ClipSpec spec;
  // Upper bound on (grid minimum - continuous minimum).
  double lipschitz_slack = 0.0;
};

struct ReducedObjective {
  int d = 1;
  double U = 0.0;
  double epsilon = 1.0;
  std::vector<int64_t> counts;
  int64_t total = 0;
  int steps = 1;

  double residual_factor() const { return d == 1 ? 2.0 : 1.0; }
  double noise_factor() const { return d == 1 ? 1.0 / epsilon : 2.0 * d / epsilon; }
  double step(std::size_t l) const {
    const double range = U * static_cast<double>(counts[l]);
    return (d == 1 ? range / 2.0 : range) / steps;
  }
  double aggregate(std::size_t l, int i) const {
    return i == steps ? (d == 1 ? U * counts[l] / 2.0 : U * counts[l])
                      : i * step(l);
  }
  double residual(std::size_t l, int i) const {
    return U * static_cast<double>(counts[l]) -
           residual_factor() * aggregate(l, i);
  }
  double Evaluate(const std::vector<int>& index) const {
    double sum = 0.0;
    double worst = 0.0;
    for (std::size_t l = 0; l < counts.size(); ++l) {
      sum += aggregate(l, index[l]);
      worst = std::max(worst, residual(l, index[l]));
    }
    return (sum + noise_factor() * worst) / static_cast<double>(total);
  }
};

inline ReducedObjective MakeReducedObjective(const ContributionProfile& profile,
                                             double epsilon, int steps) {
  ReducedObjective obj;
  obj.d = profile.d();
  obj.U = profile.U();
  obj.epsilon = epsilon;
  obj.counts.assign(profile.counts().begin(), profile.counts().end());
  obj.total = profile.total();
  obj.steps = steps;
  return obj;
}

inline absl::StatusOr<LpGridResult> LpGridOracle(
    const ContributionProfile& profile, double epsilon, int grid_steps) {
  if (absl::Status s = CheckEpsilon(epsilon); !s.ok()) return s;
  if (profile.num_users() > kLpOracleMaxUsers) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "LP grid oracle supports at most %d users, got %d", kLpOracleMaxUsers,
        profile.num_users()));
  }
  if (grid_steps < 1 || grid_steps > kLpOracleMaxSteps) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "LP grid oracle needs 1 <= grid_steps <= %d, got %d",
        kLpOracleMaxSteps, grid_steps));
  }
  const ReducedObjective obj = MakeReducedObjective(profile, epsilon, grid_steps);
  const std::size_t L = obj.counts.size();

  std::vector<double> taus;
  for (std::size_t l = 0; l < L; ++l) {
    for (int i = 0; i <= grid_steps; ++i) taus.push_back(obj.residual(l, i));
  }
  std::sort(taus.begin(), taus.end());
  taus.erase(std::unique(taus.begin(), taus.end()), taus.end());

  LpGridResult result;
  result.best_error = std::numeric_limits<double>::infinity();
  std::vector<int> index(L);
  for (double tau : taus) {
    bool feasible = true;
    for (std::size_t l = 0; l < L && feasible; ++l) {
      // Smallest i with residual(l, i) <= tau; residuals decrease in i.
      int lo = 0;
      int hi = grid_steps + 1;
      while (lo < hi) {
        const int mid = (lo + hi) / 2;
        if (obj.residual(l, mid) <= tau) {
          hi = mid;
        } else {
          lo = mid + 1;
        }
      }
      if (lo > grid_steps) feasible = false;
      index[l] = lo;
    }
    if (!feasible) continue;
    const double value = obj.Evaluate(index);
    if (value < result.best_error ||
        (value == result.best_error && index < result.grid_index)) {
      result.best_error = value;
      result.grid_index = index;
    }
  }

  result.aggregates.resize(L);
  std::vector<ClipInterval> per_user(L);
  double step_sum = 0.0;
  double step_max = 0.0;
  for (std::size_t l = 0; l < L; ++l) {
    const double S = obj.aggregate(l, result.grid_index[l]);
    const double m = static_cast<double>(obj.counts[l]);
    result.aggregates[l] = S;
    if (obj.d == 1) {
      const double a = std::min(S / m, obj.U / 2.0);
      per_user[l] = {a, obj.U - a};
    } else {
      per_user[l] = {0.0, std::max(obj.U - S / m, 0.0)};
    }
    step_sum += obj.step(l);
    step_max = std::max(step_max, obj.step(l));
  }
  result.spec = ClipSpec::PerUser(per_user, profile);
  result.lipschitz_slack =
      (step_sum + obj.noise_factor() * obj.residual_factor() * step_max) /
      static_cast<double>(obj.total);
  return result;
}

}  // namespace ulclip

#endif  // ULCLIP_OPTIMIZER_H_
