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

// Randomized agreement checks between the closed forms and their brute-force
// oracles, as run by `ulclip verify`.

#ifndef ULCLIP_VERIFICATION_H_
#define ULCLIP_VERIFICATION_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"
#include "ulclip/clipping.h"
#include "ulclip/data_model.h"
#include "ulclip/error_analysis.h"
#include "ulclip/geometry.h"
#include "ulclip/optimizer.h"
#include "ulclip/random.h"

namespace ulclip {

inline int UniformInt(RandomStream& rng, int lo, int hi) {
  return lo + static_cast<int>(rng.NextU64() % static_cast<uint64_t>(hi - lo + 1));
}

// A profile with at most `max_users` users, counts in [1, max_count] and at
// most `max_total` samples overall.
inline ContributionProfile RandomProfile(RandomStream& rng, int max_users,
                                         int max_count, int max_total, double U,
                                         int d) {
  const int L = UniformInt(rng, 1, max_users);
  std::vector<int64_t> counts;
  int64_t used = 0;
  for (int l = 0; l < L; ++l) {
    const int64_t room = max_total - used - (L - l - 1);
    const int64_t m = std::min<int64_t>(UniformInt(rng, 1, max_count), room);
    counts.push_back(std::max<int64_t>(m, 1));
    used += counts.back();
  }
  return ContributionProfile::Create(std::move(counts), U, d).value();
}

// Per-sample intervals with a mix of generic and boundary cases
// (a = 0, b = U, a = b).
inline ClipSpec RandomClipSpec(RandomStream& rng,
                               const ContributionProfile& profile) {
  const double U = profile.U();
  std::vector<std::vector<ClipInterval>> intervals(profile.num_users());
  for (int l = 0; l < profile.num_users(); ++l) {
    for (int64_t j = 0; j < profile.count(l); ++j) {
      double a = U * rng.NextUniform();
      double b = U * rng.NextUniform();
      if (a > b) std::swap(a, b);
      switch (UniformInt(rng, 0, 7)) {
        case 0: a = 0.0; break;
        case 1: b = U; break;
        case 2: b = a; break;
        case 3: a = 0.0; b = U; break;
        default: break;
      }
      intervals[l].push_back({a, b});
    }
  }
  return ClipSpec(std::move(intervals));
}

struct AgreementSummary {
  int instances = 0;
  int failures = 0;
  double max_gap = 0.0;
  std::string first_failure;
};

// Compares WorstCaseBias and Sensitivity against their oracles on random
// instances with d in {1, 2} and at most 12 samples.
inline absl::StatusOr<AgreementSummary> VerifyBiasAndSensitivity(
    int instances, uint64_t seed, double tolerance = 1e-9) {
  RandomStream rng(seed);
  AgreementSummary summary;
  for (int n = 0; n < instances; ++n) {
    const int d = UniformInt(rng, 1, 2);
    const double U = 0.5 + 1.5 * rng.NextUniform();
    const ContributionProfile profile =
        RandomProfile(rng, 4, 4, static_cast<int>(kOracleMaxSamples), U, d);
    const ClipSpec spec = RandomClipSpec(rng, profile);

    absl::StatusOr<double> bias = WorstCaseBias(spec, profile);
    absl::StatusOr<double> sens = Sensitivity(spec, profile);
    absl::StatusOr<BiasWitness> bias_oracle = BruteForceBiasOracle(spec, profile);
    absl::StatusOr<SensitivityWitness> sens_oracle =
        BruteForceSensitivityOracle(spec, profile);
    if (!bias.ok()) return bias.status();
    if (!sens.ok()) return sens.status();
    if (!bias_oracle.ok()) return bias_oracle.status();
    if (!sens_oracle.ok()) return sens_oracle.status();

    const double gap = std::max(std::abs(*bias - bias_oracle->value),
                                std::abs(*sens - sens_oracle->value));
    summary.max_gap = std::max(summary.max_gap, gap);
    ++summary.instances;
    if (gap > tolerance) {
      if (summary.failures++ == 0) {
        summary.first_failure = absl::StrFormat(
            "instance %d (d=%d, L=%d): bias %.17g vs oracle %.17g, "
            "sensitivity %.17g vs oracle %.17g",
            n, d, profile.num_users(), *bias, bias_oracle->value, *sens,
            sens_oracle->value);
      }
    }
  }
  return summary;
}

struct OptimalitySummary {
  int instances = 0;
  int failures = 0;
  // min over instances of (oracle - closed form); must not be < -1e-12.
  double min_margin = 0.0;
  // max over instances of (oracle - closed form) / slack; must be <= 1.
  double max_slack_ratio = 0.0;
  // max |closed form - WorstCaseError(optimal spec)|.
  double max_consistency_gap = 0.0;
  std::string first_failure;
};

// Certifies the closed-form optimum with the LP grid oracle on random
// instances (L <= 5, m <= 6, U = 1, d in {1,2,3}, eps in {0.5, 1, 2}).
inline absl::StatusOr<OptimalitySummary> VerifyOptimality(int instances,
                                                          uint64_t seed,
                                                          int grid_steps = 100) {
  RandomStream rng(seed);
  constexpr double kEpsilons[] = {0.5, 1.0, 2.0};
  OptimalitySummary summary;
  summary.min_margin = std::numeric_limits<double>::infinity();
  for (int n = 0; n < instances; ++n) {
    const int d = UniformInt(rng, 1, 3);
    const double eps = kEpsilons[UniformInt(rng, 0, 2)];
    const ContributionProfile profile = RandomProfile(rng, 5, 6, 30, 1.0, d);

    absl::StatusOr<double> closed = OptimalErrorClosedForm(profile, eps);
    absl::StatusOr<OptimalPlan> plan = OptimalClipSpec(profile, eps);
    absl::StatusOr<LpGridResult> grid = LpGridOracle(profile, eps, grid_steps);
    if (!closed.ok()) return closed.status();
    if (!plan.ok()) return plan.status();
    if (!grid.ok()) return grid.status();

    const double margin = grid->best_error - *closed;
    const double ratio =
        grid->lipschitz_slack > 0.0 ? margin / grid->lipschitz_slack : 0.0;
    const double consistency = std::abs(*closed - plan->predicted.total);
    summary.min_margin = std::min(summary.min_margin, margin);
    summary.max_slack_ratio = std::max(summary.max_slack_ratio, ratio);
    summary.max_consistency_gap =
        std::max(summary.max_consistency_gap, consistency);
    ++summary.instances;
    if (margin < -1e-12 || margin > grid->lipschitz_slack ||
        consistency > 1e-12) {
      if (summary.failures++ == 0) {
        summary.first_failure = absl::StrFormat(
            "instance %d (d=%d, eps=%g, L=%d): closed %.17g, grid %.17g, "
            "slack %.3g, plan total %.17g",
            n, d, eps, profile.num_users(), *closed, grid->best_error,
            grid->lipschitz_slack, plan->predicted.total);
      }
    }
  }
  return summary;
}

}  // namespace ulclip

#endif  // ULCLIP_VERIFICATION_H_
