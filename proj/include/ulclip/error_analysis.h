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

// Worst-case error of a clipping estimator: the largest l1 bias over all
// datasets with a fixed contribution profile, plus the expected l1 magnitude
// of the Laplace noise calibrated to the estimator's user-level sensitivity.
//
// The brute-force oracles at the bottom of this file certify the closed forms
// by maximizing over concrete datasets built from extremal sample candidates.

#ifndef ULCLIP_ERROR_ANALYSIS_H_
#define ULCLIP_ERROR_ANALYSIS_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"
#include "ulclip/clipping.h"
#include "ulclip/data_model.h"
#include "ulclip/geometry.h"

namespace ulclip {

struct ErrorReport {
  double bias = 0.0;
  double noise = 0.0;
  double sensitivity = 0.0;
  double total = 0.0;
};

inline absl::Status CheckEpsilon(double epsilon) {
  if (!(epsilon > 0.0) || std::isnan(epsilon)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("epsilon must be > 0, got %g", epsilon));
  }
  return absl::OkStatus();
}

// (1/N) * sum over samples of max{a, U - b}: the sum of per-sample worst-case
// clipping distances. This bounds the bias for every d and equals it for
// d >= 2. For d = 1 it can overstate the bias (see WorstCaseBias).
inline absl::StatusOr<double> PerSampleBiasBound(
    const ClipSpec& spec, const ContributionProfile& profile) {
  if (absl::Status s = CheckClipSpec(spec, profile); !s.ok()) return s;
  const double U = profile.U();
  CompensatedSum sum;
  for (const auto& user : spec.intervals()) {
    for (const auto& [a, b] : user) sum.Add(std::max(a, U - b));
  }
  return sum.Result() / static_cast<double>(profile.total());
}

// max over datasets of |f(D) - fbar(D)|_1.
//
// A sample below its inner radius moves outward by at most a, one above its
// outer radius moves inward by at most U - b. For d >= 2 the two kinds of
// displacement can be placed on different coordinates, so all of them add up
// and the bias is the per-sample sum. For d = 1 both kinds live on the same
// axis with opposite signs, so the worst dataset pushes every sample to the
// same side: the bias is max(sum a, sum (U - b)) / N.
inline absl::StatusOr<double> WorstCaseBias(const ClipSpec& spec,
                                            const ContributionProfile& profile) {
  if (profile.d() >= 2) return PerSampleBiasBound(spec, profile);
  if (absl::Status s = CheckClipSpec(spec, profile); !s.ok()) return s;
  const double U = profile.U();
  CompensatedSum lower;
  CompensatedSum upper;
  for (const auto& user : spec.intervals()) {
    for (const auto& [a, b] : user) {
      lower.Add(a);
      upper.Add(U - b);
    }
  }
  return std::max(lower.Result(), upper.Result()) /
         static_cast<double>(profile.total());
}

// User-level sensitivity of the clipped mean. For d = 1 the worst neighbour
// moves every sample of one user from a to b; for d >= 2 it moves each sample
// from b * e_1 to b * e_2.
inline absl::StatusOr<double> Sensitivity(const ClipSpec& spec,
                                          const ContributionProfile& profile) {
  if (absl::Status s = CheckClipSpec(spec, profile); !s.ok()) return s;
  double worst = 0.0;
  for (const auto& user : spec.intervals()) {
    CompensatedSum spread;
    for (const auto& [a, b] : user) spread.Add(profile.d() == 1 ? b - a : b);
    worst = std::max(worst, spread.Result());
  }
  const double factor = profile.d() == 1 ? 1.0 : 2.0;
  return factor * worst / static_cast<double>(profile.total());
}

// E|Z|_1 = d * sensitivity / epsilon for i.i.d. Laplace coordinates.
inline absl::StatusOr<double> NoiseError(const ClipSpec& spec,
                                         const ContributionProfile& profile,
                                         double epsilon) {
  if (absl::Status s = CheckEpsilon(epsilon); !s.ok()) return s;
  absl::StatusOr<double> sens = Sensitivity(spec, profile);
  if (!sens.ok()) return sens.status();
  return profile.d() * *sens / epsilon;
}

inline absl::StatusOr<ErrorReport> WorstCaseError(
    const ClipSpec& spec, const ContributionProfile& profile, double epsilon) {
  if (absl::Status s = CheckEpsilon(epsilon); !s.ok()) return s;
  absl::StatusOr<double> bias = WorstCaseBias(spec, profile);
  if (!bias.ok()) return bias.status();
  absl::StatusOr<double> sens = Sensitivity(spec, profile);
  if (!sens.ok()) return sens.status();
  ErrorReport report;
  report.bias = *bias;
  report.sensitivity = *sens;
  report.noise = profile.d() * *sens / epsilon;
  report.total = report.bias + report.noise;
  return report;
}

// ---------------------------------------------------------------------------
// Brute-force oracles.

inline constexpr int64_t kOracleMaxSamples = 12;
inline constexpr int kOracleMaxDim = 3;

struct OracleOptions {
  // Resolution of the grid sweep over the l1 ball of radius U that
  // supplements the extremal candidates.
  int grid_steps = 8;
  // Candidates tau * U * e_i approximate the (unattained) supremum of the
  // inward displacement; the shortfall is at most tau * U.
  double near_zero = 1e-13;
};

struct BiasWitness {
  double value = 0.0;
  std::optional<Dataset> dataset;
};

struct SensitivityWitness {
  double value = 0.0;
  int user = -1;
  std::optional<Dataset> first;
  std::optional<Dataset> second;
};

namespace internal {

inline absl::Status CheckOracleInstance(const ContributionProfile& profile) {
  if (profile.total() > kOracleMaxSamples) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "oracle instance too large: %d samples (limit %d)", profile.total(),
        kOracleMaxSamples));
  }
  if (profile.d() > kOracleMaxDim) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "oracle instance too large: d = %d (limit %d)", profile.d(),
        kOracleMaxDim));
  }
  return absl::OkStatus();
}

// Enumerates {x >= 0 : sum x_i <= steps} with integer coordinates.
inline void EnumerateGrid(int d, int steps, std::vector<int>& current,
                          int remaining, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(current.size()) == d) {
    out.push_back(current);
    return;
  }
  for (int k = 0; k <= remaining; ++k) {
    current.push_back(k);
    EnumerateGrid(d, steps, current, remaining - k, out);
    current.pop_back();
  }
}

// Candidate raw samples: the origin, tau*U*e_i, U*e_i and a uniform grid of
// the ball of radius U.
inline std::vector<Point> OracleCandidates(int d, double U,
                                           const OracleOptions& options) {
  std::vector<Point> out;
  out.push_back(Point::Zero(d));
  for (int i = 0; i < d; ++i) {
    Point near = Point::Zero(d);
    near[i] = options.near_zero * U;
    out.push_back(near);
    Point corner = Point::Zero(d);
    corner[i] = U;
    out.push_back(corner);
  }
  const int steps = std::max(1, options.grid_steps);
  std::vector<std::vector<int>> grid;
  std::vector<int> current;
  EnumerateGrid(d, steps, current, steps, grid);
  for (const auto& g : grid) {
    std::vector<double> coords(d);
    for (int i = 0; i < d; ++i) coords[i] = U * g[i] / steps;
    Point p(std::move(coords));
    if (L1Norm(p) <= U) out.push_back(std::move(p));
  }
  return out;
}

inline std::vector<std::vector<int>> SignVectors(int d) {
  std::vector<std::vector<int>> out;
  for (int mask = 0; mask < (1 << d); ++mask) {
    std::vector<int> sigma(d);
    for (int i = 0; i < d; ++i) sigma[i] = (mask >> i) & 1 ? -1 : 1;
    out.push_back(std::move(sigma));
  }
  return out;
}

inline double Dot(const std::vector<int>& sigma, const Point& v) {
  double s = 0.0;
  for (int i = 0; i < v.dim(); ++i) s += sigma[i] * v[i];
  return s;
}

inline Point Difference(const Point& x, const Point& y) {
  std::vector<double> out(x.dim());
  for (int i = 0; i < x.dim(); ++i) out[i] = x[i] - y[i];
  return Point(std::move(out));
}

}  // namespace internal

// Maximizes |f(D) - fbar(D)|_1 over datasets whose samples are drawn from the
// candidate set. Since |v|_1 = max over sign vectors s of <s, v> and the bias
// vector is a sum of per-sample displacements, the maximum over the product
// of candidate sets is found exactly by maximizing each sample independently
// for each sign vector. The reported value is recomputed from the witness
// dataset through SampleMean and ClippedMean.
inline absl::StatusOr<BiasWitness> BruteForceBiasOracle(
    const ClipSpec& spec, const ContributionProfile& profile,
    const OracleOptions& options = {}) {
  if (absl::Status s = internal::CheckOracleInstance(profile); !s.ok()) return s;
  if (absl::Status s = CheckClipSpec(spec, profile); !s.ok()) return s;
  const int d = profile.d();
  const std::vector<Point> candidates =
      internal::OracleCandidates(d, profile.U(), options);

  // displacement[l][j][c] = x_c - proj_{l,j}(x_c)
  std::vector<std::vector<std::vector<Point>>> displacement(profile.num_users());
  for (int l = 0; l < profile.num_users(); ++l) {
    displacement[l].resize(profile.count(l));
    for (int64_t j = 0; j < profile.count(l); ++j) {
      const auto [a, b] = spec.at(l, j);
      for (const Point& x : candidates) {
        absl::StatusOr<Point> y = ProjectOntoAnnulus(x, {a, b});
        if (!y.ok()) return y.status();
        displacement[l][j].push_back(internal::Difference(x, *y));
      }
    }
  }

  BiasWitness best;
  best.value = -1.0;
  for (const auto& sigma : internal::SignVectors(d)) {
    std::vector<Dataset::UserSamples> samples(profile.num_users());
    for (int l = 0; l < profile.num_users(); ++l) {
      for (int64_t j = 0; j < profile.count(l); ++j) {
        std::size_t arg = 0;
        double top = -std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < candidates.size(); ++c) {
          const double v = internal::Dot(sigma, displacement[l][j][c]);
          if (v > top) {
            top = v;
            arg = c;
          }
        }
        samples[l].push_back(candidates[arg]);
      }
    }
    absl::StatusOr<Dataset> ds = Dataset::Create(profile, std::move(samples));
    if (!ds.ok()) return ds.status();
    absl::StatusOr<Point> clipped = ClippedMean(*ds, spec);
    if (!clipped.ok()) return clipped.status();
    const double value = L1Distance(SampleMean(*ds), *clipped);
    if (value > best.value) {
      best.value = value;
      best.dataset = *std::move(ds);
    }
  }
  return best;
}

// Maximizes |fbar(D1) - fbar(D2)|_1 over user-level neighbours whose
// differing user draws raw samples from the candidate set (which reaches the
// annulus extremes a, b for d = 1 and b * e_i for d >= 2). Uses the same
// sign-vector decomposition as the bias oracle, per user; the other users
// hold the origin in both datasets.
inline absl::StatusOr<SensitivityWitness> BruteForceSensitivityOracle(
    const ClipSpec& spec, const ContributionProfile& profile,
    const OracleOptions& options = {}) {
  if (absl::Status s = internal::CheckOracleInstance(profile); !s.ok()) return s;
  if (absl::Status s = CheckClipSpec(spec, profile); !s.ok()) return s;
  const int d = profile.d();
  const std::vector<Point> candidates =
      internal::OracleCandidates(d, profile.U(), options);

  SensitivityWitness best;
  best.value = -1.0;
  for (int l = 0; l < profile.num_users(); ++l) {
    std::vector<std::vector<Point>> projected(profile.count(l));
    for (int64_t j = 0; j < profile.count(l); ++j) {
      const auto [a, b] = spec.at(l, j);
      for (const Point& x : candidates) {
        absl::StatusOr<Point> y = ProjectOntoAnnulus(x, {a, b});
        if (!y.ok()) return y.status();
        projected[j].push_back(*std::move(y));
      }
    }
    for (const auto& sigma : internal::SignVectors(d)) {
      std::vector<Dataset::UserSamples> first(profile.num_users());
      std::vector<Dataset::UserSamples> second(profile.num_users());
      for (int k = 0; k < profile.num_users(); ++k) {
        if (k == l) continue;
        first[k].assign(profile.count(k), Point::Zero(d));
        second[k].assign(profile.count(k), Point::Zero(d));
      }
      for (int64_t j = 0; j < profile.count(l); ++j) {
        std::size_t hi = 0;
        std::size_t lo = 0;
        for (std::size_t c = 1; c < candidates.size(); ++c) {
          const double v = internal::Dot(sigma, projected[j][c]);
          if (v > internal::Dot(sigma, projected[j][hi])) hi = c;
          if (v < internal::Dot(sigma, projected[j][lo])) lo = c;
        }
        first[l].push_back(candidates[hi]);
        second[l].push_back(candidates[lo]);
      }
      absl::StatusOr<Dataset> d1 = Dataset::Create(profile, std::move(first));
      if (!d1.ok()) return d1.status();
      absl::StatusOr<Dataset> d2 = Dataset::Create(profile, std::move(second));
      if (!d2.ok()) return d2.status();
      absl::StatusOr<Point> m1 = ClippedMean(*d1, spec);
      if (!m1.ok()) return m1.status();
      absl::StatusOr<Point> m2 = ClippedMean(*d2, spec);
      if (!m2.ok()) return m2.status();
      const double value = L1Distance(*m1, *m2);
      if (value > best.value) {
        best.value = value;
        best.user = l;
        best.first = *std::move(d1);
        best.second = *std::move(d2);
      }
    }
  }
  return best;
}

}  // namespace ulclip

#endif  // ULCLIP_ERROR_ANALYSIS_H_
