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

// Contribution profiles, datasets, the sample mean and the synthetic
// generators used by the experiments.

#ifndef ULCLIP_DATA_MODEL_H_
#define ULCLIP_DATA_MODEL_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"
#include "ulclip/geometry.h"
#include "ulclip/random.h"

namespace ulclip {

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void Add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      compensation_ += (sum_ - t) + x;
    } else {
      compensation_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double Result() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

// Public metadata of a dataset: how many samples each user contributes, the
// l1 bound U on every sample, and the dimension d.
class ContributionProfile {
 public:
  static absl::StatusOr<ContributionProfile> Create(std::vector<int64_t> counts,
                                                    double U, int d) {
    if (counts.empty()) {
      return absl::InvalidArgumentError("profile needs at least one user");
    }
    for (std::size_t l = 0; l < counts.size(); ++l) {
      if (counts[l] < 1) {
        return absl::InvalidArgumentError(absl::StrFormat(
            "user %d has contribution count %d; counts must be >= 1", l,
            counts[l]));
      }
    }
    if (!(U > 0.0) || !std::isfinite(U)) {
      return absl::InvalidArgumentError(
          absl::StrFormat("U must be finite and > 0, got %g", U));
    }
    if (d < 1) {
      return absl::InvalidArgumentError(
          absl::StrFormat("dimension must be >= 1, got %d", d));
    }
    return ContributionProfile(std::move(counts), U, d);
  }

  std::span<const int64_t> counts() const { return counts_; }
  int64_t count(std::size_t user) const { return counts_[user]; }
  int num_users() const { return static_cast<int>(counts_.size()); }
  double U() const { return U_; }
  int d() const { return d_; }
  int64_t max_count() const { return max_count_; }
  // Exposed for completeness; none of the error formulas use it.
  int64_t min_count() const { return min_count_; }
  int64_t total() const { return total_; }

  friend bool operator==(const ContributionProfile&,
                         const ContributionProfile&) = default;

 private:
  ContributionProfile(std::vector<int64_t> counts, double U, int d)
      : counts_(std::move(counts)), U_(U), d_(d) {
    max_count_ = *std::max_element(counts_.begin(), counts_.end());
    min_count_ = *std::min_element(counts_.begin(), counts_.end());
    total_ = std::accumulate(counts_.begin(), counts_.end(), int64_t{0});
  }

  std::vector<int64_t> counts_;
  double U_ = 0.0;
  int d_ = 0;
  int64_t max_count_ = 0;
  int64_t min_count_ = 0;
  int64_t total_ = 0;
};

// Checks that `p` has dimension d and lies in {x >= 0 : |x|_1 <= U}.
inline absl::Status ValidateSample(const Point& p, int d, double U) {
  if (p.dim() != d) {
    return absl::InvalidArgumentError(
        absl::StrFormat("sample has dimension %d, expected %d", p.dim(), d));
  }
  if (absl::Status s = ValidatePoint(p); !s.ok()) return s;
  if (const double norm = L1Norm(p); norm > U) {
    return absl::InvalidArgumentError(
        absl::StrFormat("sample l1 norm %.17g exceeds U = %.17g", norm, U));
  }
  return absl::OkStatus();
}

// Per-user sample lists; user l holds exactly profile.count(l) samples.
class Dataset {
 public:
  using UserSamples = std::vector<Point>;

  static absl::StatusOr<Dataset> Create(ContributionProfile profile,
                                        std::vector<UserSamples> samples) {
    if (static_cast<int>(samples.size()) != profile.num_users()) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "dataset has %d users, profile has %d", samples.size(),
          profile.num_users()));
    }
    for (std::size_t l = 0; l < samples.size(); ++l) {
      if (static_cast<int64_t>(samples[l].size()) != profile.count(l)) {
        return absl::InvalidArgumentError(absl::StrFormat(
            "user %d has %d samples, profile says %d", l, samples[l].size(),
            profile.count(l)));
      }
      for (std::size_t j = 0; j < samples[l].size(); ++j) {
        if (absl::Status s =
                ValidateSample(samples[l][j], profile.d(), profile.U());
            !s.ok()) {
          return absl::InvalidArgumentError(absl::StrFormat(
              "user %d sample %d: %s", l, j, s.message()));
        }
      }
    }
    return Dataset(std::move(profile), std::move(samples));
  }

  const ContributionProfile& profile() const { return profile_; }
  const std::vector<UserSamples>& samples() const { return samples_; }
  const UserSamples& user(std::size_t l) const { return samples_[l]; }

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  Dataset(ContributionProfile profile, std::vector<UserSamples> samples)
      : profile_(std::move(profile)), samples_(std::move(samples)) {}

  ContributionProfile profile_;
  std::vector<UserSamples> samples_;
};

// Mean of per-user sample lists, divided by the total sample count.
inline Point MeanOfSamples(const std::vector<Dataset::UserSamples>& samples,
                           int d, int64_t total) {
  std::vector<CompensatedSum> sums(d);
  for (const auto& user : samples) {
    for (const Point& x : user) {
      for (int i = 0; i < d; ++i) sums[i].Add(x[i]);
    }
  }
  std::vector<double> mean(d);
  for (int i = 0; i < d; ++i) {
    mean[i] = sums[i].Result() / static_cast<double>(total);
  }
  return Point(std::move(mean));
}

// The sample mean f(D) over all users' samples.
inline Point SampleMean(const Dataset& ds) {
  return MeanOfSamples(ds.samples(), ds.profile().d(), ds.profile().total());
}

// Coordinate-wise sum of one user's samples.
inline Point UserSum(const Dataset::UserSamples& user, int d) {
  std::vector<CompensatedSum> sums(d);
  for (const Point& x : user) {
    for (int i = 0; i < d; ++i) sums[i].Add(x[i]);
  }
  std::vector<double> out(d);
  for (int i = 0; i < d; ++i) out[i] = sums[i].Result();
  return Point(std::move(out));
}

// Replaces every sample of a user by that user's average sample. Contribution
// counts and user sums (hence the sample mean) are unchanged.
inline Dataset PreprocessUserAverage(const Dataset& ds) {
  const int d = ds.profile().d();
  std::vector<Dataset::UserSamples> out;
  out.reserve(ds.samples().size());
  for (const auto& user : ds.samples()) {
    Point avg = UserSum(user, d);
    for (int i = 0; i < d; ++i) avg[i] /= static_cast<double>(user.size());
    // Averaging boundary points can overshoot U by a few ulps when d > 1.
    if (L1Norm(avg) > ds.profile().U()) {
      avg = ProjectOntoSimplex(avg, SimplexBound{ds.profile().U()}).value();
    }
    out.emplace_back(user.size(), avg);
  }
  return Dataset::Create(ds.profile(), std::move(out)).value();
}

// 2^i users contributing 2^(M-i) samples each, for i = 0..M.
inline absl::StatusOr<ContributionProfile> GeometricProfile(int M, double U,
                                                            int d) {
  if (M < 0 || M > 30) {
    return absl::InvalidArgumentError(
        absl::StrFormat("geometric profile needs 0 <= M <= 30, got %d", M));
  }
  std::vector<int64_t> counts;
  counts.reserve((int64_t{2} << M) - 1);
  for (int i = 0; i <= M; ++i) {
    counts.insert(counts.end(), int64_t{1} << i, int64_t{1} << (M - i));
  }
  return ContributionProfile::Create(std::move(counts), U, d);
}

// L - 1 users with one sample each and one user with m_star samples.
inline absl::StatusOr<ContributionProfile> ExtremeProfile(int L, int64_t m_star,
                                                          double U, int d) {
  if (L < 2) {
    return absl::InvalidArgumentError(
        absl::StrFormat("extreme profile needs L >= 2, got %d", L));
  }
  if (m_star <= 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("extreme profile needs m_star > 1, got %d", m_star));
  }
  std::vector<int64_t> counts(L - 1, 1);
  counts.push_back(m_star);
  return ContributionProfile::Create(std::move(counts), U, d);
}

namespace internal {

template <typename Draw>
absl::StatusOr<Dataset> GenerateScalarDataset(const ContributionProfile& profile,
                                              Draw&& draw) {
  if (profile.d() != 1) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "synthetic generators are scalar; profile has d = %d", profile.d()));
  }
  std::vector<Dataset::UserSamples> samples(profile.num_users());
  for (int l = 0; l < profile.num_users(); ++l) {
    samples[l].reserve(profile.count(l));
    for (int64_t j = 0; j < profile.count(l); ++j) {
      absl::StatusOr<double> x = draw();
      if (!x.ok()) return x.status();
      samples[l].push_back(Point{*x});
    }
  }
  return Dataset::Create(profile, std::move(samples));
}

}  // namespace internal

// i.i.d. Unif((0, U]) samples, realized as U * (1 - u) with u in [0, 1).
inline absl::StatusOr<Dataset> SampleUniform(const ContributionProfile& profile,
                                             RandomStream& rng) {
  const double U = profile.U();
  return internal::GenerateScalarDataset(
      profile, [&]() -> absl::StatusOr<double> {
        return U * rng.NextUniformOpenClosed();
      });
}
inline absl::StatusOr<Dataset> SampleUniform(const ContributionProfile& profile,
                                             uint64_t seed) {
  RandomStream rng(seed);
  return SampleUniform(profile, rng);
}

inline constexpr int kMaxRejectionAttempts = 1'000'000;

// i.i.d. draws from the normal law with mean U/2 and variance U/4, redrawn
// until they land in (0, U].
inline absl::StatusOr<Dataset> SampleProjectedGaussian(
    const ContributionProfile& profile, RandomStream& rng) {
  const double U = profile.U();
  const double mean = U / 2.0;
  const double stddev = std::sqrt(U / 4.0);
  return internal::GenerateScalarDataset(
      profile, [&]() -> absl::StatusOr<double> {
        for (int attempt = 0; attempt < kMaxRejectionAttempts; ++attempt) {
          const double x = mean + stddev * rng.NextStandardNormal();
          if (x > 0.0 && x <= U) return x;
        }
        return absl::InternalError(
            "projected Gaussian rejection sampling did not terminate");
      });
}
inline absl::StatusOr<Dataset> SampleProjectedGaussian(
    const ContributionProfile& profile, uint64_t seed) {
  RandomStream rng(seed);
  return SampleProjectedGaussian(profile, rng);
}

}  // namespace ulclip

#endif  // ULCLIP_DATA_MODEL_H_
