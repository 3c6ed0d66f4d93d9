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

// The clipping estimator class: every sample x_j of user l is projected onto
// the annulus with inner radius a_j and outer radius b_j (0 <= a <= b <= U),
// and the clipped mean averages the projected samples.

#ifndef ULCLIP_CLIPPING_H_
#define ULCLIP_CLIPPING_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "ulclip/data_model.h"
#include "ulclip/geometry.h"

namespace ulclip {

struct ClipInterval {
  double a = 0.0;
  double b = 0.0;

  friend bool operator==(const ClipInterval&, const ClipInterval&) = default;
};

// Per-user, per-sample clipping intervals, shaped like a contribution profile.
class ClipSpec {
 public:
  ClipSpec() = default;
  explicit ClipSpec(std::vector<std::vector<ClipInterval>> intervals)
      : intervals_(std::move(intervals)) {}

  // One interval per user, repeated for each of the user's samples.
  static ClipSpec PerUser(std::span<const ClipInterval> per_user,
                          const ContributionProfile& profile) {
    std::vector<std::vector<ClipInterval>> intervals;
    intervals.reserve(per_user.size());
    for (std::size_t l = 0; l < per_user.size(); ++l) {
      const int64_t m = l < static_cast<std::size_t>(profile.num_users())
                            ? profile.count(l)
                            : 1;
      intervals.emplace_back(m, per_user[l]);
    }
    return ClipSpec(std::move(intervals));
  }

  // The same interval everywhere.
  static ClipSpec Constant(ClipInterval interval,
                           const ContributionProfile& profile) {
    std::vector<ClipInterval> per_user(profile.num_users(), interval);
    return PerUser(per_user, profile);
  }

  // a = 0, b = U everywhere: the identity estimator.
  static ClipSpec FullRange(const ContributionProfile& profile) {
    return Constant({0.0, profile.U()}, profile);
  }

  int num_users() const { return static_cast<int>(intervals_.size()); }
  const std::vector<ClipInterval>& user(std::size_t l) const {
    return intervals_[l];
  }
  const ClipInterval& at(std::size_t l, std::size_t j) const {
    return intervals_[l][j];
  }
  ClipInterval& at(std::size_t l, std::size_t j) { return intervals_[l][j]; }
  const std::vector<std::vector<ClipInterval>>& intervals() const {
    return intervals_;
  }

  // True when every user's samples share one interval.
  bool IsPerUserConstant() const {
    for (const auto& user : intervals_) {
      for (const ClipInterval& iv : user) {
        if (!(iv == user.front())) return false;
      }
    }
    return true;
  }

  friend bool operator==(const ClipSpec&, const ClipSpec&) = default;

 private:
  std::vector<std::vector<ClipInterval>> intervals_;
};

struct ClipViolation {
  int user = -1;
  // -1 when the violation concerns the user's shape rather than one sample.
  int sample = -1;
  std::string message;
};

// Returns every shape or range violation; an empty list means the spec is
// valid for `profile`.
inline std::vector<ClipViolation> ValidateClipSpec(
    const ClipSpec& spec, const ContributionProfile& profile) {
  std::vector<ClipViolation> violations;
  if (spec.num_users() != profile.num_users()) {
    violations.push_back(
        {-1, -1,
         absl::StrFormat("spec has %d users, profile has %d", spec.num_users(),
                         profile.num_users())});
  }
  const double U = profile.U();
  const int users = std::min(spec.num_users(), profile.num_users());
  for (int l = 0; l < users; ++l) {
    const auto& user = spec.user(l);
    if (static_cast<int64_t>(user.size()) != profile.count(l)) {
      violations.push_back(
          {l, -1,
           absl::StrFormat("user has %d intervals, profile says %d",
                           user.size(), profile.count(l))});
    }
    for (std::size_t j = 0; j < user.size(); ++j) {
      const auto [a, b] = user[j];
      const int js = static_cast<int>(j);
      if (!std::isfinite(a) || !std::isfinite(b)) {
        violations.push_back({l, js, "interval endpoint is not finite"});
        continue;
      }
      if (a < 0.0) {
        violations.push_back({l, js, absl::StrFormat("a = %g is negative", a)});
      }
      if (a > b) {
        violations.push_back(
            {l, js, absl::StrFormat("inverted interval a = %g > b = %g", a, b)});
      }
      if (b > U) {
        violations.push_back(
            {l, js, absl::StrFormat("b = %g exceeds U = %g", b, U)});
      }
    }
  }
  return violations;
}

// ValidateClipSpec folded into a single status.
inline absl::Status CheckClipSpec(const ClipSpec& spec,
                                  const ContributionProfile& profile) {
  const std::vector<ClipViolation> violations = ValidateClipSpec(spec, profile);
  if (violations.empty()) return absl::OkStatus();
  return absl::InvalidArgumentError(absl::StrCat(
      "invalid clip spec: ",
      absl::StrJoin(violations, "; ", [](std::string* out, const auto& v) {
        absl::StrAppendFormat(out, "(user %d, sample %d) %s", v.user, v.sample,
                              v.message);
      })));
}

// Projects every sample onto its annulus.
inline absl::StatusOr<Dataset> ApplyClipSpec(const Dataset& ds,
                                             const ClipSpec& spec) {
  if (absl::Status s = CheckClipSpec(spec, ds.profile()); !s.ok()) return s;
  std::vector<Dataset::UserSamples> clipped(ds.samples().size());
  for (std::size_t l = 0; l < ds.samples().size(); ++l) {
    clipped[l].reserve(ds.user(l).size());
    for (std::size_t j = 0; j < ds.user(l).size(); ++j) {
      const auto [a, b] = spec.at(l, j);
      absl::StatusOr<Point> y = ProjectOntoAnnulus(ds.user(l)[j], {a, b});
      if (!y.ok()) return y.status();
      clipped[l].push_back(*std::move(y));
    }
  }
  return Dataset::Create(ds.profile(), std::move(clipped));
}

// The clipped-mean estimator f-bar(D).
inline absl::StatusOr<Point> ClippedMean(const Dataset& ds,
                                         const ClipSpec& spec) {
  absl::StatusOr<Dataset> clipped = ApplyClipSpec(ds, spec);
  if (!clipped.ok()) return clipped.status();
  return SampleMean(*clipped);
}

}  // namespace ulclip

#endif  // ULCLIP_CLIPPING_H_
