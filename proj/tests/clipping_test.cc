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

#include "ulclip/clipping.h"

#include <cstdint>
#include <vector>

#include "absl/strings/match.h"
#include "gtest/gtest.h"
#include "oracles.h"
#include "ulclip/data_model.h"
#include "ulclip/error_analysis.h"
#include "ulclip/geometry.h"
#include "ulclip/random.h"
#include "ulclip/verification.h"

namespace ulclip {
namespace {

using ::ulclip::testing::RandomDataset;
using ::ulclip::testing::ValueOrDie;

ContributionProfile Profile(std::vector<int64_t> counts, double U = 1.0,
                            int d = 1) {
  return ValueOrDie(ContributionProfile::Create(std::move(counts), U, d));
}

TEST(ValidateClipSpecTest, FullRangeIsValid) {
  const ContributionProfile p = Profile({1, 2, 4});
  EXPECT_TRUE(ValidateClipSpec(ClipSpec::FullRange(p), p).empty());
}

TEST(ValidateClipSpecTest, ReportsInvertedInterval) {
  const ContributionProfile p = Profile({1, 2});
  ClipSpec spec = ClipSpec::FullRange(p);
  spec.at(1, 1) = {0.8, 0.2};
  const std::vector<ClipViolation> v = ValidateClipSpec(spec, p);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].user, 1);
  EXPECT_EQ(v[0].sample, 1);
  EXPECT_TRUE(absl::StrContains(v[0].message, "inverted"));
}

TEST(ValidateClipSpecTest, ReportsExceedsU) {
  const ContributionProfile p = Profile({1});
  const std::vector<ClipViolation> v =
      ValidateClipSpec(ClipSpec::Constant({0.0, 2.0}, p), p);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_TRUE(absl::StrContains(v[0].message, "exceeds U"));
}

TEST(ValidateClipSpecTest, ReportsEveryViolation) {
  const ContributionProfile p = Profile({2, 1});
  ClipSpec spec({{{-1.0, 0.5}, {0.0, 2.0}}, {{0.0, 1.0}, {0.0, 1.0}}});
  const std::vector<ClipViolation> v = ValidateClipSpec(spec, p);
  ASSERT_EQ(v.size(), 3u);
  EXPECT_EQ(v[0].sample, 0);
  EXPECT_EQ(v[1].sample, 1);
  EXPECT_EQ(v[2].user, 1);
  EXPECT_EQ(v[2].sample, -1);

  EXPECT_EQ(ValidateClipSpec(ClipSpec(std::vector<std::vector<ClipInterval>>{}), p).size(), 1u);
  EXPECT_FALSE(CheckClipSpec(spec, p).ok());
}

TEST(ClipSpecTest, PerUserConstructor) {
  const ContributionProfile p = Profile({1, 3});
  const std::vector<ClipInterval> per_user = {{0.0, 1.0}, {0.2, 0.4}};
  const ClipSpec spec = ClipSpec::PerUser(per_user, p);
  EXPECT_EQ(spec.user(1).size(), 3u);
  EXPECT_EQ(spec.at(1, 2), (ClipInterval{0.2, 0.4}));
  EXPECT_TRUE(spec.IsPerUserConstant());
  ClipSpec varied = spec;
  varied.at(1, 0) = {0.0, 0.0};
  EXPECT_FALSE(varied.IsPerUserConstant());
}

TEST(ApplyClipSpecTest, Examples) {
  const ContributionProfile p = Profile({1, 2});
  const Dataset ds = ValueOrDie(
      Dataset::Create(p, {{Point{0.9}}, {Point{0.1}, Point{0.5}}}));
  EXPECT_EQ(ValueOrDie(ApplyClipSpec(ds, ClipSpec::FullRange(p))), ds);

  const Dataset clipped =
      ValueOrDie(ApplyClipSpec(ds, ClipSpec::Constant({0.25, 0.75}, p)));
  EXPECT_EQ(clipped.user(0)[0], (Point{0.75}));
  EXPECT_EQ(clipped.user(1)[0], (Point{0.25}));
  EXPECT_EQ(clipped.user(1)[1], (Point{0.5}));

  const Dataset half =
      ValueOrDie(ApplyClipSpec(ds, ClipSpec::Constant({0.5, 0.5}, p)));
  for (const auto& user : half.samples()) {
    for (const Point& x : user) EXPECT_EQ(x, (Point{0.5}));
  }
}

TEST(ApplyClipSpecTest, PropagatesValidation) {
  const ContributionProfile p = Profile({1});
  const Dataset ds = ValueOrDie(Dataset::Create(p, {{Point{0.5}}}));
  EXPECT_FALSE(ApplyClipSpec(ds, ClipSpec::Constant({0.6, 0.1}, p)).ok());
  EXPECT_FALSE(ClippedMean(ds, ClipSpec::Constant({0.0, 3.0}, p)).ok());
}

TEST(ClippedMeanTest, Examples) {
  const ContributionProfile p = Profile({1, 1});
  const Dataset ds = ValueOrDie(Dataset::Create(p, {{Point{0}}, {Point{1}}}));
  EXPECT_EQ(ValueOrDie(ClippedMean(ds, ClipSpec::FullRange(p))), SampleMean(ds));
  EXPECT_EQ(ValueOrDie(ClippedMean(ds, ClipSpec::Constant({0.25, 0.75}, p))),
            (Point{0.5}));
  EXPECT_EQ(ValueOrDie(ClippedMean(ds, ClipSpec::Constant({0.0, 0.0}, p))),
            Point::Zero(1));
}

TEST(ClippedMeanProperty, IdentityMeanBallAndBiasBound) {
  RandomStream rng(11);
  for (int iter = 0; iter < 2000; ++iter) {
    const int d = 1 + iter % 3;
    const ContributionProfile p = RandomProfile(rng, 5, 5, 20, 2.0, d);
    const Dataset ds = RandomDataset(rng, p);
    const ClipSpec spec = RandomClipSpec(rng, p);

    ASSERT_EQ(ValueOrDie(ClippedMean(ds, ClipSpec::FullRange(p))),
              SampleMean(ds));

    const Point mean = ValueOrDie(ClippedMean(ds, spec));
    double max_b = 0.0;
    for (const auto& user : spec.intervals()) {
      for (const ClipInterval& iv : user) max_b = std::max(max_b, iv.b);
    }
    ASSERT_LE(L1Norm(mean), max_b * (1 + 1e-12));
    for (double c : mean.coords()) ASSERT_GE(c, 0.0);

    const double bias = ValueOrDie(WorstCaseBias(spec, p));
    ASSERT_LE(L1Distance(SampleMean(ds), mean), bias + 1e-12)
        << "iteration " << iter;
  }
}

TEST(ApplyClipSpecProperty, OutputsLieInTheirAnnuli) {
  RandomStream rng(12);
  for (int iter = 0; iter < 2000; ++iter) {
    const int d = 1 + iter % 3;
    const ContributionProfile p = RandomProfile(rng, 4, 4, 12, 1.5, d);
    const Dataset ds = RandomDataset(rng, p);
    const ClipSpec spec = RandomClipSpec(rng, p);
    const Dataset out = ValueOrDie(ApplyClipSpec(ds, spec));
    for (int l = 0; l < p.num_users(); ++l) {
      for (std::size_t j = 0; j < out.user(l).size(); ++j) {
        const double norm = L1Norm(out.user(l)[j]);
        const auto [a, b] = spec.at(l, j);
        ASSERT_LE(norm, b) << "iter " << iter;
        // A zero-width shell can lack a representable point of norm exactly
        // a; the projection then stays just inside the outer ball.
        const double slack = a == b ? 4e-16 * std::max(1.0, a) : 0.0;
        ASSERT_GE(norm, a - slack)
            << "iter " << iter << " x " << ds.user(l)[j] << " y "
            << out.user(l)[j] << " a " << a;
      }
    }
  }
}

}  // namespace
}  // namespace ulclip
