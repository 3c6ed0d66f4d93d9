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

#include "ulclip/serialization.h"

#include <cstdint>
#include <vector>

#include "gtest/gtest.h"
#include "oracles.h"
#include "ulclip/bench.h"
#include "ulclip/clipping.h"
#include "ulclip/data_model.h"
#include "ulclip/mechanisms.h"
#include "ulclip/optimizer.h"
#include "ulclip/random.h"

namespace ulclip {
namespace {

using ::ulclip::testing::ValueOrDie;

ContributionProfile Profile(std::vector<int64_t> counts, double U = 1.0,
                            int d = 1) {
  return ValueOrDie(ContributionProfile::Create(std::move(counts), U, d));
}

TEST(ProfileJsonTest, RoundTrip) {
  const ContributionProfile p = Profile({1, 2, 4}, 65.0, 2);
  const Json j = ProfileToJson(p);
  EXPECT_EQ(j.at("U").get<double>(), 65.0);
  EXPECT_EQ(j.at("d").get<int>(), 2);
  EXPECT_EQ(ValueOrDie(ProfileFromJson(j)), p);
}

TEST(ProfileJsonTest, RejectsBadInput) {
  EXPECT_FALSE(ProfileFromJson(Json{{"U", 1.0}, {"d", 1}}).ok());
  EXPECT_FALSE(ProfileFromJson(Json{{"U", "x"}, {"d", 1}, {"counts", {1}}}).ok());
  EXPECT_FALSE(ProfileFromJson(Json{{"U", 1.0}, {"d", 1}, {"counts", {0}}}).ok());
  EXPECT_FALSE(internal::ParseJson("{", "test").ok());
}

TEST(ClipSpecJsonTest, PerUserForm) {
  const ContributionProfile p = Profile({1, 2, 4});
  const ClipSpec spec = ValueOrDie(OptimalClipSpec(p, 1.0)).spec;
  const Json j = ClipSpecToJson(spec);
  ASSERT_TRUE(j.contains("per_user"));
  EXPECT_EQ(j.at("per_user").size(), 3u);
  EXPECT_EQ(j.at("per_user")[2].at("a").get<double>(), 0.25);
  EXPECT_EQ(ValueOrDie(ClipSpecFromJson(j, p)), spec);
}

TEST(ClipSpecJsonTest, PerSampleForm) {
  const ContributionProfile p = Profile({1, 2});
  ClipSpec spec = ClipSpec::FullRange(p);
  spec.at(1, 0) = {0.1, 0.9};
  const Json j = ClipSpecToJson(spec);
  ASSERT_TRUE(j.contains("per_sample"));
  EXPECT_EQ(ValueOrDie(ClipSpecFromJson(j, p)), spec);
}

TEST(ClipSpecJsonTest, RejectsBadInput) {
  const ContributionProfile p = Profile({1, 2});
  EXPECT_FALSE(ClipSpecFromJson(Json::object(), p).ok());
  EXPECT_FALSE(
      ClipSpecFromJson(Json::parse(R"({"per_user":[{"a":0,"b":1}]})"), p).ok());
  EXPECT_FALSE(
      ClipSpecFromJson(Json::parse(R"({"per_user":[{"a":0},{"a":0}]})"), p).ok());
}

TEST(ReportJsonTest, Fields) {
  const OptimalPlan plan = ValueOrDie(OptimalClipSpec(Profile({1, 2, 4}), 1.0));
  const Json j = PlanToJson(plan);
  EXPECT_EQ(j.at("t_epsilon").get<double>(), 2.0);
  EXPECT_EQ(j.at("per_user").size(), 3u);
  EXPECT_DOUBLE_EQ(j.at("predicted").at("total").get<double>(), 3.0 / 7);
  for (const char* key : {"bias", "noise", "sensitivity", "total"}) {
    EXPECT_TRUE(j.at("predicted").contains(key)) << key;
  }
}

TEST(AuditJsonTest, Fields) {
  const ContributionProfile p = Profile({1, 2});
  const Dataset ds =
      ValueOrDie(Dataset::Create(p, {{Point{0.5}}, {Point{0.2}, Point{0.9}}}));
  RandomStream rng(1);
  MechanismOutput out = ValueOrDie(AkmvMechanism(ds, PrivacyBudget{1.0}, rng));
  out.audit.seed = 99;
  const Json j = MechanismOutputToJson(out);
  EXPECT_EQ(j.at("audit").at("mechanism"), "akmv");
  EXPECT_EQ(j.at("audit").at("epsilon").at("quantile").get<double>(), 0.5);
  EXPECT_EQ(j.at("audit").at("epsilon").at("release").get<double>(), 0.5);
  EXPECT_TRUE(j.at("audit").contains("threshold"));
  EXPECT_EQ(j.at("audit").at("seed").get<uint64_t>(), 99u);
  EXPECT_EQ(j.at("estimate").size(), 1u);
}

TEST(ProfileSourceTest, Parse) {
  const ProfileSource g = ValueOrDie(ParseProfileSource("geometric:6"));
  EXPECT_EQ(g.kind, ProfileSource::Kind::kGeometric);
  EXPECT_EQ(g.M, 6);
  const ProfileSource e = ValueOrDie(ParseProfileSource("extreme:101:10"));
  EXPECT_EQ(e.L, 101);
  EXPECT_EQ(e.m_star, 10);
  const ProfileSource c = ValueOrDie(ParseProfileSource("counts:1,2,4"));
  EXPECT_EQ(c.counts, (std::vector<int64_t>{1, 2, 4}));
  for (const char* bad : {"", "geometric", "geometric:x", "extreme:3",
                          "counts:", "counts:1,x", "poisson:3"}) {
    EXPECT_FALSE(ParseProfileSource(bad).ok()) << bad;
  }
}

TEST(BenchConfigJsonTest, RoundTripAndDefaults) {
  BenchConfig c;
  c.profile = ValueOrDie(ParseProfileSource("extreme:101:10"));
  c.distribution = SampleDistribution::kProjectedGaussian;
  c.epsilons = {0.3, 3.0};
  c.trials = 17;
  c.seed = 12345678901234ull;
  c.mechanisms = {kAkmv};
  c.threads = 2;
  const BenchConfig back = ValueOrDie(BenchConfigFromJson(BenchConfigToJson(c)));
  EXPECT_EQ(BenchConfigToJson(back), BenchConfigToJson(c));

  const BenchConfig defaults = ValueOrDie(BenchConfigFromJson(Json::object()));
  EXPECT_EQ(defaults.trials, 10000);
  EXPECT_EQ(defaults.epsilons, (std::vector<double>{0.2, 0.5, 1.0, 2.0}));
  EXPECT_FALSE(BenchConfigFromJson(Json{{"trials", 0}}).ok());
  EXPECT_FALSE(BenchConfigFromJson(Json{{"trials", "many"}}).ok());
}

}  // namespace
}  // namespace ulclip
