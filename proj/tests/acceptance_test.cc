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

// Acceptance suite. Prints one [PASS]/[FAIL] line per criterion.
//
//   acceptance_test [--known-red=AC6,...]
//
// Exits 0 when every failing criterion is listed in --known-red.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"
#include "absl/strings/strip.h"
#include "oracles.h"
#include "ulclip/ulclip.h"

namespace ulclip {
namespace {

using ::ulclip::testing::GridMinDistance;
using ::ulclip::testing::RandomDataset;
using ::ulclip::testing::ValueOrDie;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double Seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

Outcome ClosedFormOptimality() {
  const auto start = std::chrono::steady_clock::now();
  const OptimalitySummary s = ValueOrDie(VerifyOptimality(200, 2026, 100));
  const double secs = Seconds(start);
  Outcome o;
  o.pass = s.instances == 200 && s.failures == 0 && secs < 60.0;
  o.detail = absl::StrFormat(
      "%d instances, %d failures, min margin %.3g, max margin/slack %.3g, "
      "consistency gap %.3g, %.2fs",
      s.instances, s.failures, s.min_margin, s.max_slack_ratio,
      s.max_consistency_gap, secs);
  if (!s.first_failure.empty()) o.detail += "; first: " + s.first_failure;
  return o;
}

Outcome FormulaOracleAgreement() {
  const auto start = std::chrono::steady_clock::now();
  const AgreementSummary s = ValueOrDie(VerifyBiasAndSensitivity(500, 2027, 1e-9));
  const double secs = Seconds(start);
  Outcome o;
  o.pass = s.instances == 500 && s.failures == 0 && secs < 30.0;
  o.detail = absl::StrFormat("%d instances, %d failures, max gap %.3g, %.2fs",
                             s.instances, s.failures, s.max_gap, secs);
  if (!s.first_failure.empty()) o.detail += "; first: " + s.first_failure;
  return o;
}

Outcome ProjectionOptimality() {
  constexpr double kH = 0.01;
  RandomStream rng(2028);
  int checks = 0;
  double worst_grid_excess = 0.0;   // proj distance - grid distance
  double worst_grid_gap = 0.0;      // grid distance - proj distance
  double worst_law = 0.0;
  bool ok = true;
  for (int iter = 0; iter < 60; ++iter) {
    const int d = 1 + iter % 3;
    // Bounds are multiples of h so grid points exist on both boundaries.
    const int64_t hi_units = 20 + static_cast<int64_t>(rng.NextU64() % 81);
    const int64_t lo_units = static_cast<int64_t>(rng.NextU64() % (hi_units + 1));
    const double hi = hi_units * kH;
    const double lo = lo_units * kH;
    std::vector<double> c(d);
    for (double& v : c) v = 1.5 * rng.NextUniform();
    const Point p(c);
    const double norm = L1Norm(p);

    const Point s = ValueOrDie(ProjectOntoSimplex(p, SimplexBound{hi}));
    const double ds = L1Distance(p, s);
    const double gs = GridMinDistance(p, kH, 0, hi_units);
    const Point a = ValueOrDie(ProjectOntoAnnulus(p, AnnulusBound{lo, hi}));
    const double da = L1Distance(p, a);
    const double ga = GridMinDistance(p, kH, lo_units, hi_units);
    for (const auto& [proj, grid] : {std::pair{ds, gs}, std::pair{da, ga}}) {
      worst_grid_excess = std::max(worst_grid_excess, proj - grid);
      worst_grid_gap = std::max(worst_grid_gap, grid - proj);
      ok = ok && proj <= grid + 1e-12 && grid - proj <= d * kH;
    }
    const double law_s = norm > hi ? std::abs(ds - (norm - hi)) : ds;
    const double law_a = norm > hi   ? std::abs(da - (norm - hi))
                         : norm < lo ? std::abs(da - (lo - norm))
                                     : da;
    worst_law = std::max({worst_law, law_s, law_a});
    ok = ok && law_s <= 1e-12 && law_a <= 1e-12;
    ok = ok && L1Norm(s) <= hi && L1Norm(a) <= hi && L1Norm(a) >= lo;
    checks += 2;
  }
  Outcome o;
  o.pass = ok;
  o.detail = absl::StrFormat(
      "%d projections (h=%.2f, d<=3): max proj-grid %.3g, max grid-proj %.3g, "
      "max distance-law error %.3g",
      checks, kH, worst_grid_excess, worst_grid_gap, worst_law);
  return o;
}

Outcome LimitChecks() {
  bool ok = true;
  std::string detail;
  for (int d = 1; d <= 3; ++d) {
    const ContributionProfile p = ValueOrDie(GeometricProfile(6, 65.0, d));
    const double e = ValueOrDie(OptimalErrorClosedForm(p, 1e-6));
    const double target = d == 1 ? 32.5 : 65.0;
    ok = ok && std::abs(e - target) <= 1e-3;
    detail += absl::StrFormat("d=%d eps=1e-6: %.9g (target %g); ", d, e, target);
  }
  const ContributionProfile homogeneous = ValueOrDie(
      ContributionProfile::Create(std::vector<int64_t>(100, 1), 65.0, 1));
  const double e = ValueOrDie(OptimalErrorClosedForm(homogeneous, 1.0));
  const ErrorReport noise_only = ValueOrDie(
      WorstCaseError(ClipSpec::FullRange(homogeneous), homogeneous, 1.0));
  ok = ok && std::abs(e - 0.65) <= 1e-12 && std::abs(e - noise_only.total) <= 1e-12;
  detail += absl::StrFormat("L=100,U=65,eps=1: %.17g (no-clipping %.17g)", e,
                            noise_only.total);
  return {ok, detail};
}

Outcome NoiseCalibration() {
  const auto start = std::chrono::steady_clock::now();
  constexpr double kScale = 2.5;
  constexpr int kDraws = 1'000'000;
  RandomStream rng(2029);
  const NoiseDraw draw = ValueOrDie(SampleLaplaceVector(kScale, kDraws, rng));
  double abs_sum = 0.0;
  double sum = 0.0;
  for (double z : draw.values) {
    abs_sum += std::abs(z);
    sum += z;
  }
  const double mean = sum / kDraws;
  double ss = 0.0;
  for (double z : draw.values) ss += (z - mean) * (z - mean);
  const double mean_abs = abs_sum / kDraws;
  const double variance = ss / (kDraws - 1);
  const double secs = Seconds(start);
  const double abs_rel = std::abs(mean_abs - kScale) / kScale;
  const double var_rel = std::abs(variance - 2 * kScale * kScale) / (2 * kScale * kScale);
  Outcome o;
  o.pass = abs_rel <= 0.01 && var_rel <= 0.02 && secs < 10.0;
  o.detail = absl::StrFormat(
      "b=%g: mean|Z| %.5f (rel err %.2e), var %.5f (rel err %.2e), %.2fs",
      kScale, mean_abs, abs_rel, variance, var_rel, secs);
  return o;
}

const BenchRow& FindRow(const std::vector<BenchRow>& rows, double eps,
                        const std::string& mech) {
  return *std::find_if(rows.begin(), rows.end(), [&](const BenchRow& r) {
    return r.epsilon == eps && r.mechanism == mech;
  });
}

Outcome ExperimentOrdering() {
  const auto start = std::chrono::steady_clock::now();
  struct Setting {
    const char* name;
    const char* profile;
    SampleDistribution dist;
  };
  const Setting settings[] = {
      {"geometric M=6 uniform", "geometric:6", SampleDistribution::kUniform},
      {"extreme L=101 m=10 gaussian", "extreme:101:10",
       SampleDistribution::kProjectedGaussian},
  };
  bool ok = true;
  std::string detail;
  for (const Setting& s : settings) {
    BenchConfig config;
    config.profile = ValueOrDie(ParseProfileSource(s.profile));
    config.distribution = s.dist;
    config.trials = 2000;
    config.seed = 2030;
    config.threads = 0;
    const std::vector<BenchRow> rows = ValueOrDie(RunBenchmark(config));
    int akmv_not_better = 0;
    detail += absl::StrFormat("[%s]", s.name);
    for (double eps : config.epsilons) {
      const BenchRow& lap = FindRow(rows, eps, kVanillaLaplace);
      const BenchRow& opt = FindRow(rows, eps, kOptWorstCase);
      const BenchRow& akmv = FindRow(rows, eps, kAkmv);
      const double se = std::hypot(lap.std_err, opt.std_err);
      const double gap = lap.mean_abs_error - opt.mean_abs_error;
      const bool opt_wins = gap > 3 * se;
      ok = ok && opt_wins;
      if (akmv.mean_abs_error >= lap.mean_abs_error) ++akmv_not_better;
      detail += absl::StrFormat(
          " eps=%g k=%g: Lap %.4g OPT %.4g AKMV %.4g gap/se %.1f%s;", eps,
          ThresholdRank(1, eps), lap.mean_abs_error, opt.mean_abs_error,
          akmv.mean_abs_error, se > 0 ? gap / se : 0.0,
          opt_wins ? "" : " (OPT not ahead)");
    }
    const bool akmv_majority =
        2 * akmv_not_better > static_cast<int>(config.epsilons.size());
    ok = ok && akmv_majority;
    detail += absl::StrFormat(" AKMV>=Lap at %d/%zu eps. ", akmv_not_better,
                              config.epsilons.size());
  }
  const double secs = Seconds(start);
  ok = ok && secs < 300.0;
  detail += absl::StrFormat("%.1fs", secs);
  return {ok, detail};
}

Outcome Determinism() {
  BenchConfig config;
  config.profile = ValueOrDie(ParseProfileSource("geometric:6"));
  config.trials = 300;
  config.seed = 2031;
  const std::string first = ValueOrDie(FormatResultsCsv(ValueOrDie(RunBenchmark(config))));
  const std::string second = ValueOrDie(FormatResultsCsv(ValueOrDie(RunBenchmark(config))));
  config.threads = 4;
  const std::string parallel = ValueOrDie(FormatResultsCsv(ValueOrDie(RunBenchmark(config))));
  Outcome o;
  o.pass = first == second && first == parallel;
  o.detail = absl::StrFormat(
      "repeat identical: %s, 4-thread identical to serial: %s (%zu bytes)",
      first == second ? "yes" : "no", first == parallel ? "yes" : "no",
      first.size());
  return o;
}

Outcome PreprocessingInvariance() {
  RandomStream rng(2032);
  double worst = 0.0;
  for (int n = 0; n < 100; ++n) {
    const int d = 1 + n % 3;
    const ContributionProfile p =
        RandomProfile(rng, 40, 64, 2000, 65.0, d);
    const Dataset ds = RandomDataset(rng, p);
    worst = std::max(worst,
                     L1Distance(SampleMean(ds), SampleMean(PreprocessUserAverage(ds))));
  }
  return {worst <= 1e-12,
          absl::StrFormat("100 datasets (d<=3, U=65): max shift %.3g", worst)};
}

}  // namespace
}  // namespace ulclip

int main(int argc, char** argv) {
  std::set<std::string> known_red;
  for (int i = 1; i < argc; ++i) {
    absl::string_view arg = argv[i];
    if (absl::ConsumePrefix(&arg, "--known-red=")) {
      for (absl::string_view id : absl::StrSplit(arg, ',', absl::SkipEmpty())) {
        known_red.insert(std::string(id));
      }
    }
  }

  struct Criterion {
    const char* id;
    const char* title;
    std::function<ulclip::Outcome()> run;
  };
  const Criterion criteria[] = {
      {"AC1", "closed-form optimality vs LP grid", ulclip::ClosedFormOptimality},
      {"AC2", "bias/sensitivity formulas vs oracles", ulclip::FormulaOracleAgreement},
      {"AC3", "projection optimality", ulclip::ProjectionOptimality},
      {"AC4", "small-epsilon and noise-only limits", ulclip::LimitChecks},
      {"AC5", "Laplace noise calibration", ulclip::NoiseCalibration},
      {"AC6", "experiment orderings", ulclip::ExperimentOrdering},
      {"AC7", "benchmark determinism", ulclip::Determinism},
      {"AC8", "preprocessing invariance", ulclip::PreprocessingInvariance},
  };

  int unexpected = 0;
  for (const Criterion& c : criteria) {
    ulclip::Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const bool red_ok = known_red.count(c.id) > 0;
    std::printf("[%s] %s %s: %s%s\n", o.pass ? "PASS" : "FAIL", c.id, c.title,
                o.detail.c_str(),
                !o.pass && red_ok ? " (known red, see decisions ledger)" : "");
    std::fflush(stdout);
    if (!o.pass && !red_ok) ++unexpected;
  }
  return unexpected == 0 ? 0 : 1;
}
