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

// Seeded Monte Carlo comparison of the release mechanisms on synthetic i.i.d.
// data. Each trial draws a fresh dataset, replaces every user's samples by
// their average, runs each mechanism and records |M(D) - f(D)|_1.
//
// Trial (e, t) uses streams derived from (seed, e, t, stream); results are
// stored by index and reduced in a fixed order, so any thread count gives the
// same bytes.

#ifndef ULCLIP_BENCH_H_
#define ULCLIP_BENCH_H_

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"
#include "ulclip/data_model.h"
#include "ulclip/dataset_io.h"
#include "ulclip/geometry.h"
#include "ulclip/mechanisms.h"
#include "ulclip/random.h"

namespace ulclip {

struct ProfileSource {
  enum class Kind { kGeometric, kExtreme, kCounts };
  Kind kind = Kind::kGeometric;
  int M = 6;
  int L = 101;
  int64_t m_star = 10;
  std::vector<int64_t> counts;

  absl::StatusOr<ContributionProfile> Build(double U, int d) const {
    switch (kind) {
      case Kind::kGeometric:
        return GeometricProfile(M, U, d);
      case Kind::kExtreme:
        return ExtremeProfile(L, m_star, U, d);
      case Kind::kCounts:
        return ContributionProfile::Create(counts, U, d);
    }
    return absl::InternalError("unreachable profile kind");
  }

  std::string ToString() const {
    switch (kind) {
      case Kind::kGeometric:
        return absl::StrCat("geometric:", M);
      case Kind::kExtreme:
        return absl::StrCat("extreme:", L, ":", m_star);
      case Kind::kCounts:
        return absl::StrCat("counts:", absl::StrJoin(counts, ","));
    }
    return "";
  }
};

enum class SampleDistribution { kUniform, kProjectedGaussian };

inline absl::string_view DistributionName(SampleDistribution dist) {
  return dist == SampleDistribution::kUniform ? "uniform"
                                              : "projected-gaussian";
}

inline absl::StatusOr<SampleDistribution> ParseDistribution(
    absl::string_view name) {
  if (name == "uniform") return SampleDistribution::kUniform;
  if (name == "projected-gaussian" || name == "gaussian") {
    return SampleDistribution::kProjectedGaussian;
  }
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown distribution '", name,
      "' (expected uniform or projected-gaussian)"));
}

inline absl::StatusOr<Dataset> GenerateDataset(
    const ContributionProfile& profile, SampleDistribution dist,
    RandomStream& rng) {
  return dist == SampleDistribution::kUniform
             ? SampleUniform(profile, rng)
             : SampleProjectedGaussian(profile, rng);
}

struct BenchConfig {
  ProfileSource profile;
  SampleDistribution distribution = SampleDistribution::kUniform;
  double U = 65.0;
  int d = 1;
  std::vector<double> epsilons = {0.2, 0.5, 1.0, 2.0};
  int trials = 10000;
  uint64_t seed = 0;
  std::vector<std::string> mechanisms = {kVanillaLaplace, kOptWorstCase, kAkmv};
  std::string output_path;
  // 0 picks std::thread::hardware_concurrency().
  int threads = 1;
};

struct BenchRow {
  double epsilon = 0.0;
  std::string mechanism;
  double mean_abs_error = 0.0;
  double std_err = 0.0;
  int trials = 0;

  friend bool operator==(const BenchRow&, const BenchRow&) = default;
};

struct TrialResult {
  // Indexed like BenchConfig::mechanisms.
  std::vector<double> abs_errors;
  // |f(preprocessed) - f(raw)|_1.
  double preprocessing_shift = 0.0;
};

inline absl::Status ValidateBenchConfig(const BenchConfig& config) {
  if (config.trials < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("trials must be >= 1, got %d", config.trials));
  }
  if (config.epsilons.empty()) {
    return absl::InvalidArgumentError("no epsilon values given");
  }
  for (double eps : config.epsilons) {
    if (absl::Status s = CheckEpsilon(eps); !s.ok()) return s;
  }
  if (config.mechanisms.empty()) {
    return absl::InvalidArgumentError("no mechanisms selected");
  }
  for (const std::string& name : config.mechanisms) {
    if (name != kVanillaLaplace && name != kOptWorstCase && name != kAkmv) {
      return absl::InvalidArgumentError(
          absl::StrCat("unknown mechanism '", name, "'"));
    }
  }
  if (config.threads < 0) {
    return absl::InvalidArgumentError("threads must be >= 0");
  }
  return absl::OkStatus();
}

// Stable stream id per mechanism, independent of which mechanisms run.
inline uint64_t MechanismStreamId(absl::string_view name) {
  if (name == kVanillaLaplace) return 1;
  if (name == kOptWorstCase) return 2;
  return 3;
}

inline absl::StatusOr<TrialResult> RunTrial(const BenchConfig& config,
                                            const ContributionProfile& profile,
                                            std::size_t epsilon_index,
                                            uint64_t trial_index) {
  RandomStream data_rng(
      DeriveSeed(config.seed, {epsilon_index, trial_index, 0}));
  absl::StatusOr<Dataset> raw =
      GenerateDataset(profile, config.distribution, data_rng);
  if (!raw.ok()) return raw.status();
  const Dataset ds = PreprocessUserAverage(*raw);
  const Point truth = SampleMean(ds);

  TrialResult result;
  result.preprocessing_shift = L1Distance(truth, SampleMean(*raw));
  const PrivacyBudget budget{config.epsilons[epsilon_index]};
  for (const std::string& name : config.mechanisms) {
    RandomStream rng(DeriveSeed(
        config.seed, {epsilon_index, trial_index, MechanismStreamId(name)}));
    absl::StatusOr<MechanismOutput> out = RunMechanism(name, ds, budget, rng);
    if (!out.ok()) return out.status();
    result.abs_errors.push_back(L1Distance(out->estimate, truth.coords()));
  }
  return result;
}

// Pairwise summation; the result depends only on the order of `values`.
inline double PairwiseSum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return PairwiseSum(values.first(half)) + PairwiseSum(values.subspan(half));
}

// Sample mean and standard error of the mean (0 for a single value).
inline std::pair<double, double> MeanAndStdErr(std::span<const double> values) {
  const double n = static_cast<double>(values.size());
  const double mean = PairwiseSum(values) / n;
  if (values.size() < 2) return {mean, 0.0};
  std::vector<double> squares(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    squares[i] = (values[i] - mean) * (values[i] - mean);
  }
  const double variance = PairwiseSum(squares) / (n - 1.0);
  return {mean, std::sqrt(variance / n)};
}

inline absl::StatusOr<std::vector<BenchRow>> RunBenchmark(
    const BenchConfig& config) {
  if (absl::Status s = ValidateBenchConfig(config); !s.ok()) return s;
  absl::StatusOr<ContributionProfile> profile =
      config.profile.Build(config.U, config.d);
  if (!profile.ok()) return profile.status();

  const std::size_t num_eps = config.epsilons.size();
  const std::size_t trials = static_cast<std::size_t>(config.trials);
  const std::size_t num_mech = config.mechanisms.size();
  const std::size_t work = num_eps * trials;
  // errors[(e * num_mech + m) * trials + t]
  std::vector<double> errors(num_eps * num_mech * trials);

  std::atomic<std::size_t> next{0};
  std::mutex error_mu;
  absl::Status first_error;
  auto worker = [&] {
    for (std::size_t item = next.fetch_add(1); item < work;
         item = next.fetch_add(1)) {
      const std::size_t e = item / trials;
      const std::size_t t = item % trials;
      absl::StatusOr<TrialResult> r = RunTrial(config, *profile, e, t);
      if (!r.ok()) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (first_error.ok()) first_error = r.status();
        next.store(work);
        return;
      }
      for (std::size_t m = 0; m < num_mech; ++m) {
        errors[(e * num_mech + m) * trials + t] = r->abs_errors[m];
      }
    }
  };

  int threads = config.threads == 0
                    ? static_cast<int>(std::thread::hardware_concurrency())
                    : config.threads;
  threads = std::clamp(threads, 1, static_cast<int>(std::max<std::size_t>(work, 1)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (!first_error.ok()) return first_error;

  std::vector<BenchRow> rows;
  rows.reserve(num_eps * num_mech);
  for (std::size_t e = 0; e < num_eps; ++e) {
    for (std::size_t m = 0; m < num_mech; ++m) {
      const auto [mean, se] = MeanAndStdErr(
          std::span<const double>(errors).subspan((e * num_mech + m) * trials,
                                                  trials));
      rows.push_back(
          {config.epsilons[e], config.mechanisms[m], mean, se, config.trials});
    }
  }
  return rows;
}

inline constexpr char kResultsCsvHeader[] =
    "epsilon,mechanism,mean_abs_error,std_err,trials";

inline absl::StatusOr<std::string> FormatResultsCsv(
    std::span<const BenchRow> rows) {
  if (rows.empty()) return absl::InvalidArgumentError("no result rows");
  std::string out = absl::StrCat(kResultsCsvHeader, "\n");
  for (const BenchRow& row : rows) {
    absl::StrAppendFormat(&out, "%.17g,%s,%.17g,%.17g,%d\n", row.epsilon,
                          row.mechanism, row.mean_abs_error, row.std_err,
                          row.trials);
  }
  return out;
}

inline absl::Status EmitResultsCsv(std::span<const BenchRow> rows,
                                   const std::string& path) {
  absl::StatusOr<std::string> text = FormatResultsCsv(rows);
  if (!text.ok()) return text.status();
  return WriteFile(path, *text);
}

inline absl::StatusOr<std::vector<BenchRow>> ParseResultsCsv(
    absl::string_view text) {
  std::vector<absl::string_view> lines =
      absl::StrSplit(text, '\n', absl::SkipWhitespace());
  if (lines.empty() || absl::StripAsciiWhitespace(lines[0]) != kResultsCsvHeader) {
    return absl::InvalidArgumentError("results CSV: missing or unknown header");
  }
  std::vector<BenchRow> rows;
  for (std::size_t n = 1; n < lines.size(); ++n) {
    const std::vector<absl::string_view> f =
        absl::StrSplit(absl::StripAsciiWhitespace(lines[n]), ',');
    BenchRow row;
    double trials = 0.0;
    if (f.size() != 5 || !internal::ParseDouble(f[0], row.epsilon) ||
        !internal::ParseDouble(f[2], row.mean_abs_error) ||
        !internal::ParseDouble(f[3], row.std_err) ||
        !internal::ParseDouble(f[4], trials)) {
      return absl::InvalidArgumentError(
          absl::StrFormat("results CSV: malformed line %d", n + 1));
    }
    row.mechanism = std::string(f[1]);
    row.trials = static_cast<int>(trials);
    rows.push_back(std::move(row));
  }
  return rows;
}

// Accepts "0.2,0.5,1" or "start:stop:step" (inclusive of stop up to rounding).
inline absl::StatusOr<std::vector<double>> ParseEpsilonGrid(
    absl::string_view text) {
  std::vector<double> out;
  const std::vector<absl::string_view> range = absl::StrSplit(text, ':');
  if (range.size() == 3) {
    double start = 0.0, stop = 0.0, step = 0.0;
    if (!internal::ParseDouble(range[0], start) ||
        !internal::ParseDouble(range[1], stop) ||
        !internal::ParseDouble(range[2], step) || !(step > 0.0) ||
        !(start <= stop)) {
      return absl::InvalidArgumentError(
          absl::StrCat("bad epsilon range '", text, "'"));
    }
    const auto count = static_cast<int64_t>(
        std::floor((stop - start) / step + 1e-9));
    if (count > 100000) {
      return absl::InvalidArgumentError("epsilon range has too many points");
    }
    for (int64_t i = 0; i <= count; ++i) out.push_back(start + i * step);
  } else if (range.size() == 1) {
    for (absl::string_view part : absl::StrSplit(text, ',')) {
      double v = 0.0;
      if (!internal::ParseDouble(part, v)) {
        return absl::InvalidArgumentError(
            absl::StrCat("bad epsilon value '", part, "'"));
      }
      out.push_back(v);
    }
  } else {
    return absl::InvalidArgumentError(
        absl::StrCat("bad epsilon grid '", text, "'"));
  }
  for (double eps : out) {
    if (absl::Status s = CheckEpsilon(eps); !s.ok()) return s;
  }
  return out;
}

}  // namespace ulclip

#endif  // ULCLIP_BENCH_H_
