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

// Command-line front end:
//
//   ulclip gen        --profile geometric:6 --U 65 --dist uniform --seed 1
//   ulclip optimize   --profile geometric:6 --U 65 --d 1 --eps 1
//   ulclip worst-case --profile counts:1,2,4 --U 1 --spec spec.json --eps 1
//   ulclip estimate   --data data.csv --U 65 --eps 1 --mechanism opt-wc
//   ulclip bench      --profile geometric:6 --eps 0.2,0.5,1,2 --trials 10000
//   ulclip verify     --instances 200
//
// Exit codes: 0 success, 1 runtime error, 2 usage error. Errors are printed
// to stderr as one JSON object per line.

#ifndef ULCLIP_CLI_H_
#define ULCLIP_CLI_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "ulclip/bench.h"
#include "ulclip/clipping.h"
#include "ulclip/data_model.h"
#include "ulclip/dataset_io.h"
#include "ulclip/error_analysis.h"
#include "ulclip/mechanisms.h"
#include "ulclip/optimizer.h"
#include "ulclip/random.h"
#include "ulclip/serialization.h"
#include "ulclip/verification.h"

namespace ulclip {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntimeError = 1;
inline constexpr int kExitUsage = 2;

namespace cli_internal {

struct ProfileArgs {
  std::string source;
  std::string file;
  double U = 65.0;
  int d = 1;

  void Register(CLI::App* app) {
    app->add_option("--profile", source,
                    "geometric:M | extreme:L:m_star | counts:m1,m2,...");
    app->add_option("--profile-file", file, "profile JSON file");
    app->add_option("--U", U, "l1 bound on every sample")->capture_default_str();
    app->add_option("--d", d, "sample dimension")->capture_default_str();
  }

  absl::StatusOr<ContributionProfile> Build() const {
    if (!file.empty()) return LoadProfileJson(file);
    if (source.empty()) {
      return absl::InvalidArgumentError("one of --profile or --profile-file is required");
    }
    absl::StatusOr<ProfileSource> src = ParseProfileSource(source);
    if (!src.ok()) return src.status();
    return src->Build(U, d);
  }
};

inline void PrintError(std::ostream& err, absl::string_view code,
                       absl::string_view message) {
  err << Json{{"error", code}, {"message", message}}.dump() << "\n";
}

inline int Fail(std::ostream& err, const absl::Status& status) {
  PrintError(err, absl::StatusCodeToString(status.code()), status.message());
  return kExitRuntimeError;
}

inline absl::Status WriteOrPrint(const std::string& path,
                                 const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return absl::OkStatus();
  }
  return WriteFile(path, text);
}

}  // namespace cli_internal

inline int RunCli(const std::vector<std::string>& args, std::ostream& out,
                  std::ostream& err) {
  using cli_internal::Fail;

  CLI::App app{"User-level DP mean estimation with worst-case-optimal clipping",
               "ulclip"};
  app.require_subcommand(1);

  // gen
  cli_internal::ProfileArgs gen_profile;
  std::string gen_dist = "uniform";
  uint64_t gen_seed = 0;
  std::string gen_out;
  std::string gen_profile_out;
  CLI::App* gen = app.add_subcommand("gen", "generate a synthetic dataset");
  gen_profile.Register(gen);
  gen->add_option("--dist", gen_dist, "uniform | projected-gaussian")
      ->capture_default_str();
  gen->add_option("--seed", gen_seed, "random seed")->capture_default_str();
  gen->add_option("--out", gen_out, "dataset CSV path (default stdout)");
  gen->add_option("--profile-out", gen_profile_out, "also write profile JSON");

  // optimize
  cli_internal::ProfileArgs opt_profile;
  double opt_eps = 1.0;
  CLI::App* optimize =
      app.add_subcommand("optimize", "print the worst-case-optimal clipping plan");
  opt_profile.Register(optimize);
  optimize->add_option("--eps", opt_eps, "privacy budget")->required();

  // worst-case
  cli_internal::ProfileArgs wc_profile;
  std::string wc_spec;
  double wc_eps = 1.0;
  CLI::App* worst = app.add_subcommand(
      "worst-case", "print the worst-case error report of a clip spec");
  wc_profile.Register(worst);
  worst->add_option("--spec", wc_spec, "clip spec JSON file")->required();
  worst->add_option("--eps", wc_eps, "privacy budget")->required();

  // estimate
  std::string est_data;
  double est_U = 65.0;
  double est_eps = 1.0;
  std::string est_mechanism = kOptWorstCase;
  uint64_t est_seed = 0;
  bool est_preprocess = false;
  CLI::App* estimate =
      app.add_subcommand("estimate", "run one private release on a dataset");
  estimate->add_option("--data", est_data, "dataset CSV")->required();
  estimate->add_option("--U", est_U, "l1 bound on every sample")
      ->capture_default_str();
  estimate->add_option("--eps", est_eps, "privacy budget")->required();
  estimate->add_option("--mechanism", est_mechanism, "laplace | opt-wc | akmv")
      ->capture_default_str();
  estimate->add_option("--seed", est_seed, "random seed")->capture_default_str();
  estimate->add_flag("--preprocess", est_preprocess,
                     "replace samples by per-user averages first");

  // bench
  std::string bench_config_path;
  cli_internal::ProfileArgs bench_profile;
  bench_profile.source = "geometric:6";
  std::string bench_dist = "uniform";
  std::string bench_eps = "0.2,0.5,1,2";
  int bench_trials = 10000;
  uint64_t bench_seed = 0;
  std::string bench_mechanisms = "laplace,opt-wc,akmv";
  std::string bench_out;
  int bench_threads = 1;
  CLI::App* bench = app.add_subcommand("bench", "Monte Carlo error comparison");
  bench->add_option("--config", bench_config_path,
                    "bench config JSON (overrides the other flags)");
  bench_profile.Register(bench);
  bench->add_option("--dist", bench_dist, "uniform | projected-gaussian")
      ->capture_default_str();
  bench->add_option("--eps", bench_eps, "list a,b,c or range start:stop:step")
      ->capture_default_str();
  bench->add_option("--trials", bench_trials, "trials per epsilon")
      ->capture_default_str();
  bench->add_option("--seed", bench_seed, "random seed")->capture_default_str();
  bench->add_option("--mechanisms", bench_mechanisms, "comma-separated list")
      ->capture_default_str();
  bench->add_option("--out", bench_out, "results CSV path (default stdout)");
  bench->add_option("--threads", bench_threads, "worker threads (0 = all cores)")
      ->capture_default_str();

  // verify
  int verify_instances = 200;
  uint64_t verify_seed = 1;
  CLI::App* verify = app.add_subcommand(
      "verify", "check closed forms against brute-force oracles");
  verify->add_option("--instances", verify_instances,
                     "random instances per check")
      ->capture_default_str();
  verify->add_option("--seed", verify_seed, "random seed")->capture_default_str();

  std::vector<const char*> argv = {"ulclip"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << app.help();
    cli_internal::PrintError(err, "usage", e.what());
    return kExitUsage;
  }

  if (gen->parsed()) {
    absl::StatusOr<ContributionProfile> profile = gen_profile.Build();
    if (!profile.ok()) return Fail(err, profile.status());
    absl::StatusOr<SampleDistribution> dist = ParseDistribution(gen_dist);
    if (!dist.ok()) return Fail(err, dist.status());
    RandomStream rng(gen_seed);
    absl::StatusOr<Dataset> ds = GenerateDataset(*profile, *dist, rng);
    if (!ds.ok()) return Fail(err, ds.status());
    if (absl::Status s =
            cli_internal::WriteOrPrint(gen_out, FormatDatasetCsv(*ds), out);
        !s.ok()) {
      return Fail(err, s);
    }
    if (!gen_profile_out.empty()) {
      if (absl::Status s = WriteFile(gen_profile_out,
                                     ProfileToJson(*profile).dump(2) + "\n");
          !s.ok()) {
        return Fail(err, s);
      }
    }
    return kExitOk;
  }

  if (optimize->parsed()) {
    absl::StatusOr<ContributionProfile> profile = opt_profile.Build();
    if (!profile.ok()) return Fail(err, profile.status());
    absl::StatusOr<OptimalPlan> plan = OptimalClipSpec(*profile, opt_eps);
    if (!plan.ok()) return Fail(err, plan.status());
    out << PlanToJson(*plan).dump(2) << "\n";
    return kExitOk;
  }

  if (worst->parsed()) {
    absl::StatusOr<ContributionProfile> profile = wc_profile.Build();
    if (!profile.ok()) return Fail(err, profile.status());
    absl::StatusOr<std::string> text = ReadFile(wc_spec);
    if (!text.ok()) return Fail(err, text.status());
    absl::StatusOr<Json> j = internal::ParseJson(*text, wc_spec);
    if (!j.ok()) return Fail(err, j.status());
    absl::StatusOr<ClipSpec> spec = ClipSpecFromJson(*j, *profile);
    if (!spec.ok()) return Fail(err, spec.status());
    absl::StatusOr<ErrorReport> report = WorstCaseError(*spec, *profile, wc_eps);
    if (!report.ok()) return Fail(err, report.status());
    out << ErrorReportToJson(*report).dump(2) << "\n";
    return kExitOk;
  }

  if (estimate->parsed()) {
    absl::StatusOr<Dataset> ds = LoadDataset(est_data, est_U);
    if (!ds.ok()) return Fail(err, ds.status());
    absl::StatusOr<PrivacyBudget> budget = PrivacyBudget::Create(est_eps);
    if (!budget.ok()) return Fail(err, budget.status());
    const Dataset input = est_preprocess ? PreprocessUserAverage(*ds) : *ds;
    RandomStream rng(est_seed);
    absl::StatusOr<MechanismOutput> result =
        RunMechanism(est_mechanism, input, *budget, rng);
    if (!result.ok()) return Fail(err, result.status());
    result->audit.seed = est_seed;
    out << MechanismOutputToJson(*result).dump(2) << "\n";
    return kExitOk;
  }

  if (bench->parsed()) {
    BenchConfig config;
    if (!bench_config_path.empty()) {
      absl::StatusOr<std::string> text = ReadFile(bench_config_path);
      if (!text.ok()) return Fail(err, text.status());
      absl::StatusOr<Json> j = internal::ParseJson(*text, bench_config_path);
      if (!j.ok()) return Fail(err, j.status());
      absl::StatusOr<BenchConfig> parsed = BenchConfigFromJson(*j);
      if (!parsed.ok()) return Fail(err, parsed.status());
      config = *std::move(parsed);
    } else {
      if (!bench_profile.file.empty()) {
        absl::StatusOr<ContributionProfile> p = bench_profile.Build();
        if (!p.ok()) return Fail(err, p.status());
        config.profile.kind = ProfileSource::Kind::kCounts;
        config.profile.counts.assign(p->counts().begin(), p->counts().end());
        config.U = p->U();
        config.d = p->d();
      } else {
        absl::StatusOr<ProfileSource> src = ParseProfileSource(bench_profile.source);
        if (!src.ok()) return Fail(err, src.status());
        config.profile = *std::move(src);
        config.U = bench_profile.U;
        config.d = bench_profile.d;
      }
      absl::StatusOr<SampleDistribution> dist = ParseDistribution(bench_dist);
      if (!dist.ok()) return Fail(err, dist.status());
      config.distribution = *dist;
      absl::StatusOr<std::vector<double>> eps = ParseEpsilonGrid(bench_eps);
      if (!eps.ok()) return Fail(err, eps.status());
      config.epsilons = *std::move(eps);
      config.trials = bench_trials;
      config.seed = bench_seed;
      config.mechanisms = absl::StrSplit(bench_mechanisms, ',', absl::SkipEmpty());
      config.output_path = bench_out;
      config.threads = bench_threads;
    }
    absl::StatusOr<std::vector<BenchRow>> rows = RunBenchmark(config);
    if (!rows.ok()) return Fail(err, rows.status());
    absl::StatusOr<std::string> csv = FormatResultsCsv(*rows);
    if (!csv.ok()) return Fail(err, csv.status());
    if (absl::Status s = cli_internal::WriteOrPrint(config.output_path, *csv, out);
        !s.ok()) {
      return Fail(err, s);
    }
    // T_eps is a step function of epsilon, so the OPT worst-case curve can
    // jump between neighbouring grid points.
    absl::StatusOr<ContributionProfile> profile =
        config.profile.Build(config.U, config.d);
    if (profile.ok()) {
      std::vector<std::string> notes;
      for (double e : config.epsilons) {
        absl::StatusOr<double> t = TEpsilon(*profile, e);
        if (t.ok()) notes.push_back(absl::StrFormat("eps=%g:T=%g", e, *t));
      }
      err << Json{{"note", "average-case errors need not be monotone in "
                           "epsilon; T_eps is piecewise constant"},
                  {"t_epsilon", absl::StrJoin(notes, " ")}}
                 .dump()
          << "\n";
    }
    return kExitOk;
  }

  if (verify->parsed()) {
    absl::StatusOr<AgreementSummary> agreement =
        VerifyBiasAndSensitivity(verify_instances, verify_seed);
    if (!agreement.ok()) return Fail(err, agreement.status());
    absl::StatusOr<OptimalitySummary> optimality =
        VerifyOptimality(verify_instances, verify_seed + 1);
    if (!optimality.ok()) return Fail(err, optimality.status());
    const bool ok = agreement->failures == 0 && optimality->failures == 0;
    Json report{
        {"bias_sensitivity",
         {{"instances", agreement->instances},
          {"failures", agreement->failures},
          {"max_gap", agreement->max_gap},
          {"first_failure", agreement->first_failure}}},
        {"optimality",
         {{"instances", optimality->instances},
          {"failures", optimality->failures},
          {"min_margin", optimality->min_margin},
          {"max_slack_ratio", optimality->max_slack_ratio},
          {"max_consistency_gap", optimality->max_consistency_gap},
          {"first_failure", optimality->first_failure}}},
        {"ok", ok}};
    out << report.dump(2) << "\n";
    return ok ? kExitOk : kExitRuntimeError;
  }
  return kExitUsage;
}

}  // namespace ulclip

#endif  // ULCLIP_CLI_H_
