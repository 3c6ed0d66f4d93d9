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

// JSON forms of the library's values.
//
//   profile:     {"U": 65, "d": 1, "counts": [64, 32, 32, ...]}
//   clip spec:   {"per_user": [{"a": 0.25, "b": 0.75}, ...]}
//             or {"per_sample": [[{"a": .., "b": ..}, ...], ...]}
//   plan:        {"t_epsilon": .., "per_user": [...], "predicted": report}
//   report:      {"bias": .., "noise": .., "sensitivity": .., "total": ..}
//   bench config mirrors BenchConfig (see BenchConfigToJson).

#ifndef ULCLIP_SERIALIZATION_H_
#define ULCLIP_SERIALIZATION_H_

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"
#include "json.hpp"
#include "ulclip/bench.h"
#include "ulclip/clipping.h"
#include "ulclip/data_model.h"
#include "ulclip/dataset_io.h"
#include "ulclip/error_analysis.h"
#include "ulclip/mechanisms.h"
#include "ulclip/optimizer.h"

namespace ulclip {

using Json = nlohmann::json;

namespace internal {

inline absl::StatusOr<Json> ParseJson(absl::string_view text,
                                      absl::string_view what) {
  Json j = Json::parse(std::string(text), nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) {
    return absl::InvalidArgumentError(absl::StrCat(what, ": invalid JSON"));
  }
  return j;
}

// Runs `fn`, turning nlohmann type/lookup exceptions into a status.
template <typename Fn>
auto Guarded(absl::string_view what, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat(what, ": ", e.what()));
  }
}

}  // namespace internal

inline Json ProfileToJson(const ContributionProfile& profile) {
  return Json{{"U", profile.U()},
              {"d", profile.d()},
              {"counts", std::vector<int64_t>(profile.counts().begin(),
                                              profile.counts().end())}};
}

inline absl::StatusOr<ContributionProfile> ProfileFromJson(const Json& j) {
  return internal::Guarded(
      "profile JSON", [&]() -> absl::StatusOr<ContributionProfile> {
        return ContributionProfile::Create(
            j.at("counts").get<std::vector<int64_t>>(), j.at("U").get<double>(),
            j.at("d").get<int>());
      });
}

inline Json IntervalToJson(const ClipInterval& iv) {
  return Json{{"a", iv.a}, {"b", iv.b}};
}

inline Json ClipSpecToJson(const ClipSpec& spec) {
  if (spec.IsPerUserConstant()) {
    Json per_user = Json::array();
    for (const auto& user : spec.intervals()) {
      per_user.push_back(user.empty() ? Json{{"a", 0.0}, {"b", 0.0}}
                                      : IntervalToJson(user.front()));
    }
    return Json{{"per_user", per_user}};
  }
  Json per_sample = Json::array();
  for (const auto& user : spec.intervals()) {
    Json row = Json::array();
    for (const ClipInterval& iv : user) row.push_back(IntervalToJson(iv));
    per_sample.push_back(row);
  }
  return Json{{"per_sample", per_sample}};
}

// The per-user form needs the profile to expand intervals to sample shape.
inline absl::StatusOr<ClipSpec> ClipSpecFromJson(
    const Json& j, const ContributionProfile& profile) {
  return internal::Guarded("clip spec JSON", [&]() -> absl::StatusOr<ClipSpec> {
    auto interval = [](const Json& e) {
      return ClipInterval{e.at("a").get<double>(), e.at("b").get<double>()};
    };
    if (j.contains("per_user")) {
      std::vector<ClipInterval> per_user;
      for (const Json& e : j.at("per_user")) per_user.push_back(interval(e));
      if (static_cast<int>(per_user.size()) != profile.num_users()) {
        return absl::InvalidArgumentError(absl::StrFormat(
            "clip spec lists %d users, profile has %d", per_user.size(),
            profile.num_users()));
      }
      return ClipSpec::PerUser(per_user, profile);
    }
    if (j.contains("per_sample")) {
      std::vector<std::vector<ClipInterval>> intervals;
      for (const Json& user : j.at("per_sample")) {
        std::vector<ClipInterval> row;
        for (const Json& e : user) row.push_back(interval(e));
        intervals.push_back(std::move(row));
      }
      return ClipSpec(std::move(intervals));
    }
    return absl::InvalidArgumentError(
        "clip spec JSON needs a per_user or per_sample field");
  });
}

inline Json ErrorReportToJson(const ErrorReport& r) {
  return Json{{"bias", r.bias},
              {"noise", r.noise},
              {"sensitivity", r.sensitivity},
              {"total", r.total}};
}

inline Json PlanToJson(const OptimalPlan& plan) {
  Json per_user = Json::array();
  for (const ClipInterval& iv : plan.per_user) per_user.push_back(IntervalToJson(iv));
  return Json{{"t_epsilon", plan.t_epsilon},
              {"rank", plan.rank},
              {"per_user", per_user},
              {"predicted", ErrorReportToJson(plan.predicted)}};
}

inline Json AuditToJson(const MechanismAudit& audit) {
  Json j{{"mechanism", audit.mechanism},
         {"epsilon",
          {{"total", audit.epsilon_total},
           {"quantile", audit.epsilon_quantile},
           {"release", audit.epsilon_release}}},
         {"sensitivity", audit.sensitivity},
         {"noise_scale", audit.noise_scale}};
  if (audit.threshold) j["threshold"] = *audit.threshold;
  if (audit.threshold_rank) j["threshold_rank"] = *audit.threshold_rank;
  if (audit.seed) j["seed"] = *audit.seed;
  return j;
}

inline Json MechanismOutputToJson(const MechanismOutput& out) {
  return Json{{"estimate", out.estimate},
              {"pre_noise", std::vector<double>(out.pre_noise.coords().begin(),
                                                out.pre_noise.coords().end())},
              {"noise", out.noise.values},
              {"audit", AuditToJson(out.audit)}};
}

// "geometric:M", "extreme:L:m_star" or "counts:m1,m2,...".
inline absl::StatusOr<ProfileSource> ParseProfileSource(absl::string_view text) {
  const std::vector<absl::string_view> parts = absl::StrSplit(text, ':');
  ProfileSource source;
  auto parse_int = [](absl::string_view s, int64_t& out) {
    double v = 0.0;
    if (!internal::ParseDouble(s, v) || v != std::floor(v)) return false;
    out = static_cast<int64_t>(v);
    return true;
  };
  int64_t a = 0, b = 0;
  if (parts[0] == "geometric" && parts.size() == 2 && parse_int(parts[1], a)) {
    source.kind = ProfileSource::Kind::kGeometric;
    source.M = static_cast<int>(a);
    return source;
  }
  if (parts[0] == "extreme" && parts.size() == 3 && parse_int(parts[1], a) &&
      parse_int(parts[2], b)) {
    source.kind = ProfileSource::Kind::kExtreme;
    source.L = static_cast<int>(a);
    source.m_star = b;
    return source;
  }
  if (parts[0] == "counts" && parts.size() == 2) {
    source.kind = ProfileSource::Kind::kCounts;
    bool ok = true;
    for (absl::string_view c : absl::StrSplit(parts[1], ',')) {
      ok = ok && parse_int(c, a);
      source.counts.push_back(a);
    }
    if (ok) return source;
  }
  return absl::InvalidArgumentError(absl::StrCat(
      "bad profile '", text,
      "' (expected geometric:M, extreme:L:m_star or counts:m1,m2,...)"));
}

inline Json BenchConfigToJson(const BenchConfig& c) {
  return Json{{"profile", c.profile.ToString()},
              {"distribution", std::string(DistributionName(c.distribution))},
              {"U", c.U},
              {"d", c.d},
              {"epsilons", c.epsilons},
              {"trials", c.trials},
              {"seed", c.seed},
              {"mechanisms", c.mechanisms},
              {"output", c.output_path},
              {"threads", c.threads}};
}

// Missing fields keep their BenchConfig defaults.
inline absl::StatusOr<BenchConfig> BenchConfigFromJson(const Json& j) {
  return internal::Guarded(
      "bench config JSON", [&]() -> absl::StatusOr<BenchConfig> {
        BenchConfig c;
        if (j.contains("profile")) {
          absl::StatusOr<ProfileSource> p =
              ParseProfileSource(j.at("profile").get<std::string>());
          if (!p.ok()) return p.status();
          c.profile = *std::move(p);
        }
        if (j.contains("distribution")) {
          absl::StatusOr<SampleDistribution> dist =
              ParseDistribution(j.at("distribution").get<std::string>());
          if (!dist.ok()) return dist.status();
          c.distribution = *dist;
        }
        if (j.contains("U")) c.U = j.at("U").get<double>();
        if (j.contains("d")) c.d = j.at("d").get<int>();
        if (j.contains("epsilons")) {
          c.epsilons = j.at("epsilons").get<std::vector<double>>();
        }
        if (j.contains("trials")) c.trials = j.at("trials").get<int>();
        if (j.contains("seed")) c.seed = j.at("seed").get<uint64_t>();
        if (j.contains("mechanisms")) {
          c.mechanisms = j.at("mechanisms").get<std::vector<std::string>>();
        }
        if (j.contains("output")) c.output_path = j.at("output").get<std::string>();
        if (j.contains("threads")) c.threads = j.at("threads").get<int>();
        if (absl::Status s = ValidateBenchConfig(c); !s.ok()) return s;
        return c;
      });
}

inline absl::StatusOr<ContributionProfile> LoadProfileJson(
    const std::string& path) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return text.status();
  absl::StatusOr<Json> j = internal::ParseJson(*text, path);
  if (!j.ok()) return j.status();
  return ProfileFromJson(*j);
}

}  // namespace ulclip

#endif  // ULCLIP_SERIALIZATION_H_
