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

#ifndef ULCLIP_STATUS_MACROS_H_
#define ULCLIP_STATUS_MACROS_H_

#include "absl/status/status.h"
#include "absl/status/statusor.h"

#define ULCLIP_CONCAT_INNER_(a, b) a##b
#define ULCLIP_CONCAT_(a, b) ULCLIP_CONCAT_INNER_(a, b)

#define ULCLIP_RETURN_IF_ERROR(expr)             \
  do {                                           \
    const absl::Status ulclip_status_ = (expr);  \
    if (!ulclip_status_.ok()) return ulclip_status_; \
  } while (0)

#define ULCLIP_ASSIGN_OR_RETURN_IMPL_(tmp, lhs, rexpr) \
  auto tmp = (rexpr);                                  \
  if (!tmp.ok()) return tmp.status();                  \
  lhs = std::move(tmp).value()

// Evaluates `rexpr` (an absl::StatusOr<T>) and either assigns the value to
// `lhs` or returns the error status from the enclosing function.
#define ULCLIP_ASSIGN_OR_RETURN(lhs, rexpr) \
  ULCLIP_ASSIGN_OR_RETURN_IMPL_(            \
      ULCLIP_CONCAT_(ulclip_statusor_, __LINE__), lhs, rexpr)

#endif  // ULCLIP_STATUS_MACROS_H_
