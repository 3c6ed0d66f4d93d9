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

#ifndef ULCLIP_ULCLIP_H_
#define ULCLIP_ULCLIP_H_

#include "ulclip/bench.h"
#include "ulclip/clipping.h"
#include "ulclip/data_model.h"
#include "ulclip/dataset_io.h"
#include "ulclip/error_analysis.h"
#include "ulclip/geometry.h"
#include "ulclip/mechanisms.h"
#include "ulclip/optimizer.h"
#include "ulclip/random.h"
#include "ulclip/serialization.h"
#include "ulclip/verification.h"

#endif  // ULCLIP_ULCLIP_H_
