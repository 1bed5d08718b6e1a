/*
 * Copyright (c) 2026, The abortlab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef ABORTLAB_COST_HH_
#define ABORTLAB_COST_HH_

#include <array>
#include <cstdint>

#include "abortlab/model.hh"
#include "abortlab/semantics.hh"

namespace abortlab {

enum class CostModel : std::uint8_t { kCC, kDSM };

const char* to_string(CostModel m);

/// Real cost and potential change of one step under one model.
struct StepCost {
  int rmr = 0;
  std::int64_t phi_before = 0;
  std::int64_t phi_after = 0;
  int line = 0;

  std::int64_t amortized() const { return rmr + phi_after - phi_before; }
};

/// RMR cost of the access in `record`, judged against the pre-state.
/// DSM: 1 iff the location is outside the actor's partition.
/// CC: a read is free iff the location is in the actor's cache; every write
/// or swap costs 1. Abort signals and joins cost 0.
int rmr_cost(const Config& pre, const StepRecord& record, CostModel model);

/// Applies the CC cache effect of `record` to `post`: a read caches the
/// location for the actor; a write or swap evicts it from every cache,
/// including the actor's.
void apply_cache_effects(Config& post, const StepRecord& record);

/// Sum over processes of [go = true] + [pc = 6] + [*mynode = pred].
std::int64_t phi_dsm(const Config& config);

/// Sum over processes of 3[go = true] + [pc = 6] + [*mynode = pred] +
/// [go not in own cache].
std::int64_t phi_cc(const Config& config);

std::int64_t phi(const Config& config, CostModel model);

/// Per-line upper bounds on rmr + delta-phi. Index 0 covers non-line steps
/// (abort signals and joins).
using LineBounds = std::array<int, 12>;

/// The bounds the amortized analysis claims for each line.
const LineBounds& amortized_bounds(CostModel model);

/// Telescoped per-attempt constant: every attempt runs each non-loop line at
/// most once, so total RMRs <= this times attempts started.
int rmr_per_attempt_bound(CostModel model);

}  // namespace abortlab

#endif  // ABORTLAB_COST_HH_
