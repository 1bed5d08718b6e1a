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

#include "abortlab/cost.hh"

#include <algorithm>

namespace abortlab {

const char* to_string(CostModel m) {
  return m == CostModel::kCC ? "CC" : "DSM";
}

int rmr_cost(const Config& pre, const StepRecord& rec, CostModel model) {
  if (!rec.access) return 0;
  const ProcState& actor = pre.proc(rec.action.pid);
  const Access& acc = *rec.access;
  if (model == CostModel::kDSM) {
    const auto& home = pre.locations.at(acc.loc).partition;
    return home && *home == actor.id ? 0 : 1;
  }
  if (acc.kind == AccessKind::kRead) return actor.caches(acc.loc) ? 0 : 1;
  return 1;
}

void apply_cache_effects(Config& post, const StepRecord& rec) {
  if (!rec.access) return;
  const Access& acc = *rec.access;
  if (acc.kind == AccessKind::kRead) {
    auto& cache = post.proc(rec.action.pid).cc_cache;
    auto it = std::lower_bound(cache.begin(), cache.end(), acc.loc);
    if (it == cache.end() || *it != acc.loc) cache.insert(it, acc.loc);
    return;
  }
  for (ProcState& s : post.procs) {
    auto it = std::lower_bound(s.cc_cache.begin(), s.cc_cache.end(), acc.loc);
    if (it != s.cc_cache.end() && *it == acc.loc) s.cc_cache.erase(it);
  }
}

namespace {

bool marked_aborted(const Config& c, const ProcState& s) {
  return c.word(s.mynode) == Value::node_ref(s.pred);
}

}  // namespace

std::int64_t phi_dsm(const Config& c) {
  std::int64_t sum = 0;
  for (const ProcState& s : c.procs) {
    sum += c.word(s.go).is_true() ? 1 : 0;
    sum += s.pc == 6 ? 1 : 0;
    sum += marked_aborted(c, s) ? 1 : 0;
  }
  return sum;
}

std::int64_t phi_cc(const Config& c) {
  std::int64_t sum = 0;
  for (const ProcState& s : c.procs) {
    sum += c.word(s.go).is_true() ? 3 : 0;
    sum += s.pc == 6 ? 1 : 0;
    sum += marked_aborted(c, s) ? 1 : 0;
    sum += s.caches(s.go) ? 0 : 1;
  }
  return sum;
}

std::int64_t phi(const Config& c, CostModel model) {
  return model == CostModel::kCC ? phi_cc(c) : phi_dsm(c);
}

const LineBounds& amortized_bounds(CostModel model) {
  //                                     -  1  2  3  4  5  6  7  8  9 10 11
  static constexpr LineBounds kDsm = {{0, 1, 1, 1, 0, 0, 0, 1, 2, 1, 2, 2}};
  static constexpr LineBounds kCc = {{0, 1, 1, 1, 0, 0, 0, 1, 4, 1, 2, 4}};
  return model == CostModel::kCC ? kCc : kDsm;
}

int rmr_per_attempt_bound(CostModel model) {
  const LineBounds& b = amortized_bounds(model);
  // Lines 4-6 are free. The rest run at most once each along one of:
  //   success:   1 2 3 7 8
  //   abort:     1 2 3 9 10 11
  //   sidestep:  1 2 3 9 7 8
  // Line 1 reclaiming skips Line 2, which only shortens a path.
  int success = b[1] + b[2] + b[3] + b[7] + b[8];
  int abort = b[1] + b[2] + b[3] + b[9] + b[10] + b[11];
  int sidestep = b[1] + b[2] + b[3] + b[9] + b[7] + b[8];
  return std::max({success, abort, sidestep});
}

}  // namespace abortlab
