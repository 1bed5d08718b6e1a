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

#ifndef ABORTLAB_EXPLORER_HH_
#define ABORTLAB_EXPLORER_HH_

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "abortlab/cost.hh"
#include "abortlab/model.hh"
#include "abortlab/semantics.hh"
#include "abortlab/trace.hh"
#include "abortlab/verify.hh"

namespace abortlab {

enum class Scheduler : std::uint8_t { kRandom, kRoundRobin, kExhaustive };
enum class Fairness : std::uint8_t { kWeak, kNone };

const char* to_string(Scheduler s);

struct Checks {
  bool invariant = true;
  bool progress = true;
  bool amortized = true;
  bool trace = true;

  static Checks all() { return {}; }
  static Checks none() { return {false, false, false, false}; }
};

struct ScheduleParams {
  std::size_t procs = 2;
  // Overrides `procs` when non-empty.
  std::vector<ProcessId> ids;
  Scheduler scheduler = Scheduler::kRandom;
  std::uint64_t seed = 1;
  std::uint64_t max_steps = 100000;
  // Probability that a scheduled process outside the Remainder receives an
  // abort signal instead of taking its step.
  double abort_rate = 0.0;
  // Exhaustive only: explore both the signal and no-signal branch.
  bool nondet_aborts = false;
  // 0 = unlimited. A process at pc 1 with no budget left is never scheduled.
  std::uint32_t attempts_per_proc = 0;
  Fairness fairness = Fairness::kWeak;
  Checks checks;
  // Random runs: processes that join part-way, one per successful draw.
  std::size_t late_joiners = 0;
  double join_rate = 0.001;
  Mutation mutation = Mutation::kNone;
  std::uint64_t max_states = 50'000'000;
  bool stop_on_violation = true;
};

/// The initial participants named by `params`.
std::vector<ProcessId> initial_ids(const ScheduleParams& params);

/// A process unscheduled for this many steps times the process count is
/// scheduled next under weak fairness.
inline constexpr std::uint64_t kFairnessWindowPerProc = 64;

struct ExploreReport {
  std::uint64_t states_visited = 0;
  std::uint64_t transitions = 0;
  std::uint64_t self_loops = 0;
  // First instance of each violated clause, in discovery order.
  std::vector<Violation> violations;
  std::map<std::string, std::uint64_t> violation_counts;
  // Exhaustive: the actions from the initial configuration to the first
  // violation.
  std::vector<Action> counterexample;
  std::size_t max_queue_length = 0;
  std::uint64_t rmr_cc_total = 0;
  std::uint64_t rmr_dsm_total = 0;
  std::uint64_t attempts_total = 0;
  std::uint64_t cs_entries = 0;
  std::uint64_t aborts = 0;
  std::uint64_t abort_signals = 0;
  std::uint64_t forced_schedules = 0;
  // Configurations whose q_m sat at pc 11 while computing some distance.
  std::uint64_t front_at_pc11 = 0;
  int max_abort_steps = 0;
  int max_exit_steps = 0;
  // Largest observed rmr + delta-phi per line (index 0: signals and joins).
  std::array<std::int64_t, 12> max_amortized_cc{};
  std::array<std::int64_t, 12> max_amortized_dsm{};
  std::array<std::uint64_t, 12> line_counts{};
  // Every process returned to pc 1 with its budget spent (runs), or the whole
  // bounded space was covered (exhaustive).
  bool complete = false;
  double elapsed_seconds = 0;

  bool clean() const { return violations.empty(); }
  std::uint64_t violation_total() const;
};

/// One transition with both cost models applied. `after` carries the CC
/// cache update.
struct Transition {
  Config after;
  StepRecord record;
  StepCost cc;
  StepCost dsm;
};

Transition transition(const Config& before, const Action& action,
                      Mutation mutation = Mutation::kNone);

TraceEntry to_trace_entry(const Transition& t, const std::vector<ProcessId>& queue);

struct RunResult {
  Trace trace;
  ExploreReport report;
  TraceReport trace_report;
};

using TraceSink = std::function<void(const TraceEntry&)>;

/// A single random or round-robin run with online checks. `sink` sees every
/// entry as it is produced; the returned trace is empty unless `keep_trace`.
RunResult run(const ScheduleParams& params, const TraceSink& sink = {}, bool keep_trace = true);

/// Depth-first search of every configuration reachable within the attempt
/// budgets, checking each state and each transition.
ExploreReport explore(const ScheduleParams& params);

}  // namespace abortlab

#endif  // ABORTLAB_EXPLORER_HH_
