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

#ifndef ABORTLAB_TRACE_HH_
#define ABORTLAB_TRACE_HH_

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "abortlab/model.hh"
#include "abortlab/semantics.hh"
#include "abortlab/verify.hh"

namespace abortlab {

/// One step of a run, as written to and read from trace files.
struct TraceEntry {
  std::uint64_t seq = 0;
  // The process whose step this is; for abort signals and joins the actor is
  // the environment and `pid` names the target.
  ProcessId pid;
  StepKind kind = StepKind::kExecLine;
  int line = 0;
  int pre_pc = 0;
  int post_pc = 0;
  int rmr_cc = 0;
  int rmr_dsm = 0;
  std::int64_t phi_cc = 0;  // after the step
  std::int64_t phi_dsm = 0;
  std::uint8_t events = 0;
  std::vector<ProcessId> queue;  // Q after the step

  bool by_env() const { return kind == StepKind::kAbortSignal || kind == StepKind::kJoin; }
  bool has(Event e) const { return (events & e) != 0; }

  bool operator==(const TraceEntry&) const = default;
};

using Trace = std::vector<TraceEntry>;

class TraceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TraceOptions {
  // The schedule was weakly fair, so starvation is checkable.
  bool weakly_fair = false;
  bool check_amortized = true;
};

struct TraceReport {
  std::vector<Violation> violations;
  std::uint64_t steps = 0;
  std::uint64_t attempts = 0;
  std::uint64_t cs_entries = 0;
  std::uint64_t aborts = 0;  // attempts ending through the Abort section
  std::uint64_t abort_signals = 0;
  std::uint64_t rmr_cc = 0;
  std::uint64_t rmr_dsm = 0;
  int max_abort_steps = 0;
  int max_exit_steps = 0;

  bool clean() const { return violations.empty(); }
};

/// Single-pass analyzer. Per-step properties (mutex, fast abort, exit bound,
/// amortized cost) are reported as entries arrive; AFCFS and starvation need
/// the whole run and are reported by finish().
class TraceAnalyzer {
 public:
  explicit TraceAnalyzer(TraceOptions options = {});

  /// Returns the violations this entry triggered. Throws TraceError on a
  /// malformed trace.
  std::vector<Violation> feed(const TraceEntry& entry);

  TraceReport finish();

  static constexpr int kAbortStepBound = 6;
  static constexpr int kExitStepBound = 2;

 private:
  struct Attempt {
    std::uint64_t start = 0;
    std::optional<std::uint64_t> doorway;
    std::optional<std::uint64_t> cs_enter;
    std::optional<std::uint64_t> end;
    bool success = false;
    bool signalled = false;
  };

  struct Proc {
    int pc = 1;
    bool in_cs = false;
    std::vector<Attempt> attempts;
    bool attempt_open = false;
    std::optional<int> abort_steps;  // own steps since the pending signal
    std::optional<int> exit_steps;   // own steps since Line 7
  };

  void add(std::vector<Violation>& out, Clause clause, std::uint64_t seq, std::string detail,
           int line = 0);
  void check_afcfs();
  void check_starvation();

  TraceOptions options_;
  std::map<ProcessId, Proc> procs_;
  std::optional<std::uint64_t> last_seq_;
  std::int64_t last_phi_cc_ = 0;
  std::int64_t last_phi_dsm_ = 0;
  bool in_mutex_violation_ = false;
  TraceReport report_;
};

TraceReport analyze_trace(const Trace& trace, TraceOptions options = {});

}  // namespace abortlab

#endif  // ABORTLAB_TRACE_HH_
