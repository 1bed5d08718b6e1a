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

#include "abortlab/trace.hh"

#include <algorithm>
#include <sstream>

#include "abortlab/cost.hh"

namespace abortlab {

namespace {

std::string describe(const TraceEntry& e) {
  std::ostringstream os;
  os << "step " << e.seq << " (" << e.pid << ", " << step_kind_name(e.kind) << ")";
  return os.str();
}

}  // namespace

TraceAnalyzer::TraceAnalyzer(TraceOptions options) : options_(options) {}

void TraceAnalyzer::add(std::vector<Violation>& out, Clause clause, std::uint64_t seq,
                        std::string detail, int line) {
  Violation v{clause, line, seq, std::move(detail), 0};
  out.push_back(v);
  report_.violations.push_back(std::move(v));
}

std::vector<Violation> TraceAnalyzer::feed(const TraceEntry& e) {
  std::vector<Violation> out;
  if (last_seq_ && e.seq <= *last_seq_) {
    throw TraceError(describe(e) + ": seq does not increase");
  }
  last_seq_ = e.seq;
  ++report_.steps;

  if (e.kind == StepKind::kJoin) {
    auto [it, fresh] = procs_.try_emplace(e.pid);
    if (!fresh && (it->second.pc != 1 || !it->second.attempts.empty())) {
      throw TraceError(describe(e) + ": join of an active process");
    }
  }
  Proc& p = procs_[e.pid];
  if (e.kind != StepKind::kJoin && e.pre_pc != p.pc) {
    std::ostringstream os;
    os << describe(e) << ": pre_pc " << e.pre_pc << " but the process was at pc " << p.pc;
    throw TraceError(os.str());
  }
  if (!e.by_env() && (e.line < 1 || e.line > 11)) {
    throw TraceError(describe(e) + ": line out of range");
  }

  report_.rmr_cc += static_cast<std::uint64_t>(e.rmr_cc);
  report_.rmr_dsm += static_cast<std::uint64_t>(e.rmr_dsm);
  if (options_.check_amortized) {
    int line = e.by_env() ? 0 : e.line;
    auto check = [&](CostModel model, int rmr, std::int64_t before, std::int64_t after,
                     Clause clause) {
      int bound = amortized_bounds(model)[line];
      std::int64_t amortized = rmr + after - before;
      if (amortized > bound) {
        std::ostringstream os;
        os << describe(e) << ": " << to_string(model) << " amortized cost " << amortized
           << " > " << bound;
        add(out, clause, e.seq, os.str(), line);
      }
    };
    check(CostModel::kDSM, e.rmr_dsm, last_phi_dsm_, e.phi_dsm, Clause::kLemma3);
    check(CostModel::kCC, e.rmr_cc, last_phi_cc_, e.phi_cc, Clause::kLemma4);
  }
  last_phi_cc_ = e.phi_cc;
  last_phi_dsm_ = e.phi_dsm;

  if (!e.by_env()) {
    if (p.abort_steps) ++*p.abort_steps;
    if (p.exit_steps) ++*p.exit_steps;
    if (e.line == 7) p.exit_steps = 1;
  }

  auto need_open = [&](Event ev) {
    if (!p.attempt_open) {
      throw TraceError(describe(e) + ": " + event_name(ev) + " outside an attempt");
    }
  };
  for (Event ev : kAllEvents) {
    if (!e.has(ev)) continue;
    switch (ev) {
      case kAttemptStart:
        if (p.attempt_open) throw TraceError(describe(e) + ": attempt_start inside an attempt");
        p.attempts.emplace_back();
        p.attempts.back().start = e.seq;
        p.attempt_open = true;
        ++report_.attempts;
        break;
      case kDoorwayComplete:
        need_open(ev);
        p.attempts.back().doorway = e.seq;
        break;
      case kAbortSignalEvent:
        need_open(ev);
        p.attempts.back().signalled = true;
        p.abort_steps = 0;
        ++report_.abort_signals;
        break;
      case kCsEnter:
        need_open(ev);
        if (p.in_cs) {
          add(out, Clause::kMutex, e.seq, describe(e) + ": cs_enter while already in the CS");
        }
        p.in_cs = true;
        if (!p.attempts.back().cs_enter) p.attempts.back().cs_enter = e.seq;
        ++report_.cs_entries;
        break;
      case kCsExit:
        if (!p.in_cs) throw TraceError(describe(e) + ": cs_exit outside the CS");
        p.in_cs = false;
        break;
      case kAttemptEndSuccess:
      case kAttemptEndAbort:
        need_open(ev);
        p.attempts.back().end = e.seq;
        p.attempts.back().success = ev == kAttemptEndSuccess;
        p.attempt_open = false;
        if (ev == kAttemptEndAbort) ++report_.aborts;
        break;
    }
  }
  p.pc = e.post_pc;

  if (p.pc == 1) {
    if (p.abort_steps) {
      report_.max_abort_steps = std::max(report_.max_abort_steps, *p.abort_steps);
      if (*p.abort_steps > kAbortStepBound) {
        std::ostringstream os;
        os << describe(e) << ": abort took " << *p.abort_steps << " own steps";
        add(out, Clause::kFastAbort, e.seq, os.str());
      }
      p.abort_steps.reset();
    }
    if (p.exit_steps) {
      report_.max_exit_steps = std::max(report_.max_exit_steps, *p.exit_steps);
      if (*p.exit_steps > kExitStepBound) {
        std::ostringstream os;
        os << describe(e) << ": exit took " << *p.exit_steps << " own steps";
        add(out, Clause::kExitBound, e.seq, os.str());
      }
      p.exit_steps.reset();
    }
  }

  int in_cs = 0;
  int at7 = 0;
  for (const auto& [id, s] : procs_) {
    in_cs += s.in_cs ? 1 : 0;
    at7 += s.pc == 7 ? 1 : 0;
  }
  bool violated = in_cs > 1 || at7 > 1;
  if (violated && !in_mutex_violation_) {
    std::ostringstream os;
    os << describe(e) << ": " << in_cs << " processes in the CS, " << at7 << " at pc 7";
    add(out, Clause::kMutex, e.seq, os.str());
  }
  in_mutex_violation_ = violated;
  return out;
}

void TraceAnalyzer::check_afcfs() {
  struct Passage {
    ProcessId pid;
    std::uint64_t start;
    std::optional<std::uint64_t> last_doorway;
    std::uint64_t cs;
  };
  std::vector<Passage> passages;
  for (const auto& [pid, p] : procs_) {
    std::size_t first = 0;
    for (std::size_t i = 0; i < p.attempts.size(); ++i) {
      if (!p.attempts[i].success && i + 1 != p.attempts.size()) continue;
      std::optional<std::uint64_t> cs;
      for (std::size_t j = first; j <= i; ++j) {
        if (p.attempts[j].cs_enter && !cs) cs = p.attempts[j].cs_enter;
      }
      // Passages without a CS entry impose no ordering.
      if (cs) passages.push_back({pid, p.attempts[first].start, p.attempts[i].doorway, *cs});
      first = i + 1;
    }
  }
  std::vector<const Passage*> by_doorway;
  for (const auto& ps : passages) {
    if (ps.last_doorway) by_doorway.push_back(&ps);
  }
  std::sort(by_doorway.begin(), by_doorway.end(),
            [](const Passage* x, const Passage* y) { return *x->last_doorway < *y->last_doorway; });
  std::vector<const Passage*> by_start;
  for (const auto& ps : passages) by_start.push_back(&ps);
  std::sort(by_start.begin(), by_start.end(),
            [](const Passage* x, const Passage* y) { return x->start < y->start; });

  // For each passage, the latest CS entry among passages whose doorway
  // completed before it began.
  const Passage* latest = nullptr;
  std::size_t next = 0;
  for (const Passage* later : by_start) {
    while (next < by_doorway.size() && *by_doorway[next]->last_doorway < later->start) {
      if (latest == nullptr || by_doorway[next]->cs > latest->cs) latest = by_doorway[next];
      ++next;
    }
    if (latest != nullptr && latest->cs > later->cs) {
      std::ostringstream os;
      os << later->pid << " began a passage at step " << later->start << " and entered the CS at "
         << later->cs << ", before " << latest->pid << " (doorway at " << *latest->last_doorway
         << ") entered at " << latest->cs;
      std::vector<Violation> ignored;
      add(ignored, Clause::kAfcfs, later->cs, os.str());
    }
  }
}

void TraceAnalyzer::check_starvation() {
  std::vector<Violation> ignored;
  for (const auto& [pid, p] : procs_) {
    for (const Attempt& a : p.attempts) {
      if (a.end && !a.signalled && !a.cs_enter) {
        std::ostringstream os;
        os << pid << "'s attempt starting at step " << a.start
           << " ended without an abort signal or a CS entry";
        add(ignored, Clause::kStarvation, *a.end, os.str());
      }
    }
  }
}

TraceReport TraceAnalyzer::finish() {
  check_afcfs();
  if (options_.weakly_fair) check_starvation();
  return report_;
}

TraceReport analyze_trace(const Trace& trace, TraceOptions options) {
  TraceAnalyzer analyzer(options);
  for (const auto& e : trace) analyzer.feed(e);
  return analyzer.finish();
}

}  // namespace abortlab
