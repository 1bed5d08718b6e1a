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

#include "abortlab/explorer.hh"

#include <algorithm>
#include <chrono>
#include <random>
#include <sstream>
#include <unordered_set>

#include "abortlab/canonical.hh"

namespace abortlab {

const char* to_string(Scheduler s) {
  switch (s) {
    case Scheduler::kRandom:
      return "random";
    case Scheduler::kRoundRobin:
      return "round-robin";
    case Scheduler::kExhaustive:
      return "exhaustive";
  }
  return "?";
}

std::uint64_t ExploreReport::violation_total() const {
  std::uint64_t n = 0;
  for (const auto& [name, count] : violation_counts) n += count;
  return n;
}

Transition transition(const Config& before, const Action& action, Mutation mutation) {
  StepResult r = step(before, action, mutation);
  Transition t{std::move(r.config), r.record, {}, {}};
  if (action.kind == Action::Kind::kStep) {
    t.cc.rmr = rmr_cost(before, t.record, CostModel::kCC);
    t.dsm.rmr = rmr_cost(before, t.record, CostModel::kDSM);
  }
  apply_cache_effects(t.after, t.record);
  t.cc.line = t.dsm.line = t.record.line;
  t.cc.phi_before = phi_cc(before);
  t.dsm.phi_before = phi_dsm(before);
  t.cc.phi_after = phi_cc(t.after);
  t.dsm.phi_after = phi_dsm(t.after);
  return t;
}

TraceEntry to_trace_entry(const Transition& t, const std::vector<ProcessId>& queue) {
  TraceEntry e;
  e.seq = t.record.seq;
  e.pid = t.record.action.pid;
  e.kind = t.record.kind;
  e.line = t.record.line;
  e.pre_pc = t.record.pre_pc;
  e.post_pc = t.record.post_pc;
  e.rmr_cc = t.cc.rmr;
  e.rmr_dsm = t.dsm.rmr;
  e.phi_cc = t.cc.phi_after;
  e.phi_dsm = t.dsm.phi_after;
  e.events = t.record.events;
  e.queue = queue;
  return e;
}

std::vector<ProcessId> initial_ids(const ScheduleParams& params) {
  return params.ids.empty() ? make_process_ids(params.procs) : params.ids;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void validate(const ScheduleParams& p) {
  if (p.procs == 0 && p.ids.empty()) throw UsageError("at least one process is required");
  if (p.abort_rate < 0 || p.abort_rate > 1) throw UsageError("abort rate must lie in [0, 1]");
  if (p.join_rate < 0 || p.join_rate > 1) throw UsageError("join rate must lie in [0, 1]");
}

// Keeps the first instance of each clause and counts the rest.
void note(ExploreReport& report, Violation v) {
  if (report.violation_counts[v.name()]++ == 0) report.violations.push_back(std::move(v));
}

void tally(ExploreReport& report, const Transition& t) {
  int line = t.record.line;
  report.rmr_cc_total += static_cast<std::uint64_t>(t.cc.rmr);
  report.rmr_dsm_total += static_cast<std::uint64_t>(t.dsm.rmr);
  if (report.line_counts[line]++ == 0) {
    report.max_amortized_cc[line] = t.cc.amortized();
    report.max_amortized_dsm[line] = t.dsm.amortized();
  } else {
    report.max_amortized_cc[line] = std::max(report.max_amortized_cc[line], t.cc.amortized());
    report.max_amortized_dsm[line] = std::max(report.max_amortized_dsm[line], t.dsm.amortized());
  }
  if (t.record.has(kAttemptStart)) ++report.attempts_total;
  if (t.record.has(kCsEnter)) ++report.cs_entries;
  if (t.record.has(kAttemptEndAbort)) ++report.aborts;
  if (t.record.has(kAbortSignalEvent)) ++report.abort_signals;
}

// Invariant, mutual exclusion and distances of one configuration. Returns
// the queue when it could be derived.
std::optional<QueueView> check_state(const Config& c, const Checks& checks,
                                     ExploreReport& report, std::vector<Violation>& out) {
  std::optional<QueueView> view;
  if (checks.invariant) {
    auto inv = check_invariant(c);
    if (auto* v = std::get_if<Violation>(&inv)) {
      out.push_back(std::move(*v));
    } else {
      view = std::get<QueueView>(std::move(inv));
    }
    if (auto v = check_mutex(c)) out.push_back(std::move(*v));
    if (view) {
      if (auto v = check_distances(c, *view, &report.front_at_pc11)) out.push_back(std::move(*v));
    }
  } else {
    auto derived = derive_queue(c);
    if (auto* q = std::get_if<QueueView>(&derived)) view = std::move(*q);
  }
  if (view) report.max_queue_length = std::max(report.max_queue_length, view->k());
  return view;
}

bool budget_spent(const ProcState& s, std::uint32_t budget) {
  return budget != 0 && s.pc == 1 && s.attempts_started >= budget;
}

}  // namespace

RunResult run(const ScheduleParams& params, const TraceSink& sink, bool keep_trace) {
  validate(params);
  if (params.scheduler == Scheduler::kExhaustive) {
    throw UsageError("run() takes the random or round-robin scheduler");
  }
  const auto start = Clock::now();
  RunResult result;
  ExploreReport& report = result.report;

  const std::vector<ProcessId> ids = initial_ids(params);
  std::vector<ProcessId> joiners;
  {
    std::uint32_t next = 0;
    for (ProcessId p : ids) next = std::max(next, p.value);
    for (std::size_t j = 0; j < params.late_joiners; ++j) joiners.push_back(ProcessId{++next});
  }
  std::size_t next_joiner = 0;

  Config config = initial_config(ids);
  std::mt19937_64 rng(params.seed);
  std::bernoulli_distribution abort_draw(params.abort_rate);
  std::bernoulli_distribution join_draw(params.join_rate);
  std::map<ProcessId, std::uint64_t> last_scheduled;
  std::size_t rr_next = 0;

  const bool fair = params.fairness == Fairness::kWeak;
  TraceAnalyzer analyzer(TraceOptions{fair, false});
  std::size_t streamed_violations = 0;

  std::vector<Violation> found;
  std::optional<QueueView> view = check_state(config, params.checks, report, found);
  for (auto& v : found) note(report, std::move(v));
  report.states_visited = 1;
  bool stop = params.stop_on_violation && !report.clean();

  for (std::uint64_t seq = 0; !stop && seq < params.max_steps; ++seq) {
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < config.procs.size(); ++i) {
      if (!budget_spent(config.procs[i], params.attempts_per_proc)) candidates.push_back(i);
    }
    bool can_join = next_joiner < joiners.size();
    if (candidates.empty() && !can_join) {
      report.complete = true;
      break;
    }

    Action action;
    if (can_join && (candidates.empty() || join_draw(rng))) {
      action = Action::join(joiners[next_joiner++]);
    } else {
      std::optional<std::size_t> chosen;
      if (fair) {
        const std::uint64_t window = kFairnessWindowPerProc * config.procs.size();
        std::uint64_t longest = 0;
        for (std::size_t i : candidates) {
          std::uint64_t waited = seq - last_scheduled[config.procs[i].id];
          if (waited >= window && waited > longest) {
            longest = waited;
            chosen = i;
          }
        }
        if (chosen) ++report.forced_schedules;
      }
      const bool forced = chosen.has_value();
      if (!chosen) {
        if (params.scheduler == Scheduler::kRandom) {
          std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
          chosen = candidates[pick(rng)];
        } else {
          auto it = std::lower_bound(candidates.begin(), candidates.end(), rr_next);
          chosen = it == candidates.end() ? candidates.front() : *it;
          rr_next = *chosen + 1;
        }
      }
      ProcessId p = config.procs[*chosen].id;
      action = Action::step(p);
      if (!forced && params.abort_rate > 0 && is_enabled(config, Action::abort_signal(p), true) &&
          abort_draw(rng)) {
        action = Action::abort_signal(p);
      } else {
        last_scheduled[p] = seq;
      }
    }
    if (action.kind == Action::Kind::kJoin) last_scheduled[action.pid] = seq;

    Transition t;
    try {
      t = transition(config, action, params.mutation);
    } catch (const SoundnessError& e) {
      note(report, Violation{Clause::kSoundness, 0, seq, e.what(), config_hash(config)});
      break;
    }
    t.record.seq = seq;
    ++report.transitions;
    ++report.states_visited;
    tally(report, t);

    found.clear();
    std::optional<QueueView> after_view = check_state(t.after, params.checks, report, found);
    if (params.checks.progress && view && after_view) {
      if (auto v = check_progress_step(config, *view, action, t.after, *after_view)) {
        found.push_back(std::move(*v));
      }
    }
    if (params.checks.amortized) {
      for (auto& v : check_amortized_step(t.record, t.cc, t.dsm)) found.push_back(std::move(v));
    }
    TraceEntry entry = to_trace_entry(t, after_view ? after_view->q : std::vector<ProcessId>{});
    if (params.checks.trace) {
      auto streamed = analyzer.feed(entry);
      streamed_violations += streamed.size();
      for (auto& v : streamed) found.push_back(std::move(v));
    }
    for (auto& v : found) {
      v.step_seq = seq;
      if (v.config_hash == 0) v.config_hash = config_hash(config);
      note(report, std::move(v));
    }
    if (sink) sink(entry);
    if (keep_trace) result.trace.push_back(std::move(entry));
    config = std::move(t.after);
    view = std::move(after_view);
    stop = params.stop_on_violation && !found.empty();
  }

  if (params.checks.trace) {
    result.trace_report = analyzer.finish();
    const auto& all = result.trace_report.violations;
    for (std::size_t i = streamed_violations; i < all.size(); ++i) note(report, all[i]);
    report.max_abort_steps = result.trace_report.max_abort_steps;
    report.max_exit_steps = result.trace_report.max_exit_steps;
  }
  report.elapsed_seconds = seconds_since(start);
  return result;
}

namespace {

// History variables carried in the explored state; the trace properties are
// judged one transition at a time against them.
struct Ghost {
  static constexpr std::uint8_t kInPassage = 1;
  static constexpr std::uint8_t kDoorwayDone = 2;

  std::vector<std::uint8_t> flags;
  std::vector<std::int8_t> abort_steps;  // -1: no signal outstanding
  std::vector<std::int8_t> exit_steps;   // -1: not in Exit
  // since[p] bit r: r began its current passage after p's latest doorway.
  std::vector<std::uint64_t> since;
  // overtaken[p] bit r: r then entered the CS.
  std::vector<std::uint64_t> overtaken;

  bool operator==(const Ghost&) const = default;

  explicit Ghost(std::size_t n)
      : flags(n, 0), abort_steps(n, -1), exit_steps(n, -1), since(n, 0), overtaken(n, 0) {}

  void append_key(std::string& out) const {
    for (std::size_t i = 0; i < flags.size(); ++i) {
      out.push_back(static_cast<char>(flags[i]));
      out.push_back(static_cast<char>(abort_steps[i]));
      out.push_back(static_cast<char>(exit_steps[i]));
      out.append(reinterpret_cast<const char*>(&since[i]), sizeof since[i]);
      out.append(reinterpret_cast<const char*>(&overtaken[i]), sizeof overtaken[i]);
    }
  }

  // Applies the transition and returns what it violated.
  std::vector<Violation> advance(const Config& after, const StepRecord& rec, std::size_t i,
                                 ExploreReport& report) {
    std::vector<Violation> out;
    auto fail = [&](Clause clause, const std::string& what) {
      std::ostringstream os;
      os << rec.action << ": " << what;
      out.push_back(Violation{clause, 0, 0, os.str(), 0});
    };
    const std::uint64_t me = std::uint64_t{1} << i;
    if (rec.action.kind == Action::Kind::kStep) {
      if (abort_steps[i] >= 0 && abort_steps[i] <= TraceAnalyzer::kAbortStepBound) ++abort_steps[i];
      if (exit_steps[i] >= 0 && exit_steps[i] <= TraceAnalyzer::kExitStepBound) ++exit_steps[i];
      if (rec.line == 7) exit_steps[i] = 1;
    }
    if (rec.has(kAbortSignalEvent)) abort_steps[i] = 0;
    if (rec.has(kAttemptStart)) {
      if ((flags[i] & kInPassage) == 0) {
        flags[i] |= kInPassage;
        for (std::size_t r = 0; r < flags.size(); ++r) {
          if (r != i && (flags[r] & kDoorwayDone) != 0) since[r] |= me;
        }
      }
      flags[i] &= static_cast<std::uint8_t>(~kDoorwayDone);
    }
    if (rec.has(kDoorwayComplete)) {
      flags[i] |= kDoorwayDone;
      since[i] = 0;
      overtaken[i] = 0;
    }
    if (rec.has(kCsEnter)) {
      if (overtaken[i] != 0) fail(Clause::kAfcfs, "entered the CS after a later passage");
      for (std::size_t r = 0; r < flags.size(); ++r) {
        if (r != i && (flags[r] & kDoorwayDone) != 0 && (since[r] & me) != 0) overtaken[r] |= me;
      }
    }
    if (rec.has(kAttemptEndSuccess)) flags[i] &= static_cast<std::uint8_t>(~kInPassage);
    if (after.procs[i].pc == 1) {
      if (abort_steps[i] >= 0) {
        report.max_abort_steps = std::max<int>(report.max_abort_steps, abort_steps[i]);
        if (abort_steps[i] > TraceAnalyzer::kAbortStepBound) {
          fail(Clause::kFastAbort, "abort took more than " +
                                       std::to_string(TraceAnalyzer::kAbortStepBound) +
                                       " own steps");
        }
        abort_steps[i] = -1;
      }
      if (exit_steps[i] >= 0) {
        report.max_exit_steps = std::max<int>(report.max_exit_steps, exit_steps[i]);
        if (exit_steps[i] > TraceAnalyzer::kExitStepBound) {
          fail(Clause::kExitBound, "exit took more than " +
                                       std::to_string(TraceAnalyzer::kExitStepBound) +
                                       " own steps");
        }
        exit_steps[i] = -1;
      }
    }
    return out;
  }
};

struct Frame {
  Config config;
  Ghost ghost;
  std::optional<QueueView> view;
  std::uint32_t index;
};

}  // namespace

ExploreReport explore(const ScheduleParams& params) {
  validate(params);
  if (params.attempts_per_proc == 0) {
    throw UsageError("exhaustive exploration needs a per-process attempt budget");
  }
  const std::vector<ProcessId> ids = initial_ids(params);
  if (ids.size() > 64) throw UsageError("exhaustive exploration supports at most 64 processes");
  const auto start = Clock::now();
  ExploreReport report;
  const bool aborts = params.nondet_aborts || params.abort_rate > 0;
  const Checks& checks = params.checks;

  struct Parent {
    std::uint32_t parent;
    Action action;
  };
  std::vector<Parent> parents;
  std::unordered_set<std::string> visited;
  std::string key;
  auto make_key = [&](const Config& c, const Ghost& g) {
    key.clear();
    append_canonical_key(c, key);
    if (checks.trace) g.append_key(key);
  };
  auto path_to = [&](std::uint32_t index) {
    std::vector<Action> path;
    for (; index != 0; index = parents[index].parent) path.push_back(parents[index].action);
    std::reverse(path.begin(), path.end());
    return path;
  };
  auto record = [&](Violation v, std::uint32_t at, const std::optional<Action>& via,
                    const Config& where) {
    if (report.violations.empty()) {
      report.counterexample = path_to(at);
      if (via) report.counterexample.push_back(*via);
    }
    v.step_seq = report.transitions;
    if (v.config_hash == 0) v.config_hash = config_hash(where);
    note(report, std::move(v));
  };

  std::vector<Frame> stack;
  {
    Frame root{initial_config(ids), Ghost(ids.size()), std::nullopt, 0};
    std::vector<Violation> found;
    root.view = check_state(root.config, checks, report, found);
    parents.push_back({0, Action{}});
    make_key(root.config, root.ghost);
    visited.insert(key);
    report.states_visited = 1;
    for (auto& v : found) record(std::move(v), 0, std::nullopt, root.config);
    stack.push_back(std::move(root));
  }

  bool stop = params.stop_on_violation && !report.clean();
  bool truncated = false;
  std::vector<Violation> found;
  while (!stack.empty() && !stop) {
    Frame frame = std::move(stack.back());
    stack.pop_back();
    for (const Action& action : enabled_actions(frame.config, aborts)) {
      std::size_t i = static_cast<std::size_t>(
          std::find_if(frame.config.procs.begin(), frame.config.procs.end(),
                       [&](const ProcState& s) { return s.id == action.pid; }) -
          frame.config.procs.begin());
      if (action.kind == Action::Kind::kStep &&
          budget_spent(frame.config.procs[i], params.attempts_per_proc)) {
        continue;
      }
      Transition t;
      try {
        t = transition(frame.config, action, params.mutation);
      } catch (const SoundnessError& e) {
        record(Violation{Clause::kSoundness, 0, 0, e.what(), 0}, frame.index, action,
               frame.config);
        if (params.stop_on_violation) {
          stop = true;
          break;
        }
        continue;
      }
      ++report.transitions;
      tally(report, t);
      found.clear();
      Ghost ghost = frame.ghost;
      if (checks.trace) {
        for (auto& v : ghost.advance(t.after, t.record, i, report)) found.push_back(std::move(v));
      }
      if (checks.amortized) {
        for (auto& v : check_amortized_step(t.record, t.cc, t.dsm)) found.push_back(std::move(v));
      }

      make_key(t.after, ghost);
      auto [it, fresh] = visited.insert(key);
      std::optional<QueueView> view;
      std::vector<Violation> state_found;
      if (fresh) {
        view = check_state(t.after, checks, report, state_found);
      } else if (checks.progress && frame.view) {
        auto derived = derive_queue(t.after);
        if (auto* q = std::get_if<QueueView>(&derived)) view = std::move(*q);
      }
      if (checks.progress && frame.view && view) {
        if (auto v = check_progress_step(frame.config, *frame.view, action, t.after, *view)) {
          found.push_back(std::move(*v));
        }
      }
      for (auto& v : found) record(std::move(v), frame.index, action, frame.config);
      bool failed = !found.empty();

      if (!fresh) {
        if (t.after == frame.config && ghost == frame.ghost) ++report.self_loops;
      } else {
        auto index = static_cast<std::uint32_t>(parents.size());
        parents.push_back({frame.index, action});
        ++report.states_visited;
        for (auto& v : state_found) record(std::move(v), index, std::nullopt, t.after);
        failed = failed || !state_found.empty();
        stack.push_back(Frame{std::move(t.after), std::move(ghost), std::move(view), index});
      }
      if (failed && params.stop_on_violation) {
        stop = true;
        break;
      }
    }
    if (report.states_visited >= params.max_states && !stack.empty()) {
      truncated = true;
      break;
    }
  }
  report.complete = !stop && !truncated;
  report.elapsed_seconds = seconds_since(start);
  return report;
}

}  // namespace abortlab
