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

#include <gtest/gtest.h>

#include <map>
#include <set>

#include "abortlab/explorer.hh"
#include "abortlab/trace.hh"
#include "helpers.hh"

namespace abortlab {
namespace {

using testing::P;

const std::set<std::string> kBaseline{"lemma4(8)", "lemma4(11)"};

std::set<std::string> clauses(const ExploreReport& r) {
  std::set<std::string> out;
  for (const auto& [name, n] : r.violation_counts) out.insert(name);
  return out;
}

ScheduleParams exhaustive(std::size_t procs, std::uint32_t attempts, bool aborts) {
  ScheduleParams p;
  p.scheduler = Scheduler::kExhaustive;
  p.procs = procs;
  p.attempts_per_proc = attempts;
  p.nondet_aborts = aborts;
  p.stop_on_violation = false;
  return p;
}

TEST(Explore, SingleProcessLinearPath) {
  ExploreReport r = explore(exhaustive(1, 1, false));
  EXPECT_TRUE(r.complete);
  EXPECT_EQ(r.states_visited, 5u);
  EXPECT_EQ(r.transitions, 4u);
  EXPECT_TRUE(r.clean());
  EXPECT_EQ(r.line_counts[1], 1u);
  EXPECT_EQ(r.line_counts[7], 1u);
}

TEST(Explore, TwoProcessesOnlyWakeupBound) {
  ExploreReport r = explore(exhaustive(2, 2, true));
  EXPECT_TRUE(r.complete);
  EXPECT_GT(r.states_visited, 10000u);
  std::set<std::string> found = clauses(r);
  for (const auto& c : found) EXPECT_TRUE(kBaseline.count(c)) << c;
  // The CC wakeup overshoots by one, never more.
  EXPECT_EQ(r.max_amortized_cc[8], 5);
  EXPECT_EQ(r.max_amortized_cc[11], 5);
  for (int line : {1, 2, 3, 4, 5, 6, 7, 9, 10}) {
    EXPECT_LE(r.max_amortized_cc[line], amortized_bounds(CostModel::kCC)[line]) << line;
  }
  for (int line = 0; line < 12; ++line) {
    EXPECT_LE(r.max_amortized_dsm[line], amortized_bounds(CostModel::kDSM)[line]) << line;
  }
  EXPECT_LE(r.max_abort_steps, 6);
  EXPECT_LE(r.max_exit_steps, 2);
}

TEST(Explore, CleanWithoutAmortizedCheck) {
  ScheduleParams p = exhaustive(2, 2, true);
  p.checks.amortized = false;
  ExploreReport r = explore(p);
  EXPECT_TRUE(r.complete);
  EXPECT_TRUE(r.clean()) << r.violations.front();
}

TEST(Explore, CounterexampleReplays) {
  ScheduleParams p = exhaustive(2, 1, false);
  p.stop_on_violation = true;
  ExploreReport r = explore(p);
  ASSERT_FALSE(r.clean());
  EXPECT_EQ(r.violations.front().name(), "lemma4(8)");
  ASSERT_FALSE(r.counterexample.empty());
  Config c = initial_config(make_process_ids(2));
  Transition last;
  for (const Action& a : r.counterexample) {
    last = transition(c, a);
    c = last.after;
  }
  EXPECT_EQ(last.record.line, 8);
  EXPECT_GT(last.cc.amortized(), 4);
}

struct MutationCase {
  Mutation mutation;
  const char* expect;
};

class MutationDetected : public ::testing::TestWithParam<MutationCase> {};

TEST_P(MutationDetected, BeyondBaseline) {
  ScheduleParams p = exhaustive(2, 2, true);
  p.mutation = GetParam().mutation;
  ExploreReport r = explore(p);
  std::set<std::string> extra;
  for (const auto& c : clauses(r)) {
    if (!kBaseline.count(c)) extra.insert(c);
  }
  EXPECT_FALSE(extra.empty());
  EXPECT_TRUE(extra.count(GetParam().expect)) << GetParam().expect;
}

INSTANTIATE_TEST_SUITE_P(
    Explore, MutationDetected,
    ::testing::Values(MutationCase{Mutation::kLine10WritesNil, "I7"},
                      MutationCase{Mutation::kLine5Omitted, "lemma4(5)"},
                      MutationCase{Mutation::kLine9WritesToken, "mutex"},
                      MutationCase{Mutation::kLine1NeverReclaims, "I6"}),
    [](const auto& info) {
      std::string s = mutation_name(info.param.mutation);
      for (auto& ch : s) {
        if (ch == '-') ch = '_';
      }
      return s;
    });

TEST(Explore, BudgetTruncates) {
  ScheduleParams p = exhaustive(2, 2, true);
  p.max_states = 100;
  ExploreReport r = explore(p);
  EXPECT_FALSE(r.complete);
  EXPECT_LE(r.states_visited, 101u);
}

TEST(Explore, NeedsBudget) {
  ScheduleParams p = exhaustive(2, 0, false);
  EXPECT_THROW(explore(p), UsageError);
}

TEST(Run, SingleAttempt) {
  ScheduleParams p;
  p.procs = 1;
  p.attempts_per_proc = 1;
  RunResult r = run(p);
  EXPECT_TRUE(r.report.complete);
  EXPECT_EQ(r.report.attempts_total, 1u);
  EXPECT_EQ(r.report.cs_entries, 1u);
  EXPECT_TRUE(r.report.clean());
  EXPECT_EQ(r.trace.size(), 4u);
}

TEST(Run, Reproducible) {
  ScheduleParams p;
  p.procs = 5;
  p.max_steps = 5000;
  p.abort_rate = 0.3;
  p.seed = 42;
  RunResult a = run(p);
  RunResult b = run(p);
  EXPECT_EQ(a.trace, b.trace);
  p.seed = 43;
  RunResult c = run(p);
  EXPECT_NE(a.trace, c.trace);
}

TEST(Run, TelescopedTotals) {
  ScheduleParams p;
  p.procs = 8;
  p.max_steps = 20000;
  p.abort_rate = 0.2;
  p.seed = 7;
  p.stop_on_violation = false;
  RunResult r = run(p, {}, false);
  EXPECT_GT(r.report.attempts_total, 100u);
  EXPECT_LE(r.report.rmr_dsm_total, 8 * r.report.attempts_total);
  EXPECT_LE(r.report.rmr_cc_total, 10 * r.report.attempts_total);
  for (const auto& c : clauses(r.report)) EXPECT_TRUE(kBaseline.count(c)) << c;
}

TEST(Run, AlwaysAbort) {
  ScheduleParams p;
  p.procs = 2;
  p.max_steps = 5000;
  p.abort_rate = 1.0;
  p.checks.amortized = false;
  RunResult r = run(p);
  EXPECT_TRUE(r.report.clean()) << r.report.violations.front();
  EXPECT_GT(r.report.aborts, 0u);
  // A successful attempt either entered the CS or took the token at Line 9.
  std::map<ProcessId, bool> earned;
  for (const auto& e : r.trace) {
    if (e.has(kAttemptStart)) earned[e.pid] = false;
    if (e.has(kCsEnter) || (e.line == 9 && e.post_pc == 7)) earned[e.pid] = true;
    if (e.has(kAttemptEndSuccess)) {
      EXPECT_TRUE(earned[e.pid]) << "seq " << e.seq;
    }
  }
}

TEST(Run, LateJoinersAndRoundRobin) {
  ScheduleParams p;
  p.procs = 3;
  p.late_joiners = 3;
  p.join_rate = 0.01;
  p.max_steps = 20000;
  p.abort_rate = 0.1;
  p.checks.amortized = false;
  RunResult r = run(p);
  EXPECT_TRUE(r.report.clean()) << r.report.violations.front();
  std::size_t joins = 0;
  for (const auto& e : r.trace) joins += e.kind == StepKind::kJoin;
  EXPECT_EQ(joins, 3u);

  p.scheduler = Scheduler::kRoundRobin;
  RunResult rr = run(p);
  EXPECT_TRUE(rr.report.clean()) << rr.report.violations.front();
}

TEST(Run, SparseIds) {
  ScheduleParams p;
  p.ids = {P(17), P(4), P(250)};
  p.attempts_per_proc = 3;
  p.abort_rate = 0.3;
  p.checks.amortized = false;
  RunResult r = run(p);
  EXPECT_TRUE(r.report.complete);
  EXPECT_TRUE(r.report.clean());
  EXPECT_EQ(r.report.attempts_total, 9u);
}

TEST(Run, ReplayMatchesOnlineChecks) {
  for (std::uint64_t seed : {1, 2, 3}) {
    ScheduleParams p;
    p.procs = 4;
    p.max_steps = 20000;
    p.abort_rate = 0.3;
    p.seed = seed;
    p.stop_on_violation = false;
    p.checks.invariant = false;
    p.checks.progress = false;
    RunResult r = run(p);
    TraceReport replay = analyze_trace(r.trace, {true, true});
    std::map<std::string, std::uint64_t> counts;
    std::map<std::string, std::uint64_t> first;
    for (const auto& v : replay.violations) {
      if (counts[v.name()]++ == 0) first[v.name()] = v.step_seq;
    }
    EXPECT_EQ(counts, r.report.violation_counts);
    for (const auto& v : r.report.violations) EXPECT_EQ(first[v.name()], v.step_seq) << v;
    EXPECT_EQ(r.trace_report.rmr_cc, replay.rmr_cc);
    EXPECT_EQ(r.trace_report.attempts, replay.attempts);
  }
}

TEST(Run, RejectsBadParams) {
  ScheduleParams p;
  p.abort_rate = 1.5;
  EXPECT_THROW(run(p), UsageError);
  ScheduleParams q;
  q.procs = 0;
  EXPECT_THROW(run(q), UsageError);
}

}  // namespace
}  // namespace abortlab
