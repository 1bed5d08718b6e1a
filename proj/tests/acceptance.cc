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

// Acceptance suite: one PASS/FAIL line per criterion, then a summary.
// Exits 0 once every criterion has been evaluated, whatever the verdicts;
// a crash or an exception exits non-zero.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "abortlab/explorer.hh"
#include "abortlab/native_lock.hh"

namespace abortlab {
namespace {

struct Verdict {
  std::string name;
  bool pass = false;
  std::string detail;
};

std::vector<Verdict> verdicts;

void report(const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%s] %s: %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  verdicts.push_back({name, pass, detail});
}

std::string counts(const std::map<std::string, std::uint64_t>& m) {
  if (m.empty()) return "none";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, n] : m) {
    os << (first ? "" : ", ") << k << " x" << n;
    first = false;
  }
  return os.str();
}

std::string over_bound(const std::array<std::int64_t, 12>& seen, CostModel model) {
  const LineBounds& b = amortized_bounds(model);
  std::ostringstream os;
  for (int line = 0; line < 12; ++line) {
    if (seen[line] > b[line]) {
      os << " line " << line << " max " << seen[line] << " > " << b[line] << ";";
    }
  }
  return os.str();
}

bool has_clause(const ExploreReport& r, const std::string& prefix) {
  for (const auto& [k, n] : r.violation_counts) {
    if (k.rfind(prefix, 0) == 0) return true;
  }
  return false;
}

// Shared across criteria 3 and 4.
int worst_abort = 0;
int worst_exit = 0;
std::uint64_t bound_violations = 0;
std::uint64_t afcfs_violations = 0;
std::uint64_t runs_checked = 0;

void absorb(const ExploreReport& r) {
  worst_abort = std::max(worst_abort, r.max_abort_steps);
  worst_exit = std::max(worst_exit, r.max_exit_steps);
  for (const auto& [k, n] : r.violation_counts) {
    if (k == "fast-abort" || k == "exit-bound") bound_violations += n;
    if (k == "afcfs") afcfs_violations += n;
  }
  ++runs_checked;
}

ScheduleParams exhaustive(std::size_t procs, std::uint32_t attempts) {
  ScheduleParams p;
  p.scheduler = Scheduler::kExhaustive;
  p.procs = procs;
  p.attempts_per_proc = attempts;
  p.nondet_aborts = true;
  p.stop_on_violation = false;
  return p;
}

void exhaustive_correctness() {
  bool pass = true;
  std::ostringstream os;
  const char* sep = "";
  for (auto [procs, attempts] : {std::pair<std::size_t, std::uint32_t>{2, 2}, {3, 1}}) {
    ExploreReport r = explore(exhaustive(procs, attempts));
    absorb(r);
    pass = pass && r.complete && r.clean();
    os << sep << "p" << procs << "a" << attempts << ": " << r.states_visited << " states, "
       << r.transitions << " transitions, " << (r.complete ? "complete" : "INCOMPLETE") << ", "
       << r.elapsed_seconds << "s, violations: " << counts(r.violation_counts);
    std::string cc = over_bound(r.max_amortized_cc, CostModel::kCC);
    std::string dsm = over_bound(r.max_amortized_dsm, CostModel::kDSM);
    if (!cc.empty()) os << "; CC" << cc;
    if (!dsm.empty()) os << "; DSM" << dsm;
    sep = " | ";
  }
  report("exhaustive correctness", pass, os.str());
}

void amortized_rmr() {
  bool totals_ok = true;
  std::uint64_t steps_over = 0;
  std::uint64_t steps = 0;
  std::map<std::string, std::uint64_t> all;
  std::array<std::int64_t, 12> worst_cc{};
  std::array<std::int64_t, 12> worst_dsm{};
  double worst_cc_ratio = 0;
  double worst_dsm_ratio = 0;
  for (double rate : {0.0, 0.2, 0.9}) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      ScheduleParams p;
      p.procs = 8;
      p.max_steps = 100000;
      p.abort_rate = rate;
      p.seed = seed;
      p.stop_on_violation = false;
      RunResult rr = run(p, {}, false);
      const ExploreReport& r = rr.report;
      absorb(r);
      steps += r.transitions;
      std::uint64_t a = r.attempts_total;
      totals_ok = totals_ok && r.rmr_dsm_total <= 8 * a && r.rmr_cc_total <= 10 * a;
      if (a > 0) {
        worst_cc_ratio = std::max(worst_cc_ratio, double(r.rmr_cc_total) / double(a));
        worst_dsm_ratio = std::max(worst_dsm_ratio, double(r.rmr_dsm_total) / double(a));
      }
      for (const auto& [k, n] : r.violation_counts) {
        all[k] += n;
        if (k.rfind("lemma3", 0) == 0 || k.rfind("lemma4", 0) == 0) steps_over += n;
      }
      for (int i = 0; i < 12; ++i) {
        worst_cc[i] = std::max(worst_cc[i], r.max_amortized_cc[i]);
        worst_dsm[i] = std::max(worst_dsm[i], r.max_amortized_dsm[i]);
      }
    }
  }
  std::ostringstream os;
  os << "60 runs, totals " << (totals_ok ? "within" : "EXCEED") << " 8x/10x attempts (worst "
     << worst_dsm_ratio << " DSM, " << worst_cc_ratio << " CC per attempt); per-step: " << steps_over
     << " of " << steps << " steps over bound;";
  std::string cc = over_bound(worst_cc, CostModel::kCC);
  std::string dsm = over_bound(worst_dsm, CostModel::kDSM);
  if (!cc.empty()) os << " CC" << cc;
  if (!dsm.empty()) os << " DSM" << dsm;
  os << " violations: " << counts(all);
  report("amortized RMR", totals_ok && steps_over == 0, os.str());
}

void abort_and_exit_bounds() {
  std::ostringstream os;
  os << runs_checked << " runs, longest abort " << worst_abort << " own steps (bound 6), longest exit "
     << worst_exit << " (bound 2), " << bound_violations << " violations";
  report("fast abort and exit", worst_abort <= 6 && worst_exit <= 2 && bound_violations == 0, os.str());
}

// p1 holds the lock; p2 queues, aborts, and comes back before anyone else
// touches its node.
bool reclaim_scenario(std::string& detail) {
  Config c = initial_config(make_process_ids(2));
  auto go = [&](std::uint32_t p, bool signal = false) {
    ProcessId id{p};
    c = transition(c, signal ? Action::abort_signal(id) : Action::step(id)).after;
  };
  auto position = [&](std::uint32_t p) {
    return std::get<QueueView>(derive_queue(c)).position(ProcessId{p});
  };
  go(1), go(1), go(1);
  go(2), go(2), go(2);
  const LocationId node = c.proc(ProcessId{2}).mynode;
  const std::size_t before = position(2);
  go(2, true), go(2), go(2);
  const bool left = c.proc(ProcessId{2}).pc == 1;
  const std::size_t parked = position(2);
  go(2);
  const bool reclaimed = c.proc(ProcessId{2}).pc == 3 && c.proc(ProcessId{2}).mynode == node;
  const std::size_t after = position(2);
  go(1);  // Line 7
  go(2);  // Line 3 finds the token
  const bool entered = c.proc(ProcessId{2}).in_cs;
  std::ostringstream os;
  os << "position " << before << " -> aborted (still " << parked << ") -> reclaimed at " << after
     << (reclaimed ? " with its own node" : " with a new node") << ", "
     << (entered ? "entered next" : "did not enter");
  detail = os.str();
  return before == 2 && left && reclaimed && after == 2 && entered;
}

void afcfs() {
  std::string detail;
  bool scenario = reclaim_scenario(detail);
  std::ostringstream os;
  os << afcfs_violations << " AFCFS violations over " << runs_checked << " runs; reclaim: " << detail;
  report("AFCFS", afcfs_violations == 0 && scenario, os.str());
}

void starvation() {
  ScheduleParams p;
  p.procs = 4;
  p.abort_rate = 0.5;
  p.fairness = Fairness::kWeak;
  p.attempts_per_proc = 5000;
  p.max_steps = 10'000'000;
  p.stop_on_violation = false;
  RunResult rr = run(p, {}, false);
  const ExploreReport& r = rr.report;
  bool starved = has_clause(r, "starvation");
  bool descent = has_clause(r, "lemma2") || has_clause(r, "lemma1");
  std::ostringstream os;
  os << r.attempts_total << " attempts, " << r.cs_entries << " CS entries, " << r.aborts << " aborts, "
     << r.attempts_total - r.cs_entries - r.aborts << " signalled attempts that took the token at Line 9, "
     << r.transitions << " transitions, " << (r.complete ? "all budgets spent" : "INCOMPLETE") << ", "
     << (starved ? "STARVATION" : "no starvation") << ", "
     << (descent ? "DISTANCE CHECK FAILED" : "distance descent held on every transition");
  report("starvation freedom", r.complete && !starved && !descent, os.str());
}

void mutations() {
  ScheduleParams base = exhaustive(2, 2);
  std::set<std::string> baseline;
  for (const auto& [k, n] : explore(base).violation_counts) baseline.insert(k);
  int detected = 0;
  std::ostringstream os;
  for (Mutation m : {Mutation::kLine10WritesNil, Mutation::kLine5Omitted, Mutation::kLine9WritesToken,
                     Mutation::kLine1NeverReclaims}) {
    ScheduleParams p = base;
    p.mutation = m;
    ExploreReport r = explore(p);
    std::vector<std::string> extra;
    for (const auto& [k, n] : r.violation_counts) {
      if (!baseline.count(k)) extra.push_back(k);
    }
    if (!extra.empty()) ++detected;
    os << mutation_name(m) << ": ";
    if (extra.empty()) {
      os << "not detected";
    } else {
      for (std::size_t i = 0; i < extra.size(); ++i) os << (i ? "," : "") << extra[i];
    }
    os << "; ";
  }
  os << detected << "/4 detected beyond the unmutated baseline";
  report("mutation sensitivity", detected >= 3, os.str());
}

void native_lock() {
  bool pass = true;
  std::ostringstream os;
  for (double prob : {0.0, 0.2, 0.8}) {
    native::StressParams p;
    p.threads = 8;
    p.iterations = 10000;
    p.abort_probability = prob;
    native::StressReport r = native::stress(p);
    bool ok = r.ok() && r.footprint.words() == 2 * p.threads + 2;
    pass = pass && ok;
    os << "abort " << prob << ": " << r.cs_entries << " entries, " << r.aborts_completed << " aborts, counter "
       << r.counter_value << (r.deadlock ? ", DEADLOCK" : "") << ", " << r.footprint.words() << " words, "
       << r.wall_seconds << "s" << (prob < 0.8 ? "; " : "");
  }
  report("native lock", pass, os.str());
}

}  // namespace
}  // namespace abortlab

int main() {
  using namespace abortlab;
  const auto start = std::chrono::steady_clock::now();
  exhaustive_correctness();
  amortized_rmr();
  abort_and_exit_bounds();
  afcfs();
  starvation();
  mutations();
  native_lock();
  int passed = 0;
  for (const auto& v : verdicts) passed += v.pass;
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%d/%zu criteria passed in %.1fs\n", passed, verdicts.size(), secs);
  return 0;
}
