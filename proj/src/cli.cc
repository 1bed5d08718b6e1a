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

#include "abortlab/cli.hh"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "abortlab/explorer.hh"
#include "abortlab/native_lock.hh"
#include "abortlab/trace_io.hh"
#include "json.hpp"

namespace abortlab {

namespace {

using nlohmann::json;

class CliUsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Checks parse_checks(const std::vector<std::string>& names) {
  Checks c = Checks::none();
  for (const auto& n : names) {
    if (n == "all") {
      c = Checks::all();
    } else if (n == "none") {
      c = Checks::none();
    } else if (n == "invariant") {
      c.invariant = true;
    } else if (n == "progress") {
      c.progress = true;
    } else if (n == "amortized") {
      c.amortized = true;
    } else if (n == "trace") {
      c.trace = true;
    } else {
      throw CliUsageError("unknown check \"" + n + "\"");
    }
  }
  return c;
}

Mutation parse_mutation(const std::string& name) {
  for (Mutation m : {Mutation::kNone, Mutation::kLine10WritesNil, Mutation::kLine5Omitted,
                     Mutation::kLine9WritesToken, Mutation::kLine1NeverReclaims}) {
    if (name == mutation_name(m)) return m;
  }
  throw CliUsageError("unknown mutation \"" + name + "\"");
}

std::string hex(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

json violation_json(const Violation& v) {
  json j;
  j["clause"] = v.name();
  j["step"] = v.step_seq;
  j["detail"] = v.detail;
  j["config_hash"] = hex(v.config_hash);
  return j;
}

json checks_json(const Checks& c) {
  json j = json::array();
  if (c.invariant) j.push_back("invariant");
  if (c.progress) j.push_back("progress");
  if (c.amortized) j.push_back("amortized");
  if (c.trace) j.push_back("trace");
  return j;
}

json line_maxima(const std::array<std::int64_t, 12>& max, const std::array<std::uint64_t, 12>& counts) {
  json j = json::object();
  for (int line = 1; line <= 11; ++line) {
    if (counts[line] != 0) j[std::to_string(line)] = max[line];
  }
  return j;
}

// Totals, bounds and violations shared by simulate and explore.
// `run_totals`: the totals come from a single run, so the per-attempt RMR
// bound applies to them.
json explore_report_json(const ExploreReport& r, json params, std::uint64_t steps,
                         bool run_totals) {
  json j;
  j["params"] = std::move(params);
  j["totals"] = {{"steps", steps},
                 {"attempts", r.attempts_total},
                 {"cs_entries", r.cs_entries},
                 {"aborts", r.aborts},
                 {"abort_signals", r.abort_signals},
                 {"rmr_cc", r.rmr_cc_total},
                 {"rmr_dsm", r.rmr_dsm_total}};
  j["bounds"] = {{"rmr_cc_per_attempt", rmr_per_attempt_bound(CostModel::kCC)},
                 {"rmr_dsm_per_attempt", rmr_per_attempt_bound(CostModel::kDSM)}};
  j["max_amortized"] = {{"cc", line_maxima(r.max_amortized_cc, r.line_counts)},
                        {"dsm", line_maxima(r.max_amortized_dsm, r.line_counts)}};
  j["max_abort_steps"] = r.max_abort_steps;
  j["max_exit_steps"] = r.max_exit_steps;
  j["max_queue_length"] = r.max_queue_length;
  j["front_at_pc11"] = r.front_at_pc11;
  j["elapsed_seconds"] = r.elapsed_seconds;

  json violations = json::array();
  for (const auto& v : r.violations) violations.push_back(violation_json(v));
  auto total_bound = [&](CostModel model, std::uint64_t total) {
    auto limit = static_cast<std::uint64_t>(rmr_per_attempt_bound(model)) * r.attempts_total;
    if (total > limit) {
      std::ostringstream os;
      os << to_string(model) << " RMR total " << total << " exceeds " << limit;
      violations.push_back({{"clause", std::string("rmr-total-") + to_string(model)},
                            {"step", steps},
                            {"detail", os.str()},
                            {"config_hash", hex(0)}});
    }
  };
  if (run_totals) {
    total_bound(CostModel::kCC, r.rmr_cc_total);
    total_bound(CostModel::kDSM, r.rmr_dsm_total);
  }
  j["violation_counts"] = r.violation_counts;
  j["violations"] = std::move(violations);
  j["status"] = j["violations"].empty() ? "pass" : "fail";
  return j;
}

void write_report(const std::string& path, const json& report) {
  std::string text = report.dump(2) + "\n";
  if (path.empty()) return;
  if (path == "-") {
    std::cout << text;
  } else {
    write_file_atomic(path, text);
  }
}

int status_code(const json& report) {
  return report["status"] == "pass" ? kExitPass : kExitViolation;
}

void print_summary(const json& report) {
  constexpr std::size_t kShown = 10;
  const auto& violations = report["violations"];
  std::cerr << "status: " << report["status"].get<std::string>();
  for (std::size_t i = 0; i < violations.size() && i < kShown; ++i) {
    const auto& v = violations[i];
    std::cerr << "\n  " << v["clause"].get<std::string>();
    if (v.contains("step")) std::cerr << " at step " << v["step"];
    std::cerr << ": " << v["detail"].get<std::string>();
  }
  if (violations.size() > kShown) std::cerr << "\n  ... " << violations.size() - kShown << " more";
  std::cerr << "\n";
}

struct SimulateFlags {
  std::size_t procs = 2;
  std::uint64_t steps = 100000;
  std::uint64_t seed = 1;
  double abort_rate = 0;
  std::string scheduler = "random";
  std::string fairness = "weak";
  std::uint32_t attempts = 0;
  std::size_t late_joiners = 0;
  std::vector<std::string> checks{"all"};
  std::string mutation = "none";
  std::string trace;
  std::string report;
  bool keep_going = false;
};

int cmd_simulate(const SimulateFlags& f) {
  ScheduleParams p;
  p.procs = f.procs;
  p.scheduler = f.scheduler == "random" ? Scheduler::kRandom : Scheduler::kRoundRobin;
  p.seed = f.seed;
  p.max_steps = f.steps;
  p.abort_rate = f.abort_rate;
  p.attempts_per_proc = f.attempts;
  p.fairness = f.fairness == "weak" ? Fairness::kWeak : Fairness::kNone;
  p.checks = parse_checks(f.checks);
  p.late_joiners = f.late_joiners;
  p.mutation = parse_mutation(f.mutation);
  p.stop_on_violation = !f.keep_going;

  std::ofstream file;
  std::ostream* trace_out = nullptr;
  if (f.trace == "-") {
    trace_out = &std::cout;
  } else if (!f.trace.empty()) {
    file.open(f.trace, std::ios::trunc);
    if (!file) throw CliUsageError("cannot open trace file " + f.trace);
    trace_out = &file;
  }
  TraceSink sink;
  if (trace_out != nullptr) {
    sink = [&](const TraceEntry& e) { *trace_out << format_trace_entry(e) << '\n'; };
  }
  RunResult result = run(p, sink, false);
  if (trace_out != nullptr) trace_out->flush();

  json params = {{"procs", f.procs},
                 {"steps", f.steps},
                 {"seed", f.seed},
                 {"abort_rate", f.abort_rate},
                 {"scheduler", to_string(p.scheduler)},
                 {"fairness", f.fairness},
                 {"attempts", f.attempts},
                 {"late_joiners", f.late_joiners},
                 {"checks", checks_json(p.checks)},
                 {"mutation", mutation_name(p.mutation)}};
  json report = explore_report_json(result.report, std::move(params), result.report.transitions, true);
  report["command"] = "simulate";
  report["complete"] = result.report.complete;
  write_report(f.report, report);
  print_summary(report);
  return status_code(report);
}

struct ExploreFlags {
  std::size_t procs = 2;
  std::uint32_t attempts = 1;
  std::string aborts = "none";
  std::vector<std::string> checks{"all"};
  std::string mutation = "none";
  std::uint64_t max_states = 50'000'000;
  std::string trace;
  std::string report;
  bool first = false;
};

int cmd_explore(const ExploreFlags& f) {
  ScheduleParams p;
  p.procs = f.procs;
  p.scheduler = Scheduler::kExhaustive;
  p.attempts_per_proc = f.attempts;
  p.nondet_aborts = f.aborts == "nondet";
  p.checks = parse_checks(f.checks);
  p.mutation = parse_mutation(f.mutation);
  p.max_states = f.max_states;
  p.stop_on_violation = f.first;
  ExploreReport r = explore(p);

  json params = {{"procs", f.procs},
                 {"attempts", f.attempts},
                 {"aborts", f.aborts},
                 {"checks", checks_json(p.checks)},
                 {"mutation", mutation_name(p.mutation)},
                 {"max_states", f.max_states}};
  json report = explore_report_json(r, std::move(params), r.transitions, false);
  report["command"] = "explore";
  report["states_visited"] = r.states_visited;
  report["transitions"] = r.transitions;
  report["self_loops"] = r.self_loops;
  report["complete"] = r.complete;
  json path = json::array();
  for (const Action& a : r.counterexample) {
    std::ostringstream os;
    os << a;
    path.push_back(os.str());
  }
  report["counterexample"] = std::move(path);
  if (!r.complete && report["status"] == "pass" && !f.first) report["status"] = "incomplete";

  if (!f.trace.empty() && !r.counterexample.empty()) {
    // Re-execute the counterexample to emit it in the trace format.
    Config c = initial_config(initial_ids(p));
    std::ostringstream out;
    std::uint64_t seq = 0;
    for (const Action& a : r.counterexample) {
      Transition t = transition(c, a, p.mutation);
      t.record.seq = seq++;
      auto derived = derive_queue(t.after);
      auto* view = std::get_if<QueueView>(&derived);
      out << format_trace_entry(to_trace_entry(t, view ? view->q : std::vector<ProcessId>{})) << '\n';
      c = std::move(t.after);
    }
    if (f.trace == "-") {
      std::cout << out.str();
    } else {
      write_file_atomic(f.trace, out.str());
    }
  }
  write_report(f.report, report);
  print_summary(report);
  std::cerr << "states: " << r.states_visited << ", transitions: " << r.transitions << "\n";
  return status_code(report);
}

struct ReplayFlags {
  std::string trace;
  std::vector<std::string> checks{"all"};
  std::string fairness = "none";
  std::string report;
};

int cmd_replay(const ReplayFlags& f) {
  Checks checks = parse_checks(f.checks);
  Trace trace;
  {
    std::ifstream in(f.trace);
    if (!in) throw CliUsageError("cannot open trace file " + f.trace);
    trace = read_trace(in);
  }
  TraceOptions options;
  options.weakly_fair = f.fairness == "weak";
  options.check_amortized = checks.amortized;
  TraceReport r = analyze_trace(trace, options);

  json report;
  report["command"] = "replay";
  report["params"] = {{"trace", f.trace}, {"checks", checks_json(checks)}, {"fairness", f.fairness}};
  report["totals"] = {{"steps", r.steps},
                      {"attempts", r.attempts},
                      {"cs_entries", r.cs_entries},
                      {"aborts", r.aborts},
                      {"abort_signals", r.abort_signals},
                      {"rmr_cc", r.rmr_cc},
                      {"rmr_dsm", r.rmr_dsm}};
  report["bounds"] = {{"rmr_cc_per_attempt", rmr_per_attempt_bound(CostModel::kCC)},
                      {"rmr_dsm_per_attempt", rmr_per_attempt_bound(CostModel::kDSM)}};
  report["max_abort_steps"] = r.max_abort_steps;
  report["max_exit_steps"] = r.max_exit_steps;
  json violations = json::array();
  json counts = json::object();
  for (const auto& v : r.violations) {
    bool amortized = v.clause == Clause::kLemma3 || v.clause == Clause::kLemma4;
    if (!(amortized ? checks.amortized : checks.trace)) continue;
    violations.push_back(violation_json(v));
    counts[v.name()] = counts.value(v.name(), 0) + 1;
  }
  report["violation_counts"] = std::move(counts);
  report["violations"] = std::move(violations);
  report["status"] = report["violations"].empty() ? "pass" : "fail";
  write_report(f.report, report);
  print_summary(report);
  return status_code(report);
}

struct StressFlags {
  std::size_t threads = 8;
  std::uint64_t iters = 10000;
  double abort_prob = 0;
  std::uint64_t seed = 1;
  std::uint64_t timeout_ms = 60000;
  std::string report;
};

int cmd_stress(const StressFlags& f) {
  native::StressParams p;
  p.threads = f.threads;
  p.iterations = f.iters;
  p.abort_probability = f.abort_prob;
  p.seed = f.seed;
  p.timeout = std::chrono::milliseconds(f.timeout_ms);
  native::StressReport r = native::stress(p);

  json report;
  report["command"] = "stress";
  report["params"] = {{"threads", f.threads},
                      {"iters", f.iters},
                      {"abort_prob", f.abort_prob},
                      {"seed", f.seed},
                      {"timeout_ms", f.timeout_ms}};
  report["threads"] = r.threads;
  report["iterations"] = r.iterations;
  report["cs_entries"] = r.cs_entries;
  report["aborts_completed"] = r.aborts_completed;
  report["counter_value"] = r.counter_value;
  report["overlaps"] = r.overlaps;
  report["cs_entries_per_thread"] = r.cs_entries_per_thread;
  report["max_release_ops"] = r.max_release_ops;
  report["max_abort_ops"] = r.max_abort_ops;
  report["deadlock"] = r.deadlock;
  report["footprint"] = {{"nodes", r.footprint.nodes},
                         {"go_words", r.footprint.go_words},
                         {"sentinel", r.footprint.sentinel},
                         {"tail", r.footprint.tail},
                         {"words", r.footprint.words()}};
  report["wall_time"] = r.wall_seconds;
  json violations = json::array();
  auto fail = [&](const std::string& what, const std::string& detail) {
    violations.push_back({{"clause", what}, {"detail", detail}});
  };
  if (r.deadlock) fail("deadlock", "watchdog expired after " + std::to_string(f.timeout_ms) + " ms");
  if (r.overlaps != 0) fail("mutex", std::to_string(r.overlaps) + " overlapping CS entries");
  if (r.counter_value != r.cs_entries) {
    fail("mutex", "counter " + std::to_string(r.counter_value) + " != cs_entries " +
                      std::to_string(r.cs_entries));
  }
  if (r.footprint.nodes != r.threads || r.footprint.go_words != r.threads) {
    fail("space", "footprint is not one node and one go word per thread");
  }
  if (r.max_release_ops > 2) fail("exit-bound", "release took " + std::to_string(r.max_release_ops) + " operations");
  if (r.max_abort_ops > 3) fail("fast-abort", "abort took " + std::to_string(r.max_abort_ops) + " operations");
  report["violations"] = std::move(violations);
  report["status"] = report["violations"].empty() ? "pass" : "fail";
  write_report(f.report, report);
  std::cerr << "cs_entries " << r.cs_entries << ", counter " << r.counter_value << ", aborts "
            << r.aborts_completed << ", " << r.wall_seconds << " s\n";
  print_summary(report);
  return status_code(report);
}

const std::vector<std::string> kCheckNames{"invariant", "progress", "amortized", "trace", "all", "none"};

void add_checks(CLI::App* cmd, std::vector<std::string>& checks) {
  cmd->add_option("--check", checks, "comma list of invariant,progress,amortized,trace,all,none")
      ->delimiter(',')
      ->check(CLI::IsMember(kCheckNames));
}

void add_mutation(CLI::App* cmd, std::string& mutation) {
  cmd->add_option("--mutation", mutation, "inject a single-line fault")
      ->check(CLI::IsMember({"none", "line10-writes-nil", "line5-omitted", "line9-writes-token",
                             "line1-never-reclaims"}));
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"abortlab: abortable queue lock laboratory"};
  app.require_subcommand(1);

  SimulateFlags sim;
  auto* simulate = app.add_subcommand("simulate", "random or round-robin run with online checks");
  simulate->add_option("--procs", sim.procs, "number of processes")->check(CLI::PositiveNumber);
  simulate->add_option("--steps", sim.steps, "maximum number of steps");
  simulate->add_option("--seed", sim.seed, "scheduler seed");
  simulate->add_option("--abort-rate", sim.abort_rate, "abort signal probability")->check(CLI::Range(0.0, 1.0));
  simulate->add_option("--scheduler", sim.scheduler)->check(CLI::IsMember({"random", "round-robin"}));
  simulate->add_option("--fairness", sim.fairness)->check(CLI::IsMember({"weak", "none"}));
  simulate->add_option("--attempts", sim.attempts, "attempts per process, 0 for unlimited");
  simulate->add_option("--late-joiners", sim.late_joiners, "processes that join during the run");
  add_checks(simulate, sim.checks);
  add_mutation(simulate, sim.mutation);
  simulate->add_option("--trace", sim.trace, "JSON-lines trace output, - for stdout");
  simulate->add_option("--report", sim.report, "JSON report output, - for stdout");
  simulate->add_flag("--keep-going", sim.keep_going, "do not stop at the first violation");

  ExploreFlags exp;
  auto* explore_cmd = app.add_subcommand("explore", "exhaustive search of a bounded instance");
  explore_cmd->add_option("--procs", exp.procs)->check(CLI::Range(1, 64));
  explore_cmd->add_option("--attempts", exp.attempts)->check(CLI::PositiveNumber);
  explore_cmd->add_option("--aborts", exp.aborts)->check(CLI::IsMember({"none", "nondet"}));
  add_checks(explore_cmd, exp.checks);
  add_mutation(explore_cmd, exp.mutation);
  explore_cmd->add_option("--max-states", exp.max_states)->check(CLI::PositiveNumber);
  explore_cmd->add_option("--trace", exp.trace, "write the first counterexample as a trace");
  explore_cmd->add_option("--report", exp.report);
  explore_cmd->add_flag("--first", exp.first, "stop at the first violation");

  ReplayFlags rep;
  auto* replay = app.add_subcommand("replay", "check a stored trace offline");
  replay->add_option("--trace", rep.trace)->required();
  add_checks(replay, rep.checks);
  replay->add_option("--fairness", rep.fairness, "weak enables the starvation check")
      ->check(CLI::IsMember({"weak", "none"}));
  replay->add_option("--report", rep.report);

  StressFlags st;
  auto* stress_cmd = app.add_subcommand("stress", "native lock under real threads");
  stress_cmd->add_option("--threads", st.threads)->check(CLI::PositiveNumber);
  stress_cmd->add_option("--iters", st.iters);
  stress_cmd->add_option("--abort-prob", st.abort_prob)->check(CLI::Range(0.0, 1.0));
  stress_cmd->add_option("--seed", st.seed);
  stress_cmd->add_option("--timeout-ms", st.timeout_ms)->check(CLI::PositiveNumber);
  stress_cmd->add_option("--report", st.report);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*simulate) return cmd_simulate(sim);
    if (*explore_cmd) return cmd_explore(exp);
    if (*replay) return cmd_replay(rep);
    if (*stress_cmd) return cmd_stress(st);
  } catch (const CliUsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const TraceError& e) {
    std::cerr << "malformed trace: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace abortlab
