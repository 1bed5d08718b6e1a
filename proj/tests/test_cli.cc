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

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "abortlab/cli.hh"
#include "json.hpp"

namespace abortlab {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

int cli(std::initializer_list<std::string> args) {
  std::vector<std::string> store{"abortlab"};
  store.insert(store.end(), args);
  std::vector<char*> argv;
  for (auto& s : store) argv.push_back(s.data());
  argv.push_back(nullptr);
  ::testing::internal::CaptureStdout();
  ::testing::internal::CaptureStderr();
  int rc = run_cli(static_cast<int>(store.size()), argv.data());
  ::testing::internal::GetCapturedStdout();
  ::testing::internal::GetCapturedStderr();
  return rc;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("abortlab-cli-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const char* name) const { return (dir_ / name).string(); }

  static json load(const std::string& p) {
    std::ifstream in(p);
    return json::parse(in);
  }

  fs::path dir_;
};

TEST_F(Cli, SimulateSingleAttempt) {
  std::string report = path("r.json");
  EXPECT_EQ(cli({"simulate", "--procs", "1", "--attempts", "1", "--check", "all", "--report", report}),
            kExitPass);
  json r = load(report);
  EXPECT_EQ(r["totals"]["cs_entries"], 1);
  EXPECT_EQ(r["status"], "pass");
  EXPECT_EQ(r["command"], "simulate");
  EXPECT_FALSE(fs::exists(report + ".tmp"));
}

TEST_F(Cli, SimulateManyWithoutAmortized) {
  EXPECT_EQ(cli({"simulate", "--procs", "8", "--steps", "100000", "--seed", "7", "--abort-rate", "0.2",
                 "--check", "invariant,progress,trace"}),
            kExitPass);
}

TEST_F(Cli, SimulateAllChecksReportsWakeupBound) {
  std::string report = path("r.json");
  EXPECT_EQ(cli({"simulate", "--procs", "8", "--steps", "100000", "--seed", "7", "--abort-rate", "0.2",
                 "--check", "all", "--keep-going", "--report", report}),
            kExitViolation);
  json r = load(report);
  for (auto& [name, n] : r["violation_counts"].items()) {
    EXPECT_TRUE(name == "lemma4(8)" || name == "lemma4(11)") << name;
  }
  EXPECT_LE(r["totals"]["rmr_cc"].get<std::uint64_t>(), 10 * r["totals"]["attempts"].get<std::uint64_t>());
  EXPECT_LE(r["totals"]["rmr_dsm"].get<std::uint64_t>(), 8 * r["totals"]["attempts"].get<std::uint64_t>());
}

TEST_F(Cli, ParseErrors) {
  EXPECT_EQ(cli({"simulate", "--procs", "0x"}), kExitUsage);
  EXPECT_EQ(cli({"simulate", "--abort-rate", "2"}), kExitUsage);
  EXPECT_EQ(cli({"simulate", "--check", "bogus"}), kExitUsage);
  EXPECT_EQ(cli({"explore", "--aborts", "sometimes"}), kExitUsage);
  EXPECT_EQ(cli({"frobnicate"}), kExitUsage);
  EXPECT_EQ(cli({}), kExitUsage);
}

TEST_F(Cli, ExploreSingleProcess) {
  std::string report = path("e.json");
  EXPECT_EQ(cli({"explore", "--procs", "1", "--attempts", "1", "--aborts", "none", "--report", report}),
            kExitPass);
  json r = load(report);
  EXPECT_EQ(r["states_visited"], 5);
  EXPECT_EQ(r["complete"], true);
}

TEST_F(Cli, ExploreTwoProcesses) {
  std::string report = path("e.json");
  EXPECT_EQ(cli({"explore", "--procs", "2", "--attempts", "2", "--aborts", "nondet", "--report", report}),
            kExitViolation);
  json r = load(report);
  EXPECT_EQ(r["complete"], true);
  for (auto& [name, n] : r["violation_counts"].items()) {
    EXPECT_TRUE(name == "lemma4(8)" || name == "lemma4(11)") << name;
  }
  EXPECT_EQ(cli({"explore", "--procs", "2", "--attempts", "2", "--aborts", "nondet", "--check",
                 "invariant,progress,trace"}),
            kExitPass);
}

TEST_F(Cli, ExploreIncomplete) {
  std::string report = path("e.json");
  EXPECT_EQ(cli({"explore", "--procs", "2", "--attempts", "2", "--aborts", "nondet", "--check",
                 "invariant", "--max-states", "50", "--report", report}),
            kExitViolation);
  EXPECT_EQ(load(report)["status"], "incomplete");
}

TEST_F(Cli, ExploreMutationCounterexample) {
  std::string trace = path("cx.jsonl");
  EXPECT_EQ(cli({"explore", "--procs", "2", "--attempts", "2", "--aborts", "nondet", "--check",
                 "invariant", "--mutation", "line10-writes-nil", "--first", "--trace", trace}),
            kExitViolation);
  EXPECT_GT(fs::file_size(trace), 0u);
}

TEST_F(Cli, ReplayRoundTrip) {
  std::string trace = path("t.jsonl");
  std::string report = path("rp.json");
  ASSERT_EQ(cli({"simulate", "--procs", "3", "--steps", "3000", "--abort-rate", "0.3", "--check",
                 "invariant,progress,trace", "--trace", trace}),
            kExitPass);
  EXPECT_EQ(cli({"replay", "--trace", trace, "--check", "trace", "--report", report}), kExitPass);
  EXPECT_EQ(load(report)["status"], "pass");
}

TEST_F(Cli, ReplayForgedDuplicateEnter) {
  std::string trace = path("t.jsonl");
  ASSERT_EQ(cli({"simulate", "--procs", "1", "--attempts", "1", "--check", "all", "--trace", trace}),
            kExitPass);
  std::ifstream in(trace);
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  in.close();
  ASSERT_EQ(lines.size(), 4u);
  json third = json::parse(lines[2]);
  json forged = third;
  forged["seq"] = 3;
  forged["pre_pc"] = 7;
  forged["events"] = json::array({"cs_enter"});
  std::ofstream out(trace);
  out << lines[0] << '\n' << lines[1] << '\n' << lines[2] << '\n' << forged.dump() << '\n';
  out.close();
  std::string report = path("rp.json");
  EXPECT_EQ(cli({"replay", "--trace", trace, "--report", report}), kExitViolation);
  EXPECT_EQ(load(report)["violation_counts"]["mutex"], 1);
}

TEST_F(Cli, ReplayMalformed) {
  std::string trace = path("bad.jsonl");
  std::ofstream(trace) << "{\"seq\": 0, \"actor\": 1}\n";
  EXPECT_EQ(cli({"replay", "--trace", trace}), kExitUsage);
  EXPECT_EQ(cli({"replay", "--trace", path("missing.jsonl")}), kExitUsage);
}

TEST_F(Cli, Stress) {
  std::string report = path("s.json");
  EXPECT_EQ(cli({"stress", "--threads", "4", "--iters", "2000", "--abort-prob", "0.2", "--report", report}),
            kExitPass);
  json r = load(report);
  EXPECT_EQ(r["counter_value"], r["cs_entries"]);
}

}  // namespace
}  // namespace abortlab
