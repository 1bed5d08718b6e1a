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

#ifndef ABORTLAB_SEMANTICS_HH_
#define ABORTLAB_SEMANTICS_HH_

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "abortlab/model.hh"

namespace abortlab {

struct Action {
  enum class Kind : std::uint8_t { kStep, kAbortSignal, kJoin };
  Kind kind = Kind::kStep;
  ProcessId pid;

  static Action step(ProcessId p) { return {Kind::kStep, p}; }
  static Action abort_signal(ProcessId p) { return {Kind::kAbortSignal, p}; }
  static Action join(ProcessId p) { return {Kind::kJoin, p}; }

  bool operator==(const Action&) const = default;
};

std::ostream& operator<<(std::ostream& os, const Action& a);

/// Lifecycle events, as bits of StepRecord::events.
enum Event : std::uint8_t {
  kAttemptStart = 1 << 0,
  kDoorwayComplete = 1 << 1,
  kCsEnter = 1 << 2,
  kCsExit = 1 << 3,
  kAttemptEndSuccess = 1 << 4,
  kAttemptEndAbort = 1 << 5,
  kAbortSignalEvent = 1 << 6,
};

inline constexpr Event kAllEvents[] = {
    kAttemptStart,      kDoorwayComplete,  kCsEnter,          kCsExit,
    kAttemptEndSuccess, kAttemptEndAbort, kAbortSignalEvent,
};

const char* event_name(Event e);
std::optional<Event> parse_event(std::string_view name);

enum class StepKind : std::uint8_t { kExecLine, kBusyWaitRead, kAbortSignal, kJoin };

const char* step_kind_name(StepKind k);
std::optional<StepKind> parse_step_kind(std::string_view name);

enum class AccessKind : std::uint8_t { kRead, kWrite, kSwap };

struct Access {
  LocationId loc = 0;
  AccessKind kind = AccessKind::kRead;

  bool operator==(const Access&) const = default;
};

struct StepRecord {
  std::uint64_t seq = 0;
  Action action;
  StepKind kind = StepKind::kExecLine;
  int line = 0;  // 1..11 for process steps, 0 otherwise
  int pre_pc = 0;
  int post_pc = 0;
  // Every numbered line performs exactly one shared access.
  std::optional<Access> access;
  std::uint8_t events = 0;

  bool has(Event e) const { return (events & e) != 0; }
};

struct StepResult {
  Config config;
  StepRecord record;
};

/// Deliberate single-line corruptions of the algorithm, used to show that the
/// checkers are not vacuous.
enum class Mutation : std::uint8_t {
  kNone,
  kLine10WritesNil,    // Line 10 swaps Nil instead of pred into *mynode
  kLine5Omitted,       // Line 5 reads go instead of resetting it
  kLine9WritesToken,   // Line 9 swaps Token instead of Nil into *pred
  kLine1NeverReclaims, // Line 1 always falls through to Line 2
};

const char* mutation_name(Mutation m);

class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Raised when the interpreter would dereference Nil or Token, or otherwise
/// leave the algorithm's value domain. Unreachable for the unmutated
/// algorithm; reaching it is a bug.
class SoundnessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

bool is_enabled(const Config& config, const Action& action, bool allow_aborts);

/// Step(p) for every joined process, AbortSignal(p) when allowed and p is
/// outside the Remainder with no signal pending, Join(q) for each id in
/// `joinable` not yet in the system.
std::vector<Action> enabled_actions(const Config& config, bool allow_aborts,
                                    std::span<const ProcessId> joinable = {});

/// Executes one action. Cache state is left untouched; see cost.hh.
StepResult step(const Config& config, const Action& action,
                Mutation mutation = Mutation::kNone);

}  // namespace abortlab

#endif  // ABORTLAB_SEMANTICS_HH_
