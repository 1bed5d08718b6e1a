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

#ifndef ABORTLAB_MODEL_HH_
#define ABORTLAB_MODEL_HH_

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace abortlab {

/// Name of a participating process. Names are arbitrary; they need not be
/// dense or start at zero.
struct ProcessId {
  std::uint32_t value = 0;

  auto operator<=>(const ProcessId&) const = default;
};

std::ostream& operator<<(std::ostream& os, ProcessId p);

using LocationId = std::uint32_t;

enum class LocationKind : std::uint8_t { kNode, kGo, kTail };

/// Static description of one shared word. `partition` is the DSM home of the
/// word; SENTINEL and X have none and are remote to every process.
struct Location {
  LocationKind kind = LocationKind::kNode;
  std::optional<ProcessId> partition;

  bool operator==(const Location&) const = default;
};

/// Content of one shared word.
class Value {
 public:
  enum class Kind : std::uint8_t { kNil, kToken, kGoRef, kNodeRef, kFalse, kTrue };

  constexpr Value() = default;

  static constexpr Value nil() { return Value(Kind::kNil, 0); }
  static constexpr Value token() { return Value(Kind::kToken, 0); }
  static constexpr Value go_ref(ProcessId p) { return Value(Kind::kGoRef, p.value); }
  static constexpr Value node_ref(LocationId l) { return Value(Kind::kNodeRef, l); }
  static constexpr Value boolean(bool b) {
    return Value(b ? Kind::kTrue : Kind::kFalse, 0);
  }

  constexpr Kind kind() const { return kind_; }
  constexpr bool is_nil() const { return kind_ == Kind::kNil; }
  constexpr bool is_token() const { return kind_ == Kind::kToken; }
  constexpr bool is_go_ref() const { return kind_ == Kind::kGoRef; }
  constexpr bool is_node_ref() const { return kind_ == Kind::kNodeRef; }
  constexpr bool is_true() const { return kind_ == Kind::kTrue; }

  // Only meaningful for the matching kind.
  constexpr ProcessId process() const { return ProcessId{payload_}; }
  constexpr LocationId location() const { return payload_; }
  constexpr std::uint32_t payload() const { return payload_; }

  constexpr bool operator==(const Value&) const = default;

  std::string to_string() const;

 private:
  constexpr Value(Kind k, std::uint32_t payload) : kind_(k), payload_(payload) {}

  Kind kind_ = Kind::kNil;
  std::uint32_t payload_ = 0;
};

std::ostream& operator<<(std::ostream& os, const Value& v);

/// Per-process state. `pc` names the next numbered line to execute; pc 1 is
/// the Remainder section.
struct ProcState {
  ProcessId id;
  int pc = 1;
  LocationId mynode = 0;
  LocationId pred = 0;
  Value temp;
  bool abort_pending = false;
  // Entered the CS through the Try loop and has not yet executed Line 7.
  bool in_cs = false;
  // Fixed at join time.
  LocationId go = 0;
  std::uint32_t attempts_started = 0;
  // CC cache contents, kept sorted.
  std::vector<LocationId> cc_cache;

  bool caches(LocationId loc) const;

  bool operator==(const ProcState&) const = default;
};

/// Complete system state. A Config is a plain value: copies are independent.
struct Config {
  std::vector<Location> locations;
  std::vector<Value> words;
  LocationId sentinel = 0;
  LocationId tail = 1;  // the location of X
  std::vector<ProcState> procs;

  const Value& word(LocationId loc) const { return words.at(loc); }
  Value& word(LocationId loc) { return words.at(loc); }

  /// The node X points at.
  LocationId x() const { return words.at(tail).location(); }

  const ProcState* find(ProcessId p) const;
  ProcState* find(ProcessId p);
  const ProcState& proc(ProcessId p) const;
  ProcState& proc(ProcessId p);

  std::size_t node_count() const;

  bool operator==(const Config&) const = default;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// SENTINEL holds Token, X points at SENTINEL, and every process is in the
/// Remainder section with its own node (Nil) and go word (false, cached).
Config initial_config(std::span<const ProcessId> ids);

/// Adds `p` to the system with a fresh node and go word in p's partition.
void join_process(Config& config, ProcessId p);

std::vector<ProcessId> make_process_ids(std::size_t n);

/// The abstract queue: A = a0..ak node locations, Q = q1..qk processes.
/// q[i-1] owns a[i].
struct QueueView {
  std::vector<LocationId> a;
  std::vector<ProcessId> q;

  std::size_t k() const { return q.size(); }
  /// 1-based position in Q, or 0 when absent.
  std::size_t position(ProcessId p) const;

  bool operator==(const QueueView&) const = default;
};

struct Underivable {
  enum class Reason { kDuplicateA0, kNoOwner, kCycle, kTooLong };
  Reason reason;
  std::string detail;
};

const char* to_string(Underivable::Reason r);

std::variant<QueueView, Underivable> derive_queue(const Config& config);

/// Stable 64-bit digest of a configuration, for reproducer reports.
std::uint64_t config_hash(const Config& config);

}  // namespace abortlab

#endif  // ABORTLAB_MODEL_HH_
