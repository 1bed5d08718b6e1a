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

#ifndef ABORTLAB_NATIVE_LOCK_HH_
#define ABORTLAB_NATIVE_LOCK_HH_

#include <atomic>
#include <chrono>
#include <cstdint>
#include <memory>
#include <mutex>
#include <thread>
#include <vector>

#include "abortlab/semantics.hh"

namespace abortlab::native {

/// Nil and Token can never equal the address of an aligned word.
inline constexpr std::uintptr_t kNil = 0;
inline constexpr std::uintptr_t kToken = 1;

struct alignas(64) Word {
  std::atomic<std::uintptr_t> value{kNil};
};

class AbortableLock;

/// Per-thread state. Confined to the registering thread.
class Handle {
 public:
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;

  /// May be raised from any thread.
  std::atomic<bool>& abort_requested() { return abort_requested_; }

  bool holding() const { return holding_; }
  const Word* mynode() const { return mynode_; }
  const Word* pred() const { return pred_; }
  const Word* go() const { return go_; }

  /// Shared accesses performed so far, counting each Line 4 read.
  std::uint64_t shared_ops() const { return shared_ops_; }
  std::uint64_t spin_reads() const { return spin_reads_; }
  /// Shared operations of the latest release, and of the latest abort from
  /// the poll that observed the flag.
  std::uint64_t last_release_ops() const { return last_release_ops_; }
  std::uint64_t last_abort_ops() const { return last_abort_ops_; }

 private:
  friend class AbortableLock;
  Handle(Word* node, Word* go) : mynode_(node), pred_(node), go_(go) {}

  Word* mynode_;
  Word* pred_;
  Word* go_;
  std::uintptr_t temp_ = kNil;
  bool holding_ = false;
  std::uint64_t shared_ops_ = 0;
  std::uint64_t spin_reads_ = 0;
  std::uint64_t last_release_ops_ = 0;
  std::uint64_t last_abort_ops_ = 0;
  std::atomic<bool> abort_requested_{false};
};

enum class Outcome : std::uint8_t { kAcquired, kAborted };

struct Footprint {
  std::size_t nodes = 0;
  std::size_t go_words = 0;
  std::size_t sentinel = 1;
  std::size_t tail = 1;

  std::size_t words() const { return nodes + go_words + sentinel + tail; }
};

/// Abortable queue lock built on atomic exchange. Every shared access is
/// sequentially consistent.
class AbortableLock {
 public:
  AbortableLock();
  AbortableLock(const AbortableLock&) = delete;
  AbortableLock& operator=(const AbortableLock&) = delete;

  /// Allocates a node (Nil) and a go word (false) for the calling thread.
  /// Throws UsageError if this thread already registered.
  Handle& register_thread();

  /// Try section. Returns kAborted once `h.abort_requested()` is observed
  /// after a waiting-room line; the abort may pass the lock on if it arrived
  /// just as the lock was handed over.
  Outcome acquire(Handle& h);

  /// Exit section: at most two shared operations.
  void release(Handle& h);

  Footprint footprint() const;

 private:
  std::uintptr_t exchange(Handle& h, Word& w, std::uintptr_t v);
  void store(Handle& h, Word& w, std::uintptr_t v);
  std::uintptr_t load(Handle& h, const Word& w);
  Outcome abort(Handle& h);
  void exit(Handle& h);

  static std::uintptr_t addr(const Word* w) { return reinterpret_cast<std::uintptr_t>(w); }
  static Word* word(std::uintptr_t v) { return reinterpret_cast<Word*>(v); }

  Word sentinel_;
  Word tail_;
  mutable std::mutex registry_mutex_;
  std::vector<std::unique_ptr<Word>> nodes_;
  std::vector<std::unique_ptr<Word>> go_;
  std::vector<std::thread::id> owners_;
  std::vector<std::unique_ptr<Handle>> handles_;
};

struct StressParams {
  std::size_t threads = 8;
  std::uint64_t iterations = 10000;
  double abort_probability = 0.0;
  // Overrides abort_probability for the first entries' threads.
  std::vector<double> per_thread_abort;
  std::uint64_t seed = 1;
  std::chrono::milliseconds timeout{60000};
  // Yield inside the CS.
  bool yield_in_cs = true;
};

struct StressReport {
  std::size_t threads = 0;
  std::uint64_t iterations = 0;
  std::uint64_t cs_entries = 0;
  std::uint64_t aborts_completed = 0;
  std::uint64_t counter_value = 0;
  // Times a thread found another inside the CS.
  std::uint64_t overlaps = 0;
  std::vector<std::uint64_t> cs_entries_per_thread;
  std::uint64_t max_release_ops = 0;
  std::uint64_t max_abort_ops = 0;  // from the poll that saw the flag
  bool deadlock = false;
  Footprint footprint;
  double wall_seconds = 0;

  bool ok() const {
    return !deadlock && overlaps == 0 && counter_value == cs_entries &&
           footprint.nodes == threads && footprint.go_words == threads;
  }
};

/// Each thread makes `iterations` attempts. An environment thread raises the
/// abort flag of a waiting thread whose current attempt was chosen to abort.
StressReport stress(const StressParams& params);

}  // namespace abortlab::native

#endif  // ABORTLAB_NATIVE_LOCK_HH_
