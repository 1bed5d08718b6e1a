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

#include "abortlab/native_lock.hh"

#include <algorithm>
#include <condition_variable>
#include <random>

namespace abortlab::native {

namespace {

void backoff(unsigned& spins) {
  if (++spins < 16) return;
  std::this_thread::yield();
}

}  // namespace

AbortableLock::AbortableLock() {
  sentinel_.value.store(kToken);
  tail_.value.store(addr(&sentinel_));
}

Handle& AbortableLock::register_thread() {
  std::lock_guard<std::mutex> guard(registry_mutex_);
  const auto self = std::this_thread::get_id();
  if (std::find(owners_.begin(), owners_.end(), self) != owners_.end()) {
    throw UsageError("thread already registered with this lock");
  }
  nodes_.push_back(std::make_unique<Word>());
  go_.push_back(std::make_unique<Word>());
  owners_.push_back(self);
  handles_.push_back(std::unique_ptr<Handle>(new Handle(nodes_.back().get(), go_.back().get())));
  return *handles_.back();
}

std::uintptr_t AbortableLock::exchange(Handle& h, Word& w, std::uintptr_t v) {
  ++h.shared_ops_;
  return w.value.exchange(v);
}

void AbortableLock::store(Handle& h, Word& w, std::uintptr_t v) {
  ++h.shared_ops_;
  w.value.store(v);
}

std::uintptr_t AbortableLock::load(Handle& h, const Word& w) {
  ++h.shared_ops_;
  return w.value.load();
}

Outcome AbortableLock::acquire(Handle& h) {
  if (h.holding_) throw UsageError("acquire while holding the lock");
  const std::uintptr_t me = addr(h.go_);
  auto aborting = [&] { return h.abort_requested_.load(); };

  // Line 1; Line 2 unless the node was reclaimed.
  if (exchange(h, *h.mynode_, kNil) != addr(h.pred_)) {
    h.pred_ = word(exchange(h, tail_, addr(h.mynode_)));
  }
  // Line 3
  h.temp_ = exchange(h, *h.pred_, me);
  for (;;) {
    if (h.temp_ == kToken) {
      h.holding_ = true;
      return Outcome::kAcquired;
    }
    if (h.temp_ != kNil && h.temp_ != me) {
      h.pred_ = word(h.temp_);
    } else {
      // Lines 4 and 5
      unsigned spins = 0;
      for (;;) {
        if (aborting()) return abort(h);
        if (load(h, *h.go_) != 0) break;
        ++h.spin_reads_;
        backoff(spins);
      }
      if (aborting()) return abort(h);
      store(h, *h.go_, 0);
    }
    if (aborting()) return abort(h);
    // Line 6
    h.temp_ = exchange(h, *h.pred_, me);
  }
}

Outcome AbortableLock::abort(Handle& h) {
  const std::uint64_t start = h.shared_ops_;
  // Line 9
  h.temp_ = exchange(h, *h.pred_, kNil);
  if (h.temp_ == kToken) {
    // The lock arrived anyway; pass it on.
    exit(h);
  } else {
    if (h.temp_ != kNil && h.temp_ != addr(h.go_)) h.pred_ = word(h.temp_);
    // Line 10
    h.temp_ = exchange(h, *h.mynode_, addr(h.pred_));
    // Line 11
    if (h.temp_ != kNil) store(h, *word(h.temp_), 1);
  }
  h.last_abort_ops_ = h.shared_ops_ - start;
  return Outcome::kAborted;
}

void AbortableLock::exit(Handle& h) {
  const std::uint64_t start = h.shared_ops_;
  // Line 7
  h.temp_ = exchange(h, *h.mynode_, kToken);
  h.mynode_ = h.pred_;
  // Line 8
  if (h.temp_ != kNil) store(h, *word(h.temp_), 1);
  h.holding_ = false;
  h.last_release_ops_ = h.shared_ops_ - start;
}

void AbortableLock::release(Handle& h) {
  if (!h.holding_) throw UsageError("release without holding the lock");
  exit(h);
}

Footprint AbortableLock::footprint() const {
  std::lock_guard<std::mutex> guard(registry_mutex_);
  Footprint f;
  f.nodes = nodes_.size();
  f.go_words = go_.size();
  return f;
}

StressReport stress(const StressParams& params) {
  if (params.threads == 0) throw UsageError("stress needs at least one thread");
  for (double p : params.per_thread_abort) {
    if (p < 0 || p > 1) throw UsageError("abort probability must lie in [0, 1]");
  }
  if (params.abort_probability < 0 || params.abort_probability > 1) {
    throw UsageError("abort probability must lie in [0, 1]");
  }
  const auto start = std::chrono::steady_clock::now();
  const std::size_t n = params.threads;

  struct alignas(64) Slot {
    Handle* handle = nullptr;
    std::atomic<bool> waiting{false};
    std::atomic<bool> wants_abort{false};
    std::uint64_t cs_entries = 0;
    std::uint64_t aborts = 0;
    std::uint64_t max_release_ops = 0;
    std::uint64_t max_abort_ops = 0;
  };
  AbortableLock lock;
  std::vector<Slot> slots(n);
  std::uint64_t counter = 0;
  std::atomic<bool> occupied{false};
  std::atomic<std::uint64_t> overlaps{0};
  std::atomic<bool> stop{false};
  std::atomic<bool> force_abort{false};
  std::atomic<bool> env_stop{false};
  std::atomic<std::size_t> registered{0};

  std::mutex done_mutex;
  std::condition_variable done_cv;
  std::size_t done = 0;

  auto worker = [&](std::size_t i) {
    Slot& slot = slots[i];
    slot.handle = &lock.register_thread();
    registered.fetch_add(1);
    Handle& h = *slot.handle;
    const double p = i < params.per_thread_abort.size() ? params.per_thread_abort[i]
                                                        : params.abort_probability;
    std::seed_seq seq{params.seed, static_cast<std::uint64_t>(i)};
    std::mt19937_64 rng(seq);
    std::bernoulli_distribution draw(p);
    while (registered.load() < n) std::this_thread::yield();
    for (std::uint64_t it = 0; it < params.iterations && !stop.load(); ++it) {
      slot.wants_abort.store(draw(rng));
      slot.waiting.store(true);
      Outcome outcome = lock.acquire(h);
      slot.waiting.store(false);
      slot.wants_abort.store(false);
      if (outcome == Outcome::kAcquired) {
        if (occupied.exchange(true)) overlaps.fetch_add(1);
        std::uint64_t seen = counter;
        if (params.yield_in_cs) std::this_thread::yield();
        counter = seen + 1;
        ++slot.cs_entries;
        occupied.store(false);
        lock.release(h);
        slot.max_release_ops = std::max(slot.max_release_ops, h.last_release_ops());
      } else {
        ++slot.aborts;
        slot.max_abort_ops = std::max(slot.max_abort_ops, h.last_abort_ops());
      }
      h.abort_requested().store(false);
    }
    std::lock_guard<std::mutex> guard(done_mutex);
    ++done;
    done_cv.notify_all();
  };

  std::thread environment([&] {
    while (registered.load() < n && !env_stop.load()) std::this_thread::yield();
    while (!env_stop.load()) {
      bool forced = force_abort.load();
      for (Slot& slot : slots) {
        if (slot.waiting.load() && (forced || slot.wants_abort.load())) {
          slot.handle->abort_requested().store(true);
        }
      }
      std::this_thread::yield();
    }
  });

  std::vector<std::thread> workers;
  workers.reserve(n);
  for (std::size_t i = 0; i < n; ++i) workers.emplace_back(worker, i);

  StressReport report;
  {
    std::unique_lock<std::mutex> guard(done_mutex);
    if (!done_cv.wait_for(guard, params.timeout, [&] { return done == n; })) {
      report.deadlock = true;
      force_abort.store(true);
      stop.store(true);
    }
  }
  for (auto& t : workers) t.join();
  env_stop.store(true);
  environment.join();

  report.threads = n;
  report.iterations = params.iterations;
  report.counter_value = counter;
  report.overlaps = overlaps.load();
  for (const Slot& slot : slots) {
    report.cs_entries += slot.cs_entries;
    report.aborts_completed += slot.aborts;
    report.cs_entries_per_thread.push_back(slot.cs_entries);
    report.max_release_ops = std::max(report.max_release_ops, slot.max_release_ops);
    report.max_abort_ops = std::max(report.max_abort_ops, slot.max_abort_ops);
  }
  report.footprint = lock.footprint();
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace abortlab::native
