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

#ifndef ABORTLAB_TESTS_HELPERS_HH_
#define ABORTLAB_TESTS_HELPERS_HH_

#include <initializer_list>
#include <vector>

#include "abortlab/explorer.hh"
#include "abortlab/model.hh"
#include "abortlab/semantics.hh"
#include "abortlab/trace.hh"

namespace abortlab::testing {

inline ProcessId P(std::uint32_t n) { return ProcessId{n}; }

inline Config fresh(std::size_t n) {
  auto ids = make_process_ids(n);
  return initial_config(ids);
}

inline Action S(std::uint32_t n) { return Action::step(P(n)); }
inline Action A(std::uint32_t n) { return Action::abort_signal(P(n)); }

/// Applies `actions` in order with cache effects, as the explorer does.
inline Config play(Config c, std::initializer_list<Action> actions,
                   Mutation mutation = Mutation::kNone) {
  for (const Action& a : actions) c = transition(c, a, mutation).after;
  return c;
}

/// The trace entries of `actions` from `c`, numbered from 0.
inline Trace record(Config c, std::initializer_list<Action> actions) {
  Trace out;
  std::uint64_t seq = 0;
  for (const Action& a : actions) {
    Transition t = transition(c, a);
    t.record.seq = seq++;
    c = t.after;
    out.push_back(to_trace_entry(t, std::get<QueueView>(derive_queue(c)).q));
  }
  return out;
}

inline QueueView view_of(const Config& c) { return std::get<QueueView>(derive_queue(c)); }

}  // namespace abortlab::testing

#endif  // ABORTLAB_TESTS_HELPERS_HH_
