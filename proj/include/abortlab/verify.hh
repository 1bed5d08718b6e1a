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

#ifndef ABORTLAB_VERIFY_HH_
#define ABORTLAB_VERIFY_HH_

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "abortlab/cost.hh"
#include "abortlab/model.hh"
#include "abortlab/semantics.hh"

namespace abortlab {

enum class Clause : std::uint8_t {
  kI1, kI2, kI3, kI4, kI5, kI6, kI7, kI8, kI9, kI10, kI11, kI12,
  kQueueUnderivable,
  kMutex,
  kLemma1,
  kLemma2,
  kLemma3,
  kLemma4,
  kAfcfs,
  kFastAbort,
  kExitBound,
  kStarvation,
  kSoundness,
};

/// "I7", "lemma4(8)", "fast-abort", ...
std::string clause_name(Clause c, int line = 0);

struct Violation {
  Clause clause = Clause::kSoundness;
  int line = 0;  // for lemma3/lemma4
  std::uint64_t step_seq = 0;
  std::string detail;
  std::uint64_t config_hash = 0;

  std::string name() const { return clause_name(clause, line); }
  bool operator==(const Violation&) const = default;
};

std::ostream& operator<<(std::ostream& os, const Violation& v);

/// Evaluates I1..I12 on `config` and returns the derived queue, or the first
/// failing clause in I1..I12 order.
std::variant<QueueView, Violation> check_invariant(const Config& config);

/// Mutual exclusion: at most one process in the CS and at most one at pc 7.
std::optional<Violation> check_mutex(const Config& config);

/// The digit f(r) for r in Q. Undefined (nullopt) for pc 2, 8 and 11.
std::optional<int> f_value(const Config& config, ProcessId r);

/// A process's distance from the CS, as decimal digits, most significant
/// first. Ordered numerically; the leading digit is never 0.
struct Distance {
  std::vector<std::uint8_t> digits;

  std::strong_ordering operator<=>(const Distance& o) const;
  bool operator==(const Distance&) const = default;

  std::string to_string() const;
};

struct DistanceInfo {
  Distance delta;
  std::vector<ProcessId> promoters;  // sorted
  std::size_t position = 0;          // i
  std::size_t front = 0;             // m
  // q_m sits at pc 11, where f has no table entry. The digit 4 is used: the
  // descent argument needs f(1) = 3 < f(11) < f(10) = 5.
  bool front_at_pc11 = false;
};

class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Requires pc_p in {3..7} and p in Q.
DistanceInfo distance_info(const Config& config, const QueueView& view, ProcessId p);
Distance delta(const Config& config, ProcessId p);
std::vector<ProcessId> promoters(const Config& config, ProcessId p);

/// For every process in the Try section or the CS: delta >= 1, delta == 1
/// iff in the CS, and a non-empty promoter set whenever delta > 1.
/// `front_at_pc11` is incremented for each process whose q_m is at pc 11.
std::optional<Violation> check_distances(const Config& config, const QueueView& view,
                                         std::uint64_t* front_at_pc11 = nullptr);

/// Descent of delta across one transition. `after` = step(before, action).
std::optional<Violation> check_progress_step(const Config& before, const QueueView& view_before,
                                             const Action& action, const Config& after,
                                             const QueueView& view_after);

/// rmr + delta-phi <= bound(line) for both models.
std::vector<Violation> check_amortized_step(const StepRecord& record, const StepCost& cc,
                                            const StepCost& dsm);

}  // namespace abortlab

#endif  // ABORTLAB_VERIFY_HH_
