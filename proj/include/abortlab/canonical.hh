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

#ifndef ABORTLAB_CANONICAL_HH_
#define ABORTLAB_CANONICAL_HH_

#include <cstdint>
#include <string>
#include <string_view>

#include "abortlab/model.hh"

namespace abortlab {

/// Appends an exact byte encoding of every field that distinguishes two
/// configurations: words, X, per-process locals and flags, caches, and
/// attempt counters. Two configurations of the same system (same joins, in
/// the same order) share a key iff they are equal.
void append_canonical_key(const Config& config, std::string& out);

inline std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace abortlab

#endif  // ABORTLAB_CANONICAL_HH_
