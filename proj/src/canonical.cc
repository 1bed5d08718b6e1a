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

#include "abortlab/canonical.hh"

namespace abortlab {

namespace {

void put_u32(std::string& out, std::uint32_t v) {
  // Values in the explored systems are tiny; a varint keeps keys short.
  while (v >= 0x80) {
    out.push_back(static_cast<char>((v & 0x7f) | 0x80));
    v >>= 7;
  }
  out.push_back(static_cast<char>(v));
}

void put_value(std::string& out, const Value& v) {
  out.push_back(static_cast<char>(v.kind()));
  if (v.is_go_ref() || v.is_node_ref()) put_u32(out, v.payload());
}

}  // namespace

void append_canonical_key(const Config& c, std::string& out) {
  put_u32(out, static_cast<std::uint32_t>(c.words.size()));
  for (const Value& w : c.words) put_value(out, w);
  put_u32(out, static_cast<std::uint32_t>(c.procs.size()));
  for (const ProcState& s : c.procs) {
    put_u32(out, s.id.value);
    out.push_back(static_cast<char>(s.pc));
    put_u32(out, s.mynode);
    put_u32(out, s.pred);
    put_value(out, s.temp);
    out.push_back(static_cast<char>((s.abort_pending ? 1 : 0) | (s.in_cs ? 2 : 0)));
    put_u32(out, s.attempts_started);
    put_u32(out, static_cast<std::uint32_t>(s.cc_cache.size()));
    for (LocationId l : s.cc_cache) put_u32(out, l);
  }
}

}  // namespace abortlab
