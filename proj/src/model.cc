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

#include "abortlab/model.hh"

#include <algorithm>
#include <set>
#include <sstream>

#include "abortlab/canonical.hh"

namespace abortlab {

std::ostream& operator<<(std::ostream& os, ProcessId p) {
  return os << 'p' << p.value;
}

std::string Value::to_string() const {
  switch (kind_) {
    case Kind::kNil:
      return "nil";
    case Kind::kToken:
      return "token";
    case Kind::kGoRef:
      return "&go_p" + std::to_string(payload_);
    case Kind::kNodeRef:
      return "&node" + std::to_string(payload_);
    case Kind::kFalse:
      return "false";
    case Kind::kTrue:
      return "true";
  }
  return "?";
}

std::ostream& operator<<(std::ostream& os, const Value& v) {
  return os << v.to_string();
}

bool ProcState::caches(LocationId loc) const {
  return std::binary_search(cc_cache.begin(), cc_cache.end(), loc);
}

const ProcState* Config::find(ProcessId p) const {
  for (const auto& s : procs) {
    if (s.id == p) return &s;
  }
  return nullptr;
}

ProcState* Config::find(ProcessId p) {
  for (auto& s : procs) {
    if (s.id == p) return &s;
  }
  return nullptr;
}

const ProcState& Config::proc(ProcessId p) const {
  const ProcState* s = find(p);
  if (s == nullptr) {
    std::ostringstream os;
    os << "unknown process " << p;
    throw ConfigError(os.str());
  }
  return *s;
}

ProcState& Config::proc(ProcessId p) {
  return const_cast<ProcState&>(std::as_const(*this).proc(p));
}

std::size_t Config::node_count() const {
  return static_cast<std::size_t>(
      std::count_if(locations.begin(), locations.end(), [](const Location& l) {
        return l.kind == LocationKind::kNode;
      }));
}

Config initial_config(std::span<const ProcessId> ids) {
  std::set<ProcessId> seen;
  for (ProcessId p : ids) {
    if (!seen.insert(p).second) {
      std::ostringstream os;
      os << "duplicate process id " << p;
      throw ConfigError(os.str());
    }
  }
  Config c;
  c.locations.push_back({LocationKind::kNode, std::nullopt});
  c.words.push_back(Value::token());
  c.locations.push_back({LocationKind::kTail, std::nullopt});
  c.words.push_back(Value::node_ref(0));
  c.sentinel = 0;
  c.tail = 1;
  for (ProcessId p : ids) join_process(c, p);
  return c;
}

void join_process(Config& c, ProcessId p) {
  if (c.find(p) != nullptr) {
    std::ostringstream os;
    os << "process " << p << " already joined";
    throw ConfigError(os.str());
  }
  ProcState s;
  s.id = p;
  s.mynode = static_cast<LocationId>(c.locations.size());
  c.locations.push_back({LocationKind::kNode, p});
  c.words.push_back(Value::nil());
  s.go = static_cast<LocationId>(c.locations.size());
  c.locations.push_back({LocationKind::kGo, p});
  c.words.push_back(Value::boolean(false));
  s.pred = s.mynode;
  s.temp = Value::nil();
  s.cc_cache.push_back(s.go);
  c.procs.push_back(std::move(s));
}

std::vector<ProcessId> make_process_ids(std::size_t n) {
  std::vector<ProcessId> ids;
  ids.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    ids.push_back(ProcessId{static_cast<std::uint32_t>(i + 1)});
  }
  return ids;
}

std::size_t QueueView::position(ProcessId p) const {
  auto it = std::find(q.begin(), q.end(), p);
  return it == q.end() ? 0 : static_cast<std::size_t>(it - q.begin()) + 1;
}

const char* to_string(Underivable::Reason r) {
  switch (r) {
    case Underivable::Reason::kDuplicateA0:
      return "duplicate-a0";
    case Underivable::Reason::kNoOwner:
      return "no-owner";
    case Underivable::Reason::kCycle:
      return "cycle";
    case Underivable::Reason::kTooLong:
      return "too-long";
  }
  return "?";
}

std::variant<QueueView, Underivable> derive_queue(const Config& c) {
  using Reason = Underivable::Reason;
  std::set<LocationId> mynodes;
  for (const auto& s : c.procs) {
    if (!mynodes.insert(s.mynode).second) {
      std::ostringstream os;
      os << "no unique owner: two processes share node " << s.mynode;
      return Underivable{Reason::kNoOwner, os.str()};
    }
  }
  std::vector<LocationId> unowned;
  for (LocationId l = 0; l < c.locations.size(); ++l) {
    if (c.locations[l].kind == LocationKind::kNode && !mynodes.contains(l)) {
      unowned.push_back(l);
    }
  }
  if (unowned.size() != 1) {
    std::ostringstream os;
    os << unowned.size() << " nodes are no process's mynode";
    return Underivable{Reason::kDuplicateA0, os.str()};
  }
  const LocationId a0 = unowned.front();

  QueueView view;
  std::set<LocationId> visited;
  LocationId cur = c.x();
  while (cur != a0) {
    if (view.q.size() > c.procs.size()) {
      return Underivable{Reason::kTooLong, "chain longer than process count"};
    }
    if (!visited.insert(cur).second) {
      std::ostringstream os;
      os << "node " << cur << " repeats on the chain from X";
      return Underivable{Reason::kCycle, os.str()};
    }
    const ProcState* owner = nullptr;
    for (const auto& s : c.procs) {
      if (s.mynode == cur) owner = &s;
    }
    if (owner == nullptr) {
      std::ostringstream os;
      os << "node " << cur << " on the chain from X has no owner";
      return Underivable{Reason::kNoOwner, os.str()};
    }
    view.a.push_back(cur);
    view.q.push_back(owner->id);
    cur = owner->pred;
  }
  view.a.push_back(a0);
  std::reverse(view.a.begin(), view.a.end());
  std::reverse(view.q.begin(), view.q.end());
  return view;
}

std::uint64_t config_hash(const Config& c) {
  std::string key;
  append_canonical_key(c, key);
  return fnv1a(key);
}

}  // namespace abortlab
