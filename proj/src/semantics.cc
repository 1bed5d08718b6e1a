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

#include "abortlab/semantics.hh"

#include <algorithm>
#include <sstream>

namespace abortlab {

std::ostream& operator<<(std::ostream& os, const Action& a) {
  switch (a.kind) {
    case Action::Kind::kStep:
      return os << "Step(" << a.pid << ")";
    case Action::Kind::kAbortSignal:
      return os << "AbortSignal(" << a.pid << ")";
    case Action::Kind::kJoin:
      return os << "Join(" << a.pid << ")";
  }
  return os;
}

const char* event_name(Event e) {
  switch (e) {
    case kAttemptStart:
      return "attempt_start";
    case kDoorwayComplete:
      return "doorway_complete";
    case kCsEnter:
      return "cs_enter";
    case kCsExit:
      return "cs_exit";
    case kAttemptEndSuccess:
      return "attempt_end_success";
    case kAttemptEndAbort:
      return "attempt_end_abort";
    case kAbortSignalEvent:
      return "abort_signal";
  }
  return "?";
}

std::optional<Event> parse_event(std::string_view name) {
  for (Event e : kAllEvents) {
    if (name == event_name(e)) return e;
  }
  return std::nullopt;
}

const char* step_kind_name(StepKind k) {
  switch (k) {
    case StepKind::kExecLine:
      return "exec-line";
    case StepKind::kBusyWaitRead:
      return "busy-wait-read";
    case StepKind::kAbortSignal:
      return "abort-signal";
    case StepKind::kJoin:
      return "join";
  }
  return "?";
}

std::optional<StepKind> parse_step_kind(std::string_view name) {
  for (StepKind k : {StepKind::kExecLine, StepKind::kBusyWaitRead,
                     StepKind::kAbortSignal, StepKind::kJoin}) {
    if (name == step_kind_name(k)) return k;
  }
  return std::nullopt;
}

const char* mutation_name(Mutation m) {
  switch (m) {
    case Mutation::kNone:
      return "none";
    case Mutation::kLine10WritesNil:
      return "line10-writes-nil";
    case Mutation::kLine5Omitted:
      return "line5-omitted";
    case Mutation::kLine9WritesToken:
      return "line9-writes-token";
    case Mutation::kLine1NeverReclaims:
      return "line1-never-reclaims";
  }
  return "?";
}

bool is_enabled(const Config& c, const Action& a, bool allow_aborts) {
  const ProcState* s = c.find(a.pid);
  switch (a.kind) {
    case Action::Kind::kStep:
      return s != nullptr;
    case Action::Kind::kAbortSignal:
      return allow_aborts && s != nullptr && s->pc != 1 && !s->abort_pending;
    case Action::Kind::kJoin:
      return s == nullptr;
  }
  return false;
}

std::vector<Action> enabled_actions(const Config& c, bool allow_aborts,
                                    std::span<const ProcessId> joinable) {
  std::vector<Action> out;
  for (const ProcState& s : c.procs) {
    out.push_back(Action::step(s.id));
    if (is_enabled(c, Action::abort_signal(s.id), allow_aborts)) {
      out.push_back(Action::abort_signal(s.id));
    }
  }
  for (ProcessId q : joinable) {
    if (c.find(q) == nullptr) out.push_back(Action::join(q));
  }
  return out;
}

namespace {

class Interpreter {
 public:
  Interpreter(const Config& pre, ProcessId p, Mutation mutation)
      : next_(pre), self_(next_.proc(p)), mutation_(mutation) {}

  StepResult run() {
    rec_.action = Action::step(self_.id);
    rec_.pre_pc = self_.pc;
    int line = self_.pc;
    if (self_.abort_pending && (line == 4 || line == 5 || line == 6)) line = 9;
    rec_.line = line;
    switch (line) {
      case 1: line1(); break;
      case 2: line2(); break;
      case 3: case 6: try_pred(); break;
      case 4: line4(); break;
      case 5: line5(); break;
      case 7: line7(); break;
      case 8: case 11: wake(); break;
      case 9: line9(); break;
      case 10: line10(); break;
      default: {
        std::ostringstream os;
        os << self_.id << " has invalid pc " << self_.pc;
        throw SoundnessError(os.str());
      }
    }
    if (self_.pc == 1) self_.abort_pending = false;
    rec_.post_pc = self_.pc;
    return {std::move(next_), rec_};
  }

 private:
  Value swap(LocationId loc, Value v) {
    rec_.access = Access{loc, AccessKind::kSwap};
    Value old = next_.word(loc);
    next_.word(loc) = v;
    return old;
  }

  LocationId node_target(const Value& v, const char* what) const {
    if (!v.is_node_ref() || next_.locations.at(v.location()).kind != LocationKind::kNode) {
      std::ostringstream os;
      os << self_.id << " at line " << rec_.line << ": " << what << " is "
         << v << ", not a node";
      throw SoundnessError(os.str());
    }
    return v.location();
  }

  LocationId go_target(const Value& v) const {
    const ProcState* owner = v.is_go_ref() ? next_.find(v.process()) : nullptr;
    if (owner == nullptr) {
      std::ostringstream os;
      os << self_.id << " at line " << rec_.line << ": temp is " << v
         << ", not a go word";
      throw SoundnessError(os.str());
    }
    return owner->go;
  }

  void line1() {
    rec_.events |= kAttemptStart;
    ++self_.attempts_started;
    Value old = swap(self_.mynode, Value::nil());
    if (old != Value::node_ref(self_.pred) || mutation_ == Mutation::kLine1NeverReclaims) {
      self_.pc = 2;
    } else {
      rec_.events |= kDoorwayComplete;
      self_.pc = 3;
    }
  }

  void line2() {
    Value old = swap(next_.tail, Value::node_ref(self_.mynode));
    self_.pred = node_target(old, "X");
    rec_.events |= kDoorwayComplete;
    self_.pc = 3;
  }

  // Lines 3 and 6 share the swap and the loop-head resolution.
  void try_pred() {
    self_.temp = swap(node_target(Value::node_ref(self_.pred), "pred"),
                      Value::go_ref(self_.id));
    if (self_.temp.is_token()) {
      self_.pc = 7;
      self_.in_cs = true;
      self_.abort_pending = false;
      rec_.events |= kCsEnter;
    } else if (!self_.temp.is_nil() && self_.temp != Value::go_ref(self_.id)) {
      self_.pred = node_target(self_.temp, "predecessor's word");
      self_.pc = 6;
    } else {
      self_.pc = 4;
    }
  }

  void line4() {
    rec_.access = Access{self_.go, AccessKind::kRead};
    if (next_.word(self_.go).is_true()) {
      self_.pc = 5;
    } else {
      rec_.kind = StepKind::kBusyWaitRead;
    }
  }

  void line5() {
    if (mutation_ == Mutation::kLine5Omitted) {
      rec_.access = Access{self_.go, AccessKind::kRead};
    } else {
      rec_.access = Access{self_.go, AccessKind::kWrite};
      next_.word(self_.go) = Value::boolean(false);
    }
    self_.pc = 6;
  }

  void line7() {
    self_.temp = swap(self_.mynode, Value::token());
    self_.mynode = self_.pred;
    if (self_.in_cs) rec_.events |= kCsExit;
    self_.in_cs = false;
    if (!self_.temp.is_nil()) {
      self_.pc = 8;
    } else {
      self_.pc = 1;
      rec_.events |= kAttemptEndSuccess;
    }
  }

  void wake() {
    LocationId go = go_target(self_.temp);
    rec_.access = Access{go, AccessKind::kWrite};
    next_.word(go) = Value::boolean(true);
    rec_.events |= rec_.line == 8 ? kAttemptEndSuccess : kAttemptEndAbort;
    self_.pc = 1;
  }

  void line9() {
    Value put = mutation_ == Mutation::kLine9WritesToken ? Value::token() : Value::nil();
    self_.temp = swap(node_target(Value::node_ref(self_.pred), "pred"), put);
    if (self_.temp.is_token()) {
      // Sidesteps the CS; in_cs stays false.
      self_.pc = 7;
      return;
    }
    if (!self_.temp.is_nil() && self_.temp != Value::go_ref(self_.id)) {
      self_.pred = node_target(self_.temp, "predecessor's word");
    }
    self_.pc = 10;
  }

  void line10() {
    Value put = mutation_ == Mutation::kLine10WritesNil ? Value::nil()
                                                         : Value::node_ref(self_.pred);
    self_.temp = swap(self_.mynode, put);
    if (!self_.temp.is_nil()) {
      self_.pc = 11;
    } else {
      self_.pc = 1;
      rec_.events |= kAttemptEndAbort;
    }
  }

  Config next_;
  ProcState& self_;
  Mutation mutation_;
  StepRecord rec_;
};

}  // namespace

StepResult step(const Config& c, const Action& a, Mutation mutation) {
  if (!is_enabled(c, a, true)) {
    std::ostringstream os;
    os << a << " is not enabled";
    throw UsageError(os.str());
  }
  switch (a.kind) {
    case Action::Kind::kStep:
      return Interpreter(c, a.pid, mutation).run();
    case Action::Kind::kAbortSignal: {
      StepResult r{c, {}};
      ProcState& s = r.config.proc(a.pid);
      s.abort_pending = true;
      r.record.action = a;
      r.record.kind = StepKind::kAbortSignal;
      r.record.pre_pc = r.record.post_pc = s.pc;
      r.record.events = kAbortSignalEvent;
      return r;
    }
    case Action::Kind::kJoin: {
      StepResult r{c, {}};
      join_process(r.config, a.pid);
      r.record.action = a;
      r.record.kind = StepKind::kJoin;
      r.record.pre_pc = 0;
      r.record.post_pc = 1;
      return r;
    }
  }
  throw UsageError("unknown action kind");
}

}  // namespace abortlab
