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

#include "abortlab/verify.hh"

#include <algorithm>
#include <set>
#include <sstream>

namespace abortlab {

std::string clause_name(Clause c, int line) {
  switch (c) {
    case Clause::kI1: case Clause::kI2: case Clause::kI3: case Clause::kI4:
    case Clause::kI5: case Clause::kI6: case Clause::kI7: case Clause::kI8:
    case Clause::kI9: case Clause::kI10: case Clause::kI11: case Clause::kI12:
      return "I" + std::to_string(static_cast<int>(c) + 1);
    case Clause::kQueueUnderivable:
      return "queue-underivable";
    case Clause::kMutex:
      return "mutex";
    case Clause::kLemma1:
      return "lemma1";
    case Clause::kLemma2:
      return "lemma2";
    case Clause::kLemma3:
      return "lemma3(" + std::to_string(line) + ")";
    case Clause::kLemma4:
      return "lemma4(" + std::to_string(line) + ")";
    case Clause::kAfcfs:
      return "afcfs";
    case Clause::kFastAbort:
      return "fast-abort";
    case Clause::kExitBound:
      return "exit-bound";
    case Clause::kStarvation:
      return "starvation";
    case Clause::kSoundness:
      return "soundness";
  }
  return "?";
}

std::ostream& operator<<(std::ostream& os, const Violation& v) {
  return os << v.name() << " at step " << v.step_seq << ": " << v.detail;
}

namespace {

bool pc_in(int pc, std::initializer_list<int> set) {
  return std::find(set.begin(), set.end(), pc) != set.end();
}

class InvariantChecker {
 public:
  InvariantChecker(const Config& c, const QueueView& v) : c_(c), v_(v) {}

  std::optional<Violation> run() {
    const std::size_t k = v_.k();
    const auto& a = v_.a;
    const auto& q = v_.q;

    if (c_.x() != a[k]) return fail(Clause::kI1, "X = ", c_.x(), " but a_k = ", a[k]);
    for (std::size_t i = 1; i <= k; ++i) {
      if (pr(q[i - 1]).mynode != a[i]) {
        return fail(Clause::kI2, "mynode(", q[i - 1], ") != a_", i);
      }
    }
    for (std::size_t i = 1; i <= k; ++i) {
      if (pr(q[i - 1]).pred != a[i - 1]) {
        return fail(Clause::kI3, "pred(", q[i - 1], ") != a_", (i - 1));
      }
    }
    {
      std::set<LocationId> nodes;
      for (LocationId l = 0; l < c_.locations.size(); ++l) {
        if (c_.locations[l].kind == LocationKind::kNode) nodes.insert(l);
      }
      std::set<LocationId> named{a[0]};
      for (const auto& s : c_.procs) named.insert(s.mynode);
      if (nodes != named) return fail(Clause::kI4, "node set differs from {a0} + mynodes");
    }
    for (const auto& s : c_.procs) {
      if (c_.locations.at(s.pred).kind != LocationKind::kNode) {
        return fail(Clause::kI5, s.id, ".pred is not a node");
      }
    }
    for (const auto& s : c_.procs) {
      const Value& mine = c_.word(s.mynode);
      if (pc_in(s.pc, {2, 8}) && v_.position(s.id) != 0) {
        return fail(Clause::kI6, s.id, " at pc ", s.pc, " is in Q");
      }
      if (s.pc == 2 && !mine.is_nil()) {
        return fail(Clause::kI6, s.id, " at pc 2 has *mynode = ", mine);
      }
      if (s.pc == 8 && !mine.is_nil() && mine != Value::go_ref(s.id)) {
        return fail(Clause::kI6, s.id, " at pc 8 has *mynode = ", mine);
      }
    }
    for (std::size_t i = 1; i <= k; ++i) {
      const ProcState& s = pr(q[i - 1]);
      const Value& mine = c_.word(s.mynode);
      if (pc_in(s.pc, {3, 4, 5, 6, 7, 9, 10})) {
        bool ok = mine.is_nil() || (i < k && mine == Value::go_ref(q[i]));
        if (!ok) {
          return fail(Clause::kI7, "q_", i, " = ", s.id, " at pc ", s.pc, " has *mynode = ", mine);
        }
      } else if (pc_in(s.pc, {1, 11})) {
        if (mine != Value::node_ref(s.pred)) {
          return fail(Clause::kI7, "q_", i, " = ", s.id, " at pc ", s.pc, " has *mynode = ", mine, " != pred");
        }
      }
    }
    for (const auto& s : c_.procs) {
      if (v_.position(s.id) != 0) continue;
      if (!pc_in(s.pc, {1, 2, 8, 11}) || c_.word(s.mynode) == Value::node_ref(s.pred)) {
        return fail(Clause::kI8, s.id, " outside Q at pc ", s.pc, " with *mynode = ", c_.word(s.mynode));
      }
    }
    {
      const Value& w0 = c_.word(a[0]);
      if (k == 0 || pr(q[0]).pc != 7) {
        if (!w0.is_token()) return fail(Clause::kI9, "*a0 = ", w0, ", expected token");
      } else if (!w0.is_nil() && w0 != Value::go_ref(q[0])) {
        return fail(Clause::kI9, "*a0 = ", w0, " while q1 is at pc 7");
      }
    }
    for (const auto& s : c_.procs) {
      if (s.pc == 7 && (k == 0 || s.id != q[0])) {
        return fail(Clause::kI10, s.id, " at pc 7 is not q1");
      }
    }
    if (auto v = check_i11()) return v;
    for (const auto& s : c_.procs) {
      if (s.pc == 5 && !c_.word(s.go).is_true()) {
        return fail(Clause::kI12, s.id, " at pc 5 with go = false");
      }
    }
    return std::nullopt;
  }

 private:
  std::optional<Violation> check_i11() {
    const std::size_t k = v_.k();
    const auto& a = v_.a;
    const auto& q = v_.q;
    auto blocked = [&](const ProcState& s) { return s.pc == 4 && !c_.word(s.go).is_true(); };
    if (k >= 1 && blocked(pr(q[0]))) {
      bool found = std::any_of(c_.procs.begin(), c_.procs.end(), [&](const ProcState& s) {
        return s.pc == 8 && s.temp == Value::go_ref(q[0]);
      });
      if (!found) return fail(Clause::kI11, "q1 = ", q[0], " blocked with no waker");
    }
    for (std::size_t i = 2; i <= k; ++i) {
      const ProcState& s = pr(q[i - 1]);
      if (!blocked(s)) continue;
      const ProcState& prev = pr(q[i - 2]);
      const Value& w = c_.word(a[i - 1]);
      bool ok = w == Value::go_ref(s.id) ||
                (w == Value::node_ref(prev.pred) && prev.pc == 11 &&
                 prev.temp == Value::go_ref(s.id));
      if (!ok) {
        return fail(Clause::kI11, "q_", i, " = ", s.id, " blocked; *a_", (i - 1), " = ", w);
      }
    }
    for (const auto& s : c_.procs) {
      if (pc_in(s.pc, {8, 11}) && !(s.temp.is_go_ref() && c_.find(s.temp.process()))) {
        return fail(Clause::kI11, s.id, " at pc ", s.pc, " has temp = ", s.temp);
      }
    }
    return std::nullopt;
  }

  const ProcState& pr(ProcessId p) const { return c_.proc(p); }

  template <typename... Args>
  std::optional<Violation> fail(Clause clause, const Args&... args) const {
    std::ostringstream os;
    (os << ... << args);
    return Violation{clause, 0, 0, os.str(), config_hash(c_)};
  }

  const Config& c_;
  const QueueView& v_;
};

}  // namespace

std::variant<QueueView, Violation> check_invariant(const Config& c) {
  auto derived = derive_queue(c);
  if (auto* u = std::get_if<Underivable>(&derived)) {
    return Violation{Clause::kQueueUnderivable, 0, 0,
                     std::string(to_string(u->reason)) + ": " + u->detail, config_hash(c)};
  }
  const QueueView& view = std::get<QueueView>(derived);
  if (auto v = InvariantChecker(c, view).run()) return *v;
  return view;
}

std::optional<Violation> check_mutex(const Config& c) {
  int in_cs = 0;
  int at7 = 0;
  for (const auto& s : c.procs) {
    in_cs += s.in_cs ? 1 : 0;
    at7 += s.pc == 7 ? 1 : 0;
  }
  if (in_cs > 1 || at7 > 1) {
    std::ostringstream os;
    os << in_cs << " processes in the CS, " << at7 << " at pc 7";
    return Violation{Clause::kMutex, 0, 0, os.str(), config_hash(c)};
  }
  return std::nullopt;
}

std::optional<int> f_value(const Config& c, ProcessId r) {
  const ProcState& s = c.proc(r);
  switch (s.pc) {
    case 1: return 3;
    case 3: return 2;
    case 4: return c.word(s.go).is_true() ? 8 : 9;
    case 5: return 7;
    case 6: return 2;
    case 7: return 1;
    case 9: return 6;
    case 10: return 5;
    default: return std::nullopt;
  }
}

std::strong_ordering Distance::operator<=>(const Distance& o) const {
  if (auto cmp = digits.size() <=> o.digits.size(); cmp != 0) return cmp;
  return std::lexicographical_compare_three_way(digits.begin(), digits.end(),
                                                o.digits.begin(), o.digits.end());
}

std::string Distance::to_string() const {
  std::string s;
  for (auto d : digits) s.push_back(static_cast<char>('0' + d));
  return s;
}

DistanceInfo distance_info(const Config& c, const QueueView& view, ProcessId p) {
  const ProcState& s = c.proc(p);
  std::size_t i = view.position(p);
  if (!pc_in(s.pc, {3, 4, 5, 6, 7}) || i == 0) {
    std::ostringstream os;
    os << "distance of " << p << " at pc " << s.pc << " (position " << i << ") is undefined";
    throw PreconditionError(os.str());
  }
  DistanceInfo info;
  info.position = i;
  std::size_t m = 1;
  while (c.proc(view.q[m - 1]).pc == 1) ++m;
  info.front = m;
  const ProcState& front = c.proc(view.q[m - 1]);
  int digit;
  if (auto f = f_value(c, front.id)) {
    digit = *f;
  } else if (front.pc == 11) {
    digit = 4;
    info.front_at_pc11 = true;
  } else {
    std::ostringstream os;
    os << "q_m = " << front.id << " at pc " << front.pc << " has no digit";
    throw PreconditionError(os.str());
  }
  info.delta.digits.assign(i, 0);
  for (std::size_t j = 1; j < m; ++j) info.delta.digits[j - 1] = 3;
  info.delta.digits[m - 1] = static_cast<std::uint8_t>(digit);

  if (front.pc == 4 && !c.word(front.go).is_true()) {
    for (const auto& r : c.procs) {
      if (pc_in(r.pc, {8, 11}) && r.temp == Value::go_ref(front.id)) info.promoters.push_back(r.id);
    }
    std::sort(info.promoters.begin(), info.promoters.end());
  } else {
    info.promoters.push_back(front.id);
  }
  return info;
}

namespace {

QueueView view_or_throw(const Config& c) {
  auto derived = derive_queue(c);
  if (auto* u = std::get_if<Underivable>(&derived)) throw PreconditionError(u->detail);
  return std::get<QueueView>(derived);
}

}  // namespace

Distance delta(const Config& c, ProcessId p) {
  return distance_info(c, view_or_throw(c), p).delta;
}

std::vector<ProcessId> promoters(const Config& c, ProcessId p) {
  return distance_info(c, view_or_throw(c), p).promoters;
}

std::optional<Violation> check_distances(const Config& c, const QueueView& view,
                                         std::uint64_t* front_at_pc11) {
  static const Distance kOne{{1}};
  for (const auto& s : c.procs) {
    if (!(pc_in(s.pc, {3, 4, 5, 6}) || s.in_cs)) continue;
    DistanceInfo info;
    try {
      info = distance_info(c, view, s.id);
    } catch (const PreconditionError& e) {
      return Violation{Clause::kLemma1, 0, 0, e.what(), config_hash(c)};
    }
    if (info.front_at_pc11 && front_at_pc11 != nullptr) ++*front_at_pc11;
    std::ostringstream os;
    if ((info.delta == kOne) != s.in_cs) {
      os << s.id << " at pc " << s.pc << " has delta " << info.delta.to_string()
         << (s.in_cs ? " while in the CS" : " outside the CS");
    } else if (info.delta != kOne && info.promoters.empty()) {
      os << s.id << " has delta " << info.delta.to_string() << " and no promoters";
    } else {
      continue;
    }
    return Violation{Clause::kLemma1, 0, 0, os.str(), config_hash(c)};
  }
  return std::nullopt;
}

std::optional<Violation> check_progress_step(const Config& before, const QueueView& vb,
                                             const Action& action, const Config& after,
                                             const QueueView& va) {
  for (const auto& s : before.procs) {
    if (!pc_in(s.pc, {3, 4, 5, 6})) continue;
    const ProcState& s2 = after.proc(s.id);
    // Left the waiting set by aborting or by sidestepping to Exit.
    if (!pc_in(s2.pc, {3, 4, 5, 6, 7}) || (s2.pc == 7 && !s2.in_cs)) continue;
    DistanceInfo ib;
    DistanceInfo ia;
    try {
      ib = distance_info(before, vb, s.id);
      ia = distance_info(after, va, s.id);
    } catch (const PreconditionError& e) {
      return Violation{Clause::kLemma2, 0, 0, e.what(), config_hash(before)};
    }
    bool by_promoter = action.kind == Action::Kind::kStep &&
                       std::binary_search(ib.promoters.begin(), ib.promoters.end(), action.pid);
    bool ok = ia.delta < ib.delta ||
              (!by_promoter && ia.delta == ib.delta && ia.promoters == ib.promoters);
    if (!ok) {
      std::ostringstream os;
      os << action << ": delta(" << s.id << ") " << ib.delta.to_string() << " -> "
         << ia.delta.to_string() << (by_promoter ? " by a promoter" : "");
      if (ia.delta == ib.delta) os << ", promoter set changed";
      return Violation{Clause::kLemma2, 0, 0, os.str(), config_hash(before)};
    }
  }
  return std::nullopt;
}

std::vector<Violation> check_amortized_step(const StepRecord& rec, const StepCost& cc,
                                            const StepCost& dsm) {
  std::vector<Violation> out;
  auto check = [&](CostModel model, const StepCost& cost, Clause clause) {
    int bound = amortized_bounds(model)[rec.line];
    if (cost.amortized() > bound) {
      std::ostringstream os;
      os << to_string(model) << " " << rec.action << " line " << rec.line << ": rmr "
         << cost.rmr << " + phi " << cost.phi_before << " -> " << cost.phi_after << " = "
         << cost.amortized() << " > " << bound;
      out.push_back(Violation{clause, rec.line, rec.seq, os.str(), 0});
    }
  };
  check(CostModel::kDSM, dsm, Clause::kLemma3);
  check(CostModel::kCC, cc, Clause::kLemma4);
  return out;
}

}  // namespace abortlab
