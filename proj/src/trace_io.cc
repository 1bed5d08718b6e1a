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

#include "abortlab/trace_io.hh"

#include <fstream>
#include <system_error>

#include "json.hpp"

namespace abortlab {

using nlohmann::json;

std::string format_trace_entry(const TraceEntry& e) {
  json j;
  j["seq"] = e.seq;
  if (e.by_env()) {
    j["actor"] = "env";
    j["target"] = e.pid.value;
  } else {
    j["actor"] = e.pid.value;
  }
  j["kind"] = step_kind_name(e.kind);
  j["line"] = e.by_env() ? json(nullptr) : json(e.line);
  j["pre_pc"] = e.pre_pc;
  j["post_pc"] = e.post_pc;
  j["rmr_cc"] = e.rmr_cc;
  j["rmr_dsm"] = e.rmr_dsm;
  j["phi_cc"] = e.phi_cc;
  j["phi_dsm"] = e.phi_dsm;
  json events = json::array();
  for (Event ev : kAllEvents) {
    if (e.has(ev)) events.push_back(event_name(ev));
  }
  j["events"] = std::move(events);
  json queue = json::array();
  for (ProcessId p : e.queue) queue.push_back(p.value);
  j["queue"] = std::move(queue);
  return j.dump();
}

namespace {

template <typename T>
T field(const json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) throw TraceError(std::string("missing field \"") + name + "\"");
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw TraceError(std::string("field \"") + name + "\" has the wrong type");
  }
}

ProcessId pid_field(const json& j, const char* name) {
  return ProcessId{field<std::uint32_t>(j, name)};
}

}  // namespace

TraceEntry parse_trace_entry(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& err) {
    throw TraceError(std::string("invalid JSON: ") + err.what());
  }
  if (!j.is_object()) throw TraceError("trace line is not a JSON object");

  TraceEntry e;
  e.seq = field<std::uint64_t>(j, "seq");
  auto kind = parse_step_kind(field<std::string>(j, "kind"));
  if (!kind) throw TraceError("unknown kind \"" + field<std::string>(j, "kind") + "\"");
  e.kind = *kind;
  if (e.by_env()) {
    if (field<std::string>(j, "actor") != "env") throw TraceError("environment step without \"env\" actor");
    e.pid = pid_field(j, "target");
    if (!j.contains("line") || !j["line"].is_null()) throw TraceError("environment step with a line");
  } else {
    e.pid = pid_field(j, "actor");
    e.line = field<int>(j, "line");
  }
  e.pre_pc = field<int>(j, "pre_pc");
  e.post_pc = field<int>(j, "post_pc");
  e.rmr_cc = field<int>(j, "rmr_cc");
  e.rmr_dsm = field<int>(j, "rmr_dsm");
  e.phi_cc = field<std::int64_t>(j, "phi_cc");
  e.phi_dsm = field<std::int64_t>(j, "phi_dsm");
  for (const auto& name : field<std::vector<std::string>>(j, "events")) {
    auto ev = parse_event(name);
    if (!ev) throw TraceError("unknown event \"" + name + "\"");
    e.events |= *ev;
  }
  for (std::uint32_t p : field<std::vector<std::uint32_t>>(j, "queue")) e.queue.push_back(ProcessId{p});
  return e;
}

void write_trace(std::ostream& out, const Trace& trace) {
  for (const auto& e : trace) out << format_trace_entry(e) << '\n';
}

Trace read_trace(std::istream& in) {
  Trace trace;
  std::string text;
  std::size_t number = 0;
  while (std::getline(in, text)) {
    ++number;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      trace.push_back(parse_trace_entry(text));
    } catch (const TraceError& err) {
      throw TraceError("line " + std::to_string(number) + ": " + err.what());
    }
  }
  return trace;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::system_error(errno, std::generic_category(), "cannot open " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw std::system_error(errno, std::generic_category(), "cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace abortlab
