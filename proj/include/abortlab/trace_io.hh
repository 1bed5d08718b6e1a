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

#ifndef ABORTLAB_TRACE_IO_HH_
#define ABORTLAB_TRACE_IO_HH_

#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "abortlab/trace.hh"

namespace abortlab {

/// One JSON object, no trailing newline:
/// {"seq":0,"actor":1,"kind":"exec-line","line":1,"pre_pc":1,"post_pc":2,
///  "rmr_cc":1,"rmr_dsm":0,"phi_cc":0,"phi_dsm":0,"events":["attempt_start"],
///  "queue":[]}
/// Abort signals and joins have "actor":"env", a "target" and "line":null.
std::string format_trace_entry(const TraceEntry& entry);

/// Throws TraceError on malformed input.
TraceEntry parse_trace_entry(std::string_view text);

void write_trace(std::ostream& out, const Trace& trace);

/// Reads JSON lines, skipping blank ones. Errors name the offending line.
Trace read_trace(std::istream& in);

/// Writes `contents` to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace abortlab

#endif  // ABORTLAB_TRACE_IO_HH_
