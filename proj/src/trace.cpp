// Copyright 2026 The fairorder Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fairorder/trace.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "fairorder/errors.hpp"

namespace fairorder {

std::string_view to_string(TraceEventKind kind) {
  switch (kind) {
    case TraceEventKind::issue:
      return "issue";
    case TraceEventKind::deliver:
      return "deliver";
    case TraceEventKind::order:
      return "order";
  }
  return "unknown";
}

bool is_prefix(std::span<const RequestId> prefix, std::span<const RequestId> seq) {
  return prefix.size() <= seq.size() && std::equal(prefix.begin(), prefix.end(), seq.begin());
}

std::vector<Snapshot> snapshots(const Trace& trace) {
  std::vector<TraceEvent> events = trace.events;
  std::stable_sort(events.begin(), events.end(),
                   [](const TraceEvent& a, const TraceEvent& b) { return a.tick < b.tick; });

  std::vector<Snapshot> out;
  if (trace.horizon < 0) return out;
  out.reserve(static_cast<std::size_t>(trace.horizon) + 1);

  std::set<RequestId> received;
  std::vector<RequestId> ordered;
  std::size_t next = 0;
  for (Tick t = 0; t <= trace.horizon; ++t) {
    for (; next < events.size() && events[next].tick <= t; ++next) {
      const auto& e = events[next];
      if (e.kind == TraceEventKind::deliver) {
        received.insert(e.id);
      } else if (e.kind == TraceEventKind::order) {
        std::erase(ordered, e.id);
        ordered.push_back(e.id);
      }
    }
    Snapshot snap;
    snap.tick = t;
    snap.received.assign(received.begin(), received.end());
    snap.ordered = ordered;
    std::vector<RequestId> sorted_ordered = ordered;
    std::sort(sorted_ordered.begin(), sorted_ordered.end());
    std::set_difference(snap.received.begin(), snap.received.end(), sorted_ordered.begin(),
                        sorted_ordered.end(), std::back_inserter(snap.pending));
    out.push_back(std::move(snap));
  }
  return out;
}

std::string serialize_trace(const Trace& trace) {
  std::string out;
  out += "seed:" + std::to_string(trace.seed.value) + "\n";
  out += "horizon:" + std::to_string(trace.horizon) + "\n";
  for (const auto& e : trace.events) {
    out += std::to_string(e.tick);
    out += ',';
    out += to_string(e.kind);
    out += ',';
    out += std::to_string(e.id);
    out += '\n';
  }
  out += "order:";
  for (std::size_t i = 0; i < trace.final_order.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(trace.final_order[i]);
  }
  out += '\n';
  return out;
}

namespace {

template <typename T>
T parse_number(std::string_view s, std::size_t line) {
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ParseError("trace line " + std::to_string(line) + ": bad number '" + std::string(s) +
                     "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

Trace parse_trace(std::string_view text) {
  Trace trace;
  bool have_order = false;
  bool have_horizon = false;
  Tick max_tick = 0;
  std::size_t line_no = 0;
  for (std::string_view line : split(text, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    if (line.starts_with("seed:")) {
      trace.seed = RngSeed{parse_number<std::uint64_t>(line.substr(5), line_no)};
    } else if (line.starts_with("horizon:")) {
      trace.horizon = parse_number<Tick>(line.substr(8), line_no);
      have_horizon = true;
    } else if (line.starts_with("order:")) {
      if (have_order) throw ParseError("trace has more than one order: line");
      have_order = true;
      const auto body = line.substr(6);
      if (!body.empty()) {
        for (auto part : split(body, ',')) {
          trace.final_order.push_back(parse_number<RequestId>(part, line_no));
        }
      }
    } else {
      const auto parts = split(line, ',');
      if (parts.size() != 3) {
        throw ParseError("trace line " + std::to_string(line_no) + ": expected tick,kind,id");
      }
      TraceEvent e;
      e.tick = parse_number<Tick>(parts[0], line_no);
      if (e.tick < 0) throw ParseError("trace line " + std::to_string(line_no) + ": negative tick");
      if (parts[1] == "issue") {
        e.kind = TraceEventKind::issue;
      } else if (parts[1] == "deliver") {
        e.kind = TraceEventKind::deliver;
      } else if (parts[1] == "order") {
        e.kind = TraceEventKind::order;
      } else {
        throw ParseError("trace line " + std::to_string(line_no) + ": unknown event kind '" +
                         std::string(parts[1]) + "'");
      }
      e.id = parse_number<RequestId>(parts[2], line_no);
      max_tick = std::max(max_tick, e.tick);
      trace.events.push_back(e);
    }
  }
  if (!have_order) throw ParseError("trace is missing its order: line");
  if (!have_horizon) trace.horizon = max_tick;
  if (trace.horizon < max_tick) throw ParseError("trace horizon precedes its last event");
  return trace;
}

}  // namespace fairorder
