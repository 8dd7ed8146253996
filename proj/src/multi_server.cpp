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

#include "fairorder/multi_server.hpp"

#include <algorithm>
#include <charconv>
#include <map>

#include "fairorder/errors.hpp"

namespace fairorder {

namespace {

bool sorted_by_tick(const std::vector<ServerEvent>& events) {
  return std::is_sorted(events.begin(), events.end(),
                        [](const ServerEvent& a, const ServerEvent& b) { return a.tick < b.tick; });
}

void check_tick(const QuorumView& view, Tick t) {
  if (t < 0 || t > view.horizon) {
    throw RangeError("tick " + std::to_string(t) + " outside view range [0, " +
                     std::to_string(view.horizon) + "]");
  }
}

std::vector<RequestId> quorum_of(const QuorumView& view, Tick t, std::size_t threshold,
                                 bool ordered) {
  check_tick(view, t);
  std::map<RequestId, std::size_t> counts;
  for (std::size_t i = 0; i < view.n; ++i) {
    auto ids = ordered ? view.ordered_at(i, t) : view.received_at(i, t);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    for (RequestId id : ids) ++counts[id];
  }
  std::vector<RequestId> out;
  for (const auto& [id, c] : counts) {
    if (c >= threshold) out.push_back(id);
  }
  return out;
}

}  // namespace

void QuorumView::validate() const {
  if (n == 0) throw ConfigError("quorum view: n must be positive");
  if (servers.size() != n) throw ConfigError("quorum view: expected one history per server");
  if (f >= n) throw ConfigError("quorum view: f must be smaller than n");
  if (correct.size() < n - f) throw ConfigError("quorum view: fewer than n - f correct servers");
  if (!correct.empty() && *correct.rbegin() >= n) {
    throw ConfigError("quorum view: correct server index out of range");
  }
  for (const auto& s : servers) {
    if (!sorted_by_tick(s.received) || !sorted_by_tick(s.ordered)) {
      throw ConfigError("quorum view: server history not sorted by tick");
    }
  }
}

std::vector<RequestId> QuorumView::received_at(std::size_t server, Tick t) const {
  std::vector<RequestId> out;
  for (const auto& e : servers.at(server).received) {
    if (e.tick > t) break;
    out.push_back(e.id);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<RequestId> QuorumView::ordered_at(std::size_t server, Tick t) const {
  std::vector<RequestId> out;
  for (const auto& e : servers.at(server).ordered) {
    if (e.tick > t) break;
    std::erase(out, e.id);
    out.push_back(e.id);
  }
  return out;
}

std::vector<RequestId> global_received(const QuorumView& view, Tick t, std::size_t threshold) {
  const std::size_t q = threshold == 0 ? view.f + 1 : threshold;
  return quorum_of(view, t, q, false);
}

std::vector<RequestId> global_ordered(const QuorumView& view, Tick t, std::size_t threshold) {
  const std::size_t q = threshold == 0 ? view.n - view.f : threshold;
  return quorum_of(view, t, q, true);
}

Verdict check_prefix_consistency(const QuorumView& view) {
  const std::vector<std::size_t> correct(view.correct.begin(), view.correct.end());
  for (Tick t = 0; t <= view.horizon; ++t) {
    std::vector<std::vector<RequestId>> orders;
    orders.reserve(correct.size());
    for (std::size_t i : correct) orders.push_back(view.ordered_at(i, t));
    for (std::size_t a = 0; a < orders.size(); ++a) {
      for (std::size_t b = a + 1; b < orders.size(); ++b) {
        if (is_prefix(orders[a], orders[b]) || is_prefix(orders[b], orders[a])) continue;
        const std::size_t len = std::min(orders[a].size(), orders[b].size());
        std::size_t k = 0;
        while (k < len && orders[a][k] == orders[b][k]) ++k;
        return Verdict::fail(Property::consistency,
                             Witness{t,
                                     {orders[a][k], orders[b][k]},
                                     "servers " + std::to_string(correct[a]) + " and " +
                                         std::to_string(correct[b]) + " diverge at position " +
                                         std::to_string(k)});
      }
    }
  }
  return Verdict::pass(Property::consistency);
}

QuorumView replicate_views(const Trace& trace, std::size_t n, std::size_t f,
                           std::span<const Tick> lags, const std::set<std::size_t>& byzantine,
                           RngSeed seed) {
  QuorumView view;
  view.n = n;
  view.f = f;
  view.servers.resize(n);
  Tick max_lag = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Tick lag = i < lags.size() ? lags[i] : 0;
    if (lag < 0) throw ConfigError("replicate_views: lags must be non-negative");
    max_lag = std::max(max_lag, lag);
    auto& s = view.servers[i];
    for (const auto& e : trace.events) {
      if (e.kind == TraceEventKind::deliver) s.received.push_back({e.tick + lag, e.id});
      if (e.kind == TraceEventKind::order) s.ordered.push_back({e.tick + lag, e.id});
    }
    const auto by_tick = [](const ServerEvent& a, const ServerEvent& b) { return a.tick < b.tick; };
    std::stable_sort(s.received.begin(), s.received.end(), by_tick);
    std::stable_sort(s.ordered.begin(), s.ordered.end(), by_tick);
    if (byzantine.contains(i)) {
      RngStream rng(derive_seed(derive_seed(seed, "multi_server.byzantine"), i));
      for (std::size_t k = s.ordered.size(); k > 1; --k) {
        std::swap(s.ordered[k - 1].id, s.ordered[rng.below(k)].id);
      }
    } else {
      view.correct.insert(i);
    }
  }
  view.horizon = trace.horizon + max_lag;
  view.validate();
  return view;
}

std::string serialize_view(const QuorumView& view) {
  std::string out;
  out += "n:" + std::to_string(view.n) + "\n";
  out += "f:" + std::to_string(view.f) + "\n";
  out += "horizon:" + std::to_string(view.horizon) + "\n";
  out += "correct:";
  bool first = true;
  for (std::size_t i : view.correct) {
    if (!first) out += ';';
    first = false;
    out += std::to_string(i);
  }
  out += '\n';
  for (std::size_t i = 0; i < view.servers.size(); ++i) {
    const auto emit = [&](const std::vector<ServerEvent>& events, std::string_view kind) {
      for (const auto& e : events) {
        out += std::to_string(i) + ',' + std::to_string(e.tick) + ',';
        out += kind;
        out += ',' + std::to_string(e.id) + '\n';
      }
    };
    emit(view.servers[i].received, "receive");
    emit(view.servers[i].ordered, "order");
  }
  return out;
}

namespace {

template <typename T>
T number(std::string_view s, std::size_t line) {
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ParseError("view line " + std::to_string(line) + ": bad number '" + std::string(s) + "'");
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

QuorumView parse_view(std::string_view text) {
  QuorumView view;
  bool have_n = false;
  bool have_correct = false;
  bool have_horizon = false;
  Tick max_tick = 0;
  struct Row {
    std::size_t server;
    bool order;
    ServerEvent e;
  };
  std::vector<Row> rows;
  std::size_t line_no = 0;
  for (std::string_view line : split(text, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    if (line.starts_with("n:")) {
      view.n = number<std::size_t>(line.substr(2), line_no);
      have_n = true;
    } else if (line.starts_with("f:")) {
      view.f = number<std::size_t>(line.substr(2), line_no);
    } else if (line.starts_with("horizon:")) {
      view.horizon = number<Tick>(line.substr(8), line_no);
      have_horizon = true;
    } else if (line.starts_with("correct:")) {
      have_correct = true;
      const auto body = line.substr(8);
      if (!body.empty()) {
        for (auto part : split(body, ';')) view.correct.insert(number<std::size_t>(part, line_no));
      }
    } else {
      const auto parts = split(line, ',');
      if (parts.size() != 4) {
        throw ParseError("view line " + std::to_string(line_no) + ": expected server,tick,kind,id");
      }
      Row row{number<std::size_t>(parts[0], line_no), false,
              {number<Tick>(parts[1], line_no), number<RequestId>(parts[3], line_no)}};
      if (parts[2] == "order") {
        row.order = true;
      } else if (parts[2] != "receive") {
        throw ParseError("view line " + std::to_string(line_no) + ": unknown event kind '" +
                         std::string(parts[2]) + "'");
      }
      if (row.e.tick < 0) throw ParseError("view line " + std::to_string(line_no) + ": negative tick");
      max_tick = std::max(max_tick, row.e.tick);
      rows.push_back(row);
    }
  }
  if (!have_n) throw ParseError("view is missing its n: line");
  view.servers.resize(view.n);
  for (const auto& row : rows) {
    if (row.server >= view.n) throw ParseError("view: server index out of range");
    auto& s = view.servers[row.server];
    (row.order ? s.ordered : s.received).push_back(row.e);
  }
  if (!have_correct) {
    for (std::size_t i = 0; i < view.n; ++i) view.correct.insert(i);
  }
  if (!have_horizon) view.horizon = max_tick;
  try {
    view.validate();
  } catch (const ConfigError& e) {
    throw ParseError(e.what());
  }
  return view;
}

}  // namespace fairorder
