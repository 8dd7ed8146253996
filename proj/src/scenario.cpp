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

#include "fairorder/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "fairorder/errors.hpp"

namespace fairorder {

using nlohmann::json;

std::string_view policy_name(const PolicyKind& policy) {
  if (std::holds_alternative<FcfsPolicy>(policy)) return "fcfs";
  if (std::holds_alternative<TtlPolicy>(policy)) return "ttl";
  return "fair";
}

std::string_view to_string(CertifyMode mode) {
  switch (mode) {
    case CertifyMode::ordering_equality:
      return "ordering_equality";
    case CertifyMode::k_ordering_equality:
      return "k_ordering_equality";
    case CertifyMode::additive:
      return "additive";
  }
  return "unknown";
}

CertifyMode parse_certify_mode(std::string_view name) {
  if (name == "ordering_equality") return CertifyMode::ordering_equality;
  if (name == "k_ordering_equality") return CertifyMode::k_ordering_equality;
  if (name == "additive") return CertifyMode::additive;
  throw ConfigError("unknown certify mode '" + std::string(name) + "'");
}

const ByzantineClientSpec* ScenarioConfig::adversary_for(ClientId client) const {
  for (const auto& a : adversaries) {
    if (a.client_id == client) return &a;
  }
  return nullptr;
}

Tick ScenarioConfig::drain() const {
  if (drain_ticks) return *drain_ticks;
  return asynchronous ? 1 : delay.max_delay() + 1;
}

namespace {

bool has_request(const ScenarioConfig& s, RequestId id) {
  return std::any_of(s.requests.begin(), s.requests.end(),
                     [&](const Request& r) { return r.id == id; });
}

void require_irrelevant(const FeaturePartition& part, std::optional<std::size_t> idx,
                        const char* what) {
  if (!idx) return;
  if (*idx >= part.feature_count() || part.is_relevant(*idx)) {
    throw ConfigError(std::string(what) + " must name an irrelevant feature index");
  }
}

}  // namespace

void ScenarioConfig::validate() const {
  if (feature_count == 0) throw ConfigError("feature_count must be positive");
  const FeaturePartition part = partition();
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ConfigError("lambda must be positive");
  noise.validate();
  delay.validate();

  std::set<RequestId> ids;
  for (const auto& r : requests) {
    if (!ids.insert(r.id).second) {
      throw ConfigError("duplicate request id " + std::to_string(r.id));
    }
    if (r.features.size() != feature_count) {
      throw ConfigError("request " + std::to_string(r.id) + " has " +
                        std::to_string(r.features.size()) + " features, expected " +
                        std::to_string(feature_count));
    }
    if (r.issue_tick < 0) {
      throw ConfigError("request " + std::to_string(r.id) + " has a negative issue tick");
    }
  }

  require_irrelevant(part, delay_feature, "delay_feature");
  require_irrelevant(part, adversary_feature, "adversary_feature");
  if (time_feature && (*time_feature >= feature_count || !part.is_relevant(*time_feature))) {
    throw ConfigError("time_feature must name a relevant feature index");
  }
  for (const auto& a : adversaries) {
    if (a.bribe < 0.0) throw ConfigError("bribe must be non-negative");
    if (a.bribe > 0.0 && !adversary_feature) {
      throw ConfigError("bribes need an adversary_feature to fold into");
    }
  }
  if (const auto* ttl = std::get_if<TtlPolicy>(&policy)) {
    if (ttl->deadline_feature >= feature_count) {
      throw ConfigError("ttl deadline_feature out of range");
    }
  }
  if (drain_ticks && *drain_ticks < 0) throw ConfigError("drain_ticks must be non-negative");

  for (const auto& [a, b] : predicate) {
    if (!has_request(*this, a) || !has_request(*this, b)) {
      throw ConfigError("predicate names an unknown request id");
    }
  }

  if (multi_server) {
    const auto& ms = *multi_server;
    if (ms.n == 0) throw ConfigError("multi_server.n must be positive");
    if (ms.n < 3 * ms.f + 1) throw ConfigError("multi_server requires n >= 3f + 1");
    if (!ms.lags.empty() && ms.lags.size() != ms.n) {
      throw ConfigError("multi_server.lags must list one lag per server");
    }
    if (std::any_of(ms.lags.begin(), ms.lags.end(), [](Tick t) { return t < 0; })) {
      throw ConfigError("multi_server.lags must be non-negative");
    }
    std::set<std::size_t> byz(ms.byzantine.begin(), ms.byzantine.end());
    if (byz.size() > ms.f) throw ConfigError("more Byzantine servers than f");
    if (!byz.empty() && *byz.rbegin() >= ms.n) throw ConfigError("Byzantine server index out of range");
  }

  if (trials) {
    if (trials->n_trials == 0) throw ConfigError("trials.n_trials must be positive");
    if (!(trials->confidence > 0.0 && trials->confidence < 1.0)) {
      throw ConfigError("trials.confidence must lie in (0, 1)");
    }
    if (trials->pair &&
        (!has_request(*this, trials->pair->first) || !has_request(*this, trials->pair->second))) {
      throw ConfigError("trials.pair names an unknown request id");
    }
    if (trials->forced_k && !(*trials->forced_k >= 0.0)) {
      throw ConfigError("trials.k must be non-negative");
    }
    if (!(trials->widening >= 0.0)) throw ConfigError("trials.widening must be non-negative");
    if (!(trials->delta >= 0.0 && trials->delta <= 1.0)) {
      throw ConfigError("trials.delta must lie in [0, 1]");
    }
  }
}

ScenarioLint lint_scenario(const ScenarioConfig& scenario) {
  ScenarioLint lint;
  const FeaturePartition part = scenario.partition();
  const double lambda = scenario.lambda;

  auto bribe_of = [&](ClientId c) {
    const auto* a = scenario.adversary_for(c);
    return a ? a->bribe : 0.0;
  };
  auto misreport_of = [&](ClientId c) {
    const auto* a = scenario.adversary_for(c);
    return a ? static_cast<double>(a->time_misreport) : 0.0;
  };

  for (const auto& a : scenario.adversaries) {
    if (a.bribe > lambda) {
      lint.violations.push_back("client " + std::to_string(a.client_id) + " bribe " +
                                std::to_string(a.bribe) + " exceeds lambda " +
                                std::to_string(lambda));
    }
    if (std::fabs(static_cast<double>(a.time_misreport)) > lambda && scenario.adversary_feature) {
      lint.violations.push_back("client " + std::to_string(a.client_id) +
                                " time misreport exceeds lambda");
    }
  }

  const auto& reqs = scenario.requests;
  for (std::size_t i = 0; i < reqs.size(); ++i) {
    for (std::size_t j = i + 1; j < reqs.size(); ++j) {
      if (!adjacent(reqs[i], reqs[j], part)) continue;
      double spread = std::fabs(score(reqs[i], part).eta - score(reqs[j], part).eta);
      if (scenario.delay_feature) {
        const auto& di = scenario.delay.for_client(reqs[i].client_id);
        const auto& dj = scenario.delay.for_client(reqs[j].client_id);
        spread += static_cast<double>(
            std::max(di.max_delay() - dj.min_delay(), dj.max_delay() - di.min_delay()));
      }
      if (scenario.adversary_feature) {
        spread += std::fabs(bribe_of(reqs[i].client_id) - bribe_of(reqs[j].client_id));
        spread += std::fabs(misreport_of(reqs[i].client_id) - misreport_of(reqs[j].client_id));
      }
      if (spread > lambda) {
        lint.violations.push_back("adjacent requests " + std::to_string(reqs[i].id) + " and " +
                                  std::to_string(reqs[j].id) + " can differ in eta by " +
                                  std::to_string(spread) + " > lambda");
      }
    }
  }
  lint.assumption1_ok = lint.violations.empty();

  if (scenario.mode == ScenarioMode::fee) {
    std::vector<double> classes;
    for (const auto& r : reqs) classes.push_back(score(r, part).relev);
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
    for (std::size_t i = 1; i < classes.size(); ++i) {
      if (classes[i] - classes[i - 1] < scenario.fee_gap_factor * lambda) {
        lint.warnings.push_back("fee classes " + std::to_string(classes[i - 1]) + " and " +
                                std::to_string(classes[i]) + " are closer than " +
                                std::to_string(scenario.fee_gap_factor) + " * lambda");
      }
    }
  }
  return lint;
}

FairPolicy make_fair_policy(const ScenarioConfig& scenario) {
  FairPolicy fair;
  fair.noise = scenario.noise;
  fair.noise.sensitivity = scenario.lambda;
  fair.partition = scenario.partition();
  fair.descending = scenario.mode == ScenarioMode::fee;
  return fair;
}

namespace {

void reject_unknown_keys(const json& obj, std::initializer_list<std::string_view> known,
                         const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigError(where + ": unknown key '" + key + "'");
    }
  }
}

DelayDistribution parse_delay_distribution(const json& j) {
  DelayDistribution d;
  d.kind = parse_delay_kind(j.at("kind").get<std::string>());
  d.ticks = j.value("ticks", Tick{0});
  d.lo = j.value("lo", Tick{0});
  d.hi = j.value("hi", Tick{0});
  d.scale = j.value("scale", 1.0);
  d.cap = j.value("cap", Tick{0});
  return d;
}

Request parse_request(const json& j, std::optional<ClientId> client) {
  Request r;
  r.id = j.at("id").get<RequestId>();
  r.client_id = client ? *client : j.value("client_id", ClientId{0});
  r.features = j.at("features").get<std::vector<double>>();
  r.issue_tick = j.value("issue_tick", Tick{0});
  r.declared_issue_tick = r.issue_tick;
  return r;
}

NoiseSpec parse_noise(const json& j) {
  reject_unknown_keys(j, {"kind", "epsilon", "bound", "delta", "delta_noise", "delta_net"},
                      "noise");
  NoiseSpec spec;
  spec.kind = parse_noise_kind(j.value("kind", std::string("laplace")));
  spec.epsilon = j.value("epsilon", kDefaultEpsilon);
  if (j.contains("bound")) spec.bound = j.at("bound").get<double>();
  if (j.contains("delta")) spec.delta = j.at("delta").get<double>();
  // Uniform noise may be given as (delta_noise, delta_net); the support
  // half-width is delta_noise.
  if (j.contains("delta_noise")) {
    const double dn = j.at("delta_noise").get<double>();
    spec.bound = dn;
    if (j.contains("delta_net")) spec.delta = uniform_delta(j.at("delta_net").get<double>(), dn);
  }
  return spec;
}

ScenarioConfig parse_document(const json& doc) {
  if (!doc.is_object()) throw ConfigError("scenario must be a JSON object");
  reject_unknown_keys(doc,
                      {"feature_count", "relevant", "requests", "clients", "delay",
                       "delay_feature", "adversary_feature", "time_feature", "adversaries",
                       "lambda", "noise", "policy", "mode", "drain_ticks", "stability_gating",
                       "asynchronous", "assumption1", "fee_gap_factor", "predicate",
                       "multi_server", "trials", "sweep", "seed", "checkers", "name"},
                      "scenario");
  ScenarioConfig s;
  s.feature_count = doc.at("feature_count").get<std::size_t>();
  s.relevant = doc.at("relevant").get<std::vector<std::size_t>>();
  s.lambda = doc.value("lambda", 1.0);

  if (doc.contains("requests")) {
    for (const auto& r : doc.at("requests")) s.requests.push_back(parse_request(r, std::nullopt));
  }
  if (doc.contains("clients")) {
    for (const auto& c : doc.at("clients")) {
      const auto client = c.at("id").get<ClientId>();
      for (const auto& r : c.at("requests")) s.requests.push_back(parse_request(r, client));
    }
  }

  if (doc.contains("delay")) {
    const auto& d = doc.at("delay");
    s.delay.base = parse_delay_distribution(d);
    if (d.contains("overrides")) {
      for (const auto& o : d.at("overrides")) {
        s.delay.overrides[o.at("client").get<ClientId>()] = parse_delay_distribution(o);
      }
    }
  }
  if (doc.contains("delay_feature")) s.delay_feature = doc.at("delay_feature").get<std::size_t>();
  if (doc.contains("adversary_feature")) {
    s.adversary_feature = doc.at("adversary_feature").get<std::size_t>();
  }
  if (doc.contains("time_feature")) s.time_feature = doc.at("time_feature").get<std::size_t>();
  if (doc.contains("adversaries")) {
    for (const auto& a : doc.at("adversaries")) {
      s.adversaries.push_back({a.at("client_id").get<ClientId>(), a.value("time_misreport", Tick{0}),
                               a.value("bribe", 0.0)});
    }
  }

  if (doc.contains("noise")) s.noise = parse_noise(doc.at("noise"));
  s.noise.sensitivity = s.lambda;

  const std::string mode = doc.value("mode", std::string("generic"));
  if (mode == "generic") {
    s.mode = ScenarioMode::generic;
  } else if (mode == "time") {
    s.mode = ScenarioMode::time;
  } else if (mode == "fee") {
    s.mode = ScenarioMode::fee;
  } else {
    throw ConfigError("unknown scenario mode '" + mode + "'");
  }

  if (s.time_feature) {
    for (auto& r : s.requests) {
      if (*s.time_feature < r.features.size()) {
        r.features[*s.time_feature] = static_cast<double>(r.issue_tick);
      }
    }
  }

  const json policy = doc.value("policy", json{{"kind", "fcfs"}});
  const std::string kind = policy.value("kind", std::string("fcfs"));
  if (kind == "fcfs") {
    s.policy = FcfsPolicy{};
  } else if (kind == "ttl") {
    s.policy = TtlPolicy{policy.at("deadline_feature").get<std::size_t>()};
  } else if (kind == "fair") {
    // Partition construction can throw; defer until the basic fields exist.
    s.policy = FcfsPolicy{};
  } else {
    throw ConfigError("unknown policy kind '" + kind + "'");
  }

  if (doc.contains("drain_ticks")) s.drain_ticks = doc.at("drain_ticks").get<Tick>();
  s.stability_gating = doc.value("stability_gating", true);
  s.asynchronous = doc.value("asynchronous", false);
  s.assumption1 = doc.value("assumption1", false);
  s.fee_gap_factor = doc.value("fee_gap_factor", 10.0);
  if (doc.contains("predicate")) {
    for (const auto& p : doc.at("predicate")) {
      s.predicate.emplace_back(p.at(0).get<RequestId>(), p.at(1).get<RequestId>());
    }
  }
  if (doc.contains("checkers")) s.checkers = doc.at("checkers").get<std::vector<std::string>>();
  if (doc.contains("seed")) s.seed = RngSeed{doc.at("seed").get<std::uint64_t>()};

  if (doc.contains("multi_server")) {
    const auto& m = doc.at("multi_server");
    MultiServerConfig ms;
    ms.n = m.at("n").get<std::size_t>();
    ms.f = m.value("f", std::size_t{0});
    ms.lags = m.value("lags", std::vector<Tick>{});
    ms.byzantine = m.value("byzantine", std::vector<std::size_t>{});
    ms.received_threshold = m.value("received_threshold", std::size_t{0});
    ms.ordered_threshold = m.value("ordered_threshold", std::size_t{0});
    s.multi_server = ms;
  }

  if (doc.contains("trials")) {
    const auto& t = doc.at("trials");
    reject_unknown_keys(t,
                        {"n_trials", "base_seed", "confidence", "pair", "mode", "k", "epsilon",
                         "delta", "widening", "resolution"},
                        "trials");
    TrialsConfig tc;
    tc.n_trials = t.value("n_trials", std::uint64_t{1});
    tc.base_seed = RngSeed{t.value("base_seed", std::uint64_t{0})};
    tc.confidence = t.value("confidence", 0.99);
    if (t.contains("pair")) {
      tc.pair = std::make_pair(t.at("pair").at(0).get<RequestId>(),
                               t.at("pair").at(1).get<RequestId>());
    }
    tc.mode = parse_certify_mode(t.value("mode", std::string("k_ordering_equality")));
    if (t.contains("k")) tc.forced_k = t.at("k").get<double>();
    if (t.contains("epsilon")) tc.epsilon = t.at("epsilon").get<double>();
    tc.delta = t.value("delta", 0.0);
    tc.widening = t.value("widening", 3.0);
    tc.resolution = t.value("resolution", 0.05);
    s.trials = tc;
  }

  if (doc.contains("sweep")) {
    const auto& w = doc.at("sweep");
    s.sweep = SweepConfig{w.value("epsilon", std::vector<double>{}),
                          w.value("n", std::vector<double>{})};
  }

  s.validate();
  if (kind == "fair") {
    FairPolicy fair = make_fair_policy(s);
    if (policy.contains("descending")) fair.descending = policy.at("descending").get<bool>();
    s.policy = std::move(fair);
  }
  return s;
}

}  // namespace

ScenarioConfig parse_scenario_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario JSON: ") + e.what());
  }
  try {
    return parse_document(doc);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario JSON: ") + e.what());
  }
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read scenario file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_json(buf.str());
}

}  // namespace fairorder
