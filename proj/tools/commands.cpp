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

#include "commands.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "fairorder/errors.hpp"
#include "fairorder/fairness_stats.hpp"
#include "fairorder/multi_server.hpp"
#include "fairorder/ordering_engine.hpp"
#include "fairorder/policy_checker.hpp"
#include "fairorder/shared_randomizer.hpp"
#include "fairorder/trace.hpp"

namespace fairorder::cli {

namespace {

constexpr std::uint64_t kDefaultSweepTrials = 100000;
constexpr std::uint64_t kDefaultInstances = 1000;

std::string read_file(const std::filesystem::path& path, std::string_view what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + std::string(what) + " " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& dir, std::string_view name, const std::string& text) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const auto path = dir / name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

std::vector<double> parse_numbers(std::string_view list) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    const auto pos = list.find(',', start);
    const auto item = list.substr(start, pos == std::string_view::npos ? pos : pos - start);
    if (!item.empty()) {
      const std::string s(item);
      char* end = nullptr;
      const double v = std::strtod(s.c_str(), &end);
      if (end != s.c_str() + s.size() || !std::isfinite(v)) {
        throw ConfigError("grid: bad number '" + s + "'");
      }
      out.push_back(v);
    }
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// Maps library exceptions onto exit codes.
int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const LivenessError& e) {
    err << "liveness: " << e.what() << '\n';
    return kLiveness;
  } catch (const ConfigError& e) {
    err << "config: " << e.what() << '\n';
    return kConfig;
  } catch (const ParseError& e) {
    err << "parse: " << e.what() << '\n';
    return kConfig;
  } catch (const InvalidParameter& e) {
    err << "config: " << e.what() << '\n';
    return kConfig;
  } catch (const InvalidInput& e) {
    err << "config: " << e.what() << '\n';
    return kConfig;
  } catch (const MisuseError& e) {
    err << "config: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFail;
  }
}

ScenarioConfig load(const CommandOptions& opts) {
  if (opts.config.empty()) throw ConfigError("--config is required");
  return load_scenario(opts.config);
}

Property parse_property(const std::string& name) {
  for (auto p : {Property::order_determinism, Property::non_blocking, Property::consistency,
                 Property::monotonic_order, Property::policy_compliance,
                 Property::strong_non_blocking}) {
    if (to_string(p) == name) return p;
  }
  throw ConfigError("unknown checker '" + name + "'");
}

std::vector<Verdict> run_checkers(const Trace& trace, const ScenarioConfig* scenario) {
  std::vector<Property> enabled;
  if (scenario && !scenario->checkers.empty()) {
    for (const auto& name : scenario->checkers) enabled.push_back(parse_property(name));
  } else {
    enabled = {Property::order_determinism, Property::non_blocking, Property::consistency,
               Property::monotonic_order};
    if (scenario && !scenario->predicate.empty()) enabled.push_back(Property::policy_compliance);
  }
  std::vector<Verdict> out;
  for (Property p : enabled) {
    switch (p) {
      case Property::order_determinism:
        out.push_back(check_order_determinism(trace));
        break;
      case Property::non_blocking:
        out.push_back(check_non_blocking(trace));
        break;
      case Property::consistency:
        out.push_back(check_consistency(trace));
        break;
      case Property::monotonic_order:
        out.push_back(check_monotonic_order(trace));
        break;
      case Property::strong_non_blocking:
        out.push_back(check_strong_non_blocking(trace));
        break;
      case Property::policy_compliance: {
        const std::vector<std::pair<RequestId, RequestId>> pairs =
            scenario ? scenario->predicate : std::vector<std::pair<RequestId, RequestId>>{};
        out.push_back(check_policy_compliance(trace, PolicyPredicate(pairs)));
        break;
      }
    }
  }
  return out;
}

int write_verdicts(const CommandOptions& opts, const std::vector<Verdict>& verdicts) {
  std::string text;
  bool ok = true;
  for (const auto& v : verdicts) {
    text += format_verdict(v) + '\n';
    ok = ok && v.passed;
  }
  write_file(opts.out, "verdicts.txt", text);
  return ok ? kPass : kFail;
}

int exit_for(StatVerdict v) {
  switch (v) {
    case StatVerdict::pass:
      return kPass;
    case StatVerdict::fail:
      return kFail;
    case StatVerdict::inconclusive:
      return kInconclusive;
  }
  return kFail;
}

// Worst outcome across cells: fail over inconclusive over pass.
int combine(int a, int b) {
  const auto rank = [](int c) { return c == kFail ? 2 : c == kInconclusive ? 1 : 0; };
  return rank(a) >= rank(b) ? a : b;
}

}  // namespace

std::uint64_t resolve_seed(const CommandOptions& opts, std::uint64_t fallback) {
  if (opts.seed) return *opts.seed;
  if (const char* env = std::getenv("FAIRORDER_SEED"); env && *env) {
    char* end = nullptr;
    const auto v = std::strtoull(env, &end, 10);
    if (*end != '\0') throw ConfigError("FAIRORDER_SEED is not an unsigned integer");
    return v;
  }
  return fallback;
}

SweepGrid parse_grid(const std::string& text) {
  SweepGrid grid;
  std::string_view rest = text;
  while (!rest.empty()) {
    const auto semi = rest.find(';');
    const auto part = rest.substr(0, semi);
    rest = semi == std::string_view::npos ? std::string_view{} : rest.substr(semi + 1);
    if (part.empty()) continue;
    const auto eq = part.find('=');
    if (eq == std::string_view::npos) throw ConfigError("grid: expected key=values");
    const auto key = part.substr(0, eq);
    auto values = parse_numbers(part.substr(eq + 1));
    if (key == "eps" || key == "epsilon") {
      grid.epsilons = std::move(values);
    } else if (key == "n" || key == "gap") {
      grid.gaps = std::move(values);
    } else {
      throw ConfigError("grid: unknown axis '" + std::string(key) + "'");
    }
  }
  return grid;
}

ScenarioConfig pair_scenario(double n, double epsilon, double lambda, NoiseKind kind) {
  ScenarioConfig s;
  s.feature_count = 1;
  s.relevant = {0};
  s.lambda = lambda;
  Request low{1, 1, {0.0}, 0, 0};
  Request high{2, 2, {n * lambda}, 0, 0};
  s.requests = {low, high};
  s.delay.base = DelayDistribution::constant(0);
  s.noise.kind = kind;
  s.noise.epsilon = epsilon;
  s.noise.sensitivity = lambda;
  s.policy = make_fair_policy(s);
  s.validate();
  return s;
}

int cmd_run(const CommandOptions& opts, std::ostream& err) {
  return guarded(err, [&] {
    const ScenarioConfig scenario = load(opts);
    const std::uint64_t seed = resolve_seed(opts, scenario.seed ? scenario.seed->value : 0);
    const Trace trace = run(scenario, scenario.policy, RngSeed{seed});
    write_file(opts.out, "trace.txt", serialize_trace(trace));
    return write_verdicts(opts, run_checkers(trace, &scenario));
  });
}

int cmd_check(const CommandOptions& opts, std::ostream& err) {
  return guarded(err, [&] {
    if (opts.trace.empty()) throw ConfigError("--trace is required");
    const Trace trace = parse_trace(read_file(opts.trace, "trace"));
    std::optional<ScenarioConfig> scenario;
    if (!opts.config.empty()) scenario = load(opts);
    return write_verdicts(opts, run_checkers(trace, scenario ? &*scenario : nullptr));
  });
}

int cmd_certify(const CommandOptions& opts, std::ostream& err) {
  return guarded(err, [&] {
    const ScenarioConfig scenario = load(opts);
    if (!scenario.trials) throw ConfigError("certify needs a trials block");
    const TrialsConfig& tc = *scenario.trials;

    OrderPair pair{};
    if (tc.pair) {
      pair = {tc.pair->first, tc.pair->second};
    } else if (scenario.requests.size() == 2) {
      pair = {std::min(scenario.requests[0].id, scenario.requests[1].id),
              std::max(scenario.requests[0].id, scenario.requests[1].id)};
    } else {
      throw ConfigError("trials.pair is required when the scenario has more than two requests");
    }

    double epsilon = 0.0;
    if (tc.epsilon) {
      epsilon = *tc.epsilon;
    } else if (const auto* fair = std::get_if<FairPolicy>(&scenario.policy)) {
      epsilon = fair->noise.epsilon;
    } else {
      throw ConfigError("trials.epsilon is required for non-fair policies");
    }

    const ScenarioLint lint = lint_scenario(scenario);
    for (const auto& w : lint.warnings) err << "warning: " << w << '\n';
    const bool out_of_contract = scenario.assumption1 && !lint.assumption1_ok;
    for (const auto& v : lint.violations) err << "out of contract: " << v << '\n';

    const std::uint64_t n_trials = opts.trials.value_or(tc.n_trials);
    const RngSeed base{resolve_seed(opts, tc.base_seed.value)};
    const Simulator sim(scenario, scenario.policy);
    FairnessReport report = estimate_order_probability(sim, pair, n_trials, base, tc.confidence);

    const CertifyOptions options{tc.widening, tc.resolution};
    switch (tc.mode) {
      case CertifyMode::ordering_equality:
        if (tc.forced_k) report.k = *tc.forced_k;
        report = certify_ordering_equality(report, epsilon, options);
        break;
      case CertifyMode::k_ordering_equality:
        report = certify_k_ordering_equality(report, epsilon, tc.forced_k.value_or(report.k),
                                             options);
        break;
      case CertifyMode::additive: {
        double delta = tc.delta;
        if (delta == 0.0 && scenario.noise.delta) delta = *scenario.noise.delta;
        report = certify_additive(report, epsilon, delta, options);
        break;
      }
    }

    std::string row = report_csv_row(report);
    if (out_of_contract) row = row.substr(0, row.rfind(',') + 1) + "out_of_contract";
    write_file(opts.out, "report.csv", report_csv_header() + '\n' + row + '\n');
    if (out_of_contract) return static_cast<int>(kConfig);
    return exit_for(*report.verdict);
  });
}

int cmd_sweep(const CommandOptions& opts, std::ostream& err) {
  return guarded(err, [&] {
    std::optional<ScenarioConfig> scenario;
    if (!opts.config.empty()) scenario = load(opts);

    SweepGrid grid;
    if (!opts.grid.empty()) {
      grid = parse_grid(opts.grid);
    } else if (scenario && scenario->sweep) {
      grid = {scenario->sweep->epsilons, scenario->sweep->gaps};
    }
    if (grid.epsilons.empty() || grid.gaps.empty()) throw ConfigError("sweep grid is empty");
    for (double e : grid.epsilons) {
      if (!(e > 0.0)) throw ConfigError("sweep: epsilon must be positive");
    }
    for (double n : grid.gaps) {
      if (!(n >= 0.0)) throw ConfigError("sweep: n must be non-negative");
    }

    const TrialsConfig tc = scenario && scenario->trials ? *scenario->trials : TrialsConfig{};
    std::uint64_t n_trials = kDefaultSweepTrials;
    if (scenario && scenario->trials) n_trials = tc.n_trials;
    if (opts.trials) n_trials = *opts.trials;
    const double lambda = scenario ? scenario->lambda : 1.0;
    const RngSeed base{resolve_seed(opts, scenario && scenario->trials ? tc.base_seed.value : 0)};
    const CertifyOptions options{tc.widening, tc.resolution};

    std::string csv = "epsilon,n,analytic_p,p_hat,ratio,bound,verdict\n";
    int code = kPass;
    std::uint64_t cell = 0;
    for (double eps : grid.epsilons) {
      for (double n : grid.gaps) {
        const ScenarioConfig cell_scenario = pair_scenario(n, eps, lambda);
        const Simulator sim(cell_scenario, cell_scenario.policy);
        // Each cell gets its own block of trial seeds.
        const RngSeed cell_seed = derive_seed(base, cell++);
        FairnessReport report =
            estimate_order_probability(sim, OrderPair{1, 2}, n_trials, cell_seed, tc.confidence);
        report = certify_k_ordering_equality(report, eps, n, options);
        csv += fmt_double(eps) + ',' + fmt_double(n) + ',' +
               fmt_double(order_probability_at_gap(n, eps).p_low_first) + ',' +
               fmt_double(report.p_hat) + ',' + fmt_double(report.ratio_hat) + ',' +
               fmt_double(report.bound) + ',' + std::string(to_string(*report.verdict)) + '\n';
        code = combine(code, exit_for(*report.verdict));
      }
    }
    write_file(opts.out, "sweep.csv", csv);
    return code;
  });
}

int cmd_randomizer(const CommandOptions& opts, std::ostream& err) {
  return guarded(err, [&] {
    const ScenarioConfig scenario = load(opts);
    if (!scenario.multi_server) throw ConfigError("randomizer needs a multi_server block");
    const auto& ms = *scenario.multi_server;
    ReplicaSet replicas{ms.n, ms.f, {ms.byzantine.begin(), ms.byzantine.end()}};
    replicas.validate();
    NoiseSpec spec = scenario.noise;
    spec.sensitivity = scenario.lambda;
    const auto strategy = parse_byzantine_strategy(opts.strategy);
    const std::uint64_t instances = opts.instances.value_or(
        opts.trials.value_or(scenario.trials ? scenario.trials->n_trials : kDefaultInstances));
    const RngSeed seed{resolve_seed(opts, scenario.seed ? scenario.seed->value : 0)};
    const RandomizerSweep sweep = sweep_randomizer(replicas, spec, instances, seed, strategy);
    std::string csv = "strategy,instances,agreement_failures,mean,variance\n";
    csv += std::string(to_string(strategy)) + ',' + std::to_string(sweep.instances) + ',' +
           std::to_string(sweep.agreement_failures) + ',' + fmt_double(sweep.mean) + ',' +
           fmt_double(sweep.variance) + '\n';
    write_file(opts.out, "randomizer.csv", csv);
    return sweep.agreement_failures == 0 ? kPass : kFail;
  });
}

int cmd_quorum(const CommandOptions& opts, std::ostream& err) {
  return guarded(err, [&] {
    QuorumView view;
    std::size_t rt = 0;
    std::size_t ot = 0;
    if (!opts.views.empty()) {
      view = parse_view(read_file(opts.views, "views"));
    } else {
      const ScenarioConfig scenario = load(opts);
      if (!scenario.multi_server) throw ConfigError("quorum needs a multi_server block");
      const auto& ms = *scenario.multi_server;
      ReplicaSet{ms.n, ms.f, {ms.byzantine.begin(), ms.byzantine.end()}}.validate();
      rt = ms.received_threshold;
      ot = ms.ordered_threshold;
      const RngSeed seed{resolve_seed(opts, scenario.seed ? scenario.seed->value : 0)};
      const Trace trace = run(scenario, scenario.policy, seed);
      view = replicate_views(trace, ms.n, ms.f, ms.lags,
                             {ms.byzantine.begin(), ms.byzantine.end()}, seed);
      write_file(opts.out, "views.txt", serialize_view(view));
    }

    std::string text = format_verdict(check_prefix_consistency(view)) + '\n';
    bool ok = check_prefix_consistency(view).passed;
    std::vector<RequestId> prev_r;
    std::vector<RequestId> prev_o;
    bool monotone = true;
    Tick bad_tick = 0;
    for (Tick t = 0; t <= view.horizon; ++t) {
      auto r = global_received(view, t, rt);
      auto o = global_ordered(view, t, ot);
      if (monotone && (!std::includes(r.begin(), r.end(), prev_r.begin(), prev_r.end()) ||
                       !std::includes(o.begin(), o.end(), prev_o.begin(), prev_o.end()))) {
        monotone = false;
        bad_tick = t;
      }
      prev_r = std::move(r);
      prev_o = std::move(o);
    }
    text += monotone ? "quorum_monotone,pass\n"
                     : "quorum_monotone,fail,t=" + std::to_string(bad_tick) + '\n';
    ok = ok && monotone;
    text += "global_received," + std::to_string(prev_r.size()) + '\n';
    text += "global_ordered," + std::to_string(prev_o.size()) + '\n';
    write_file(opts.out, "verdicts.txt", text);
    return ok ? kPass : kFail;
  });
}

}  // namespace fairorder::cli
