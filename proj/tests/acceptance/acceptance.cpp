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

// Runs every acceptance criterion and prints one line per criterion.
// Exit status is non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "fairorder/fairness_stats.hpp"
#include "fairorder/multi_server.hpp"
#include "fairorder/noise_mechanisms.hpp"
#include "fairorder/ordering_engine.hpp"
#include "fairorder/policy_checker.hpp"
#include "fairorder/shared_randomizer.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using namespace fairorder;
namespace ft = fairorder::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Notes {
 public:
  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass_ = false;
      if (failures_++ < 5) fails_ += (fails_.empty() ? "" : "; ") + what;
    }
  }
  void note(const std::string& s) { detail_ += (detail_.empty() ? "" : ", ") + s; }
  Outcome done() const {
    if (pass_) return {true, detail_};
    return {false, fails_ + (failures_ > 5 ? " (+" + std::to_string(failures_ - 5) + " more)" : "") +
                       (detail_.empty() ? "" : " | " + detail_)};
  }

 private:
  bool pass_ = true;
  int failures_ = 0;
  std::string fails_;
  std::string detail_;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

constexpr CertifyOptions kWide{3.0, 0.05};

Outcome closed_form_vs_oracle() {
  Notes n;
  double worst = 0.0;
  for (double gap : {0.0, 0.5, 1.0, 2.0, 4.0}) {
    const double lib = laplace_order_probability(0.0, gap, 1.0);
    const double oracle = ft::quadrature_order_probability(0.0, gap, 1.0);
    worst = std::max(worst, std::fabs(lib - oracle));
    n.check(std::fabs(lib - oracle) <= 1e-8, "n=" + fmt("%g", gap) + " off by " + fmt("%.3g", lib - oracle));
  }
  n.note("max |diff| " + fmt("%.2e", worst));
  return n.done();
}

Outcome gap_identity() {
  Notes n;
  double worst = 0.0;
  for (double gap : {0.0, 0.5, 1.0, 2.0, 4.0}) {
    for (double eps : {0.5, 1.0, 2.0}) {
      for (double lambda : {0.5, 1.0, 3.0}) {
        const double a = order_probability_at_gap(gap, eps).p_low_first;
        const double b = laplace_order_probability(0.0, gap * lambda, lambda / eps);
        worst = std::max(worst, std::fabs(a - b));
        n.check(std::fabs(a - b) <= 1e-12, "cell n=" + fmt("%g", gap) + " eps=" + fmt("%g", eps));
      }
    }
  }
  n.note("45 cells, max |diff| " + fmt("%.2e", worst));
  return n.done();
}

Outcome ratio_bound() {
  Notes n;
  RngStream rng(RngSeed{20260101});
  int violations = 0;
  for (int i = 0; i < 10'000; ++i) {
    const double gap = rng.uniform(0.0, 10.0);
    const double eps = 4.0 * (1.0 - rng.uniform(0.0, 1.0));  // (0, 4]
    if (!(dp_ratio_bound(gap, eps) <= std::exp(gap * eps))) ++violations;
  }
  n.check(violations == 0, std::to_string(violations) + " draws exceed exp(n eps)");
  n.note("10000 draws");
  return n.done();
}

Outcome end_to_end_monte_carlo() {
  Notes n;
  const std::uint64_t trials = 1'000'000;
  const double tol = 3 * 0.0016276;
  const double targets[] = {0.5, ft::quadrature_order_probability(0.0, 1.0, 1.0)};
  const double gaps[] = {0.0, 1.0};
  for (int i = 0; i < 2; ++i) {
    const ScenarioConfig s = cli::pair_scenario(gaps[i], 1.0);
    const auto r = estimate_order_probability(s, s.policy, {1, 2}, trials, RngSeed{4000u + i});
    n.check(std::fabs(r.p_hat - targets[i]) <= tol,
            "n=" + fmt("%g", gaps[i]) + " p_hat " + fmt("%.6f", r.p_hat));
    n.note("n=" + fmt("%g", gaps[i]) + " p_hat " + fmt("%.6f", r.p_hat) + " vs " + fmt("%.7f", targets[i]));
  }
  return n.done();
}

Outcome k_sweep() {
  Notes n;
  const std::uint64_t trials = 100'000;
  std::uint64_t cell = 0;
  int passes = 0;
  for (double eps : {0.5, 1.0, 2.0}) {
    for (double gap : {0.0, 1.0, 2.0, 4.0}) {
      const ScenarioConfig s = cli::pair_scenario(gap, eps);
      auto r = estimate_order_probability(s, s.policy, {1, 2}, trials,
                                          derive_seed(RngSeed{5000}, cell++));
      r = certify_k_ordering_equality(r, eps, gap, kWide);
      const bool ok = *r.verdict == StatVerdict::pass;
      passes += ok ? 1 : 0;
      n.check(ok, "eps=" + fmt("%g", eps) + " n=" + fmt("%g", gap) + " " +
                      std::string(to_string(*r.verdict)));
    }
  }
  n.note(std::to_string(passes) + "/12 cells pass");
  const ScenarioConfig wrong = cli::pair_scenario(2.0, 1.0);
  auto r = estimate_order_probability(wrong, wrong.policy, {1, 2}, trials, RngSeed{5100});
  r = certify_k_ordering_equality(r, 1.0, 1.0, kWide);
  n.check(*r.verdict == StatVerdict::fail, "wrong-k cell gave " + std::string(to_string(*r.verdict)));
  n.note("wrong-k cell " + std::string(to_string(*r.verdict)));
  return n.done();
}

Outcome uniform_delta_case() {
  Notes n;
  ScenarioConfig s;
  s.feature_count = 2;
  s.relevant = {0};
  s.lambda = 5.0;
  s.assumption1 = true;
  s.requests = {Request{1, 1, {0.0, 0.0}, 0, 0}, Request{2, 2, {0.0, 5.0}, 0, 0}};
  s.noise.kind = NoiseKind::uniform;
  s.noise.bound = 100.0;
  const double delta = uniform_delta(5.0, 100.0);
  s.noise.delta = delta;
  s.policy = make_fair_policy(s);
  s.validate();
  auto r = estimate_order_probability(s, s.policy, {1, 2}, 1'000'000, RngSeed{6000});
  const double spread = std::fabs(2 * r.p_hat - 1);
  n.check(std::fabs(delta - 0.05) < 1e-15, "delta " + fmt("%g", delta));
  n.check(spread <= 0.05 + 3 * r.confidence_radius, "|2p-1| " + fmt("%.5f", spread));
  r = certify_additive(r, 0.0, delta, kWide);
  n.check(*r.verdict == StatVerdict::pass, "additive certifier " + std::string(to_string(*r.verdict)));
  n.note("|2p-1| " + fmt("%.5f", spread) + ", additive " + std::string(to_string(*r.verdict)));
  return n.done();
}

Outcome validity_suite() {
  Notes n;
  RngStream rng(RngSeed{7000});
  using Forge = std::function<std::optional<Trace>(const Trace&)>;
  const Forge forges[4] = {ft::forge_early_order, ft::forge_dropped_order, ft::forge_quiet_reorder,
                           ft::forge_arrival_reorder};
  int runs = 0;
  int exercised[4] = {0, 0, 0, 0};
  for (auto choice : {ft::PolicyChoice::fcfs, ft::PolicyChoice::ttl, ft::PolicyChoice::fair}) {
    for (int i = 0; i < 100; ++i) {
      const ScenarioConfig s = ft::random_bounded_scenario(rng, choice);
      const Trace t = run(s, s.policy, RngSeed{static_cast<std::uint64_t>(i)});
      ++runs;
      for (const auto& v : check_validity(t)) {
        n.check(v.passed, ft::to_string(choice) + " scenario " + std::to_string(i) + " " +
                              std::string(to_string(v.property)));
      }
      for (int m = 0; m < 4; ++m) {
        const auto forged = forges[m](t);
        if (!forged) continue;
        ++exercised[m];
        const auto verdicts = check_validity(*forged);
        for (int c = 0; c < 4; ++c) {
          n.check(verdicts[c].passed == (c != m),
                  "mutation " + std::to_string(m) + " vs checker " + std::to_string(c));
        }
      }
    }
  }
  for (int m = 0; m < 4; ++m) n.check(exercised[m] > 0, "mutation " + std::to_string(m) + " never applied");
  n.note(std::to_string(runs) + " runs, mutations applied " + std::to_string(exercised[0]) + "/" +
         std::to_string(exercised[1]) + "/" + std::to_string(exercised[2]) + "/" +
         std::to_string(exercised[3]));
  return n.done();
}

Outcome impossibility() {
  Notes n;
  const std::vector<Request> rs{Request{1, 1, {1.0, 0.0}, 0, 0}, Request{2, 2, {2.0, 0.0}, 0, 0}};
  const PolicyPredicate pred({{1, 2}});
  ScenarioConfig fs;
  fs.feature_count = 2;
  fs.relevant = {0};
  fs.noise.epsilon = 1.0;
  const std::pair<const char*, PolicyKind> policies[] = {
      {"fcfs", FcfsPolicy{}}, {"ttl", TtlPolicy{2}}, {"fair", make_fair_policy(fs)}};
  for (const auto& [name, policy] : policies) {
    const auto out = impossibility_harness(policy, pred, rs, 2, {0});
    const bool caught = !out.verdict.passed && (out.verdict.property == Property::policy_compliance ||
                                                out.verdict.property == Property::non_blocking);
    n.check(out.applicable, std::string(name) + " not applicable");
    n.check(caught, std::string(name) + " sigma_both passed");
    n.check(out.r2_order_tick.has_value() && out.prefix_agrees,
            std::string(name) + " executions diverge before r2 is ordered");
    n.note(std::string(name) + ": " + std::string(to_string(out.verdict.property)) + " fails");
  }
  return n.done();
}

Outcome shared_randomizer() {
  Notes n;
  NoiseSpec spec;
  spec.epsilon = 1.0;
  spec.sensitivity = 1.0;
  RngStream rng(RngSeed{9000});
  int agreed = 0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const ReplicaSet rs{4, 1, {static_cast<std::size_t>(rng.below(4))}};
    const auto strategy = static_cast<ByzantineStrategy>(i % 3);
    const auto out = run_randomizer(rs, spec, i, RngSeed{9000 + i}, strategy);
    const bool ok = check_agreement(out, rs);
    agreed += ok ? 1 : 0;
    n.check(ok, "run " + std::to_string(i));
  }
  const auto sweep = sweep_randomizer(ReplicaSet{4, 1, {3}}, spec, 100'000, RngSeed{9001},
                                      ByzantineStrategy::extreme_value);
  const double target = 2.0;  // 2 b^2 with b = 1
  n.check(std::fabs(sweep.mean) <= 0.02, "mean " + fmt("%.4f", sweep.mean));
  n.check(std::fabs(sweep.variance - target) <= 0.02 * target, "variance " + fmt("%.4f", sweep.variance));
  n.note(std::to_string(agreed) + "/1000 agree, mean " + fmt("%.4f", sweep.mean) + ", variance " +
         fmt("%.4f", sweep.variance));
  return n.done();
}

Outcome multi_server() {
  Notes n;
  RngStream rng(RngSeed{10000});
  int consistent = 0;
  for (int i = 0; i < 100; ++i) {
    const auto choice = static_cast<ft::PolicyChoice>(i % 3);
    const ScenarioConfig s = ft::random_bounded_scenario(rng, choice);
    const Trace t = run(s, s.policy, RngSeed{static_cast<std::uint64_t>(i)});
    std::vector<Tick> lags;
    for (int k = 0; k < 4; ++k) lags.push_back(static_cast<Tick>(rng.below(4)));
    const std::set<std::size_t> byz = i % 2 ? std::set<std::size_t>{rng.below(4)} : std::set<std::size_t>{};
    const QuorumView v = replicate_views(t, 4, 1, lags, byz, RngSeed{static_cast<std::uint64_t>(i)});
    const bool ok = check_prefix_consistency(v).passed;
    consistent += ok ? 1 : 0;
    n.check(ok, "scenario " + std::to_string(i) + " not prefix consistent");
    std::vector<RequestId> pr;
    std::vector<RequestId> po;
    for (Tick tick = 0; tick <= v.horizon; ++tick) {
      const auto r = global_received(v, tick);
      const auto o = global_ordered(v, tick);
      n.check(std::includes(r.begin(), r.end(), pr.begin(), pr.end()) &&
                  std::includes(o.begin(), o.end(), po.begin(), po.end()),
              "scenario " + std::to_string(i) + " quorum shrinks at t=" + std::to_string(tick));
      pr = r;
      po = o;
    }
  }
  // Forged swap of the first two ordered ids on one correct server.
  RngStream frng(RngSeed{10001});
  const ScenarioConfig s = ft::random_bounded_scenario(frng, ft::PolicyChoice::fcfs);
  const Trace t = run(s, s.policy, RngSeed{1});
  QuorumView v = replicate_views(t, 4, 1, std::vector<Tick>{0, 1, 0, 2}, {}, RngSeed{1});
  auto& ord = v.servers[1].ordered;
  bool swapped = false;
  if (ord.size() >= 2) {
    std::swap(ord[0].id, ord[1].id);
    swapped = ord[0].id != ord[1].id;
  }
  n.check(swapped, "no site for the forged swap");
  n.check(!check_prefix_consistency(v).passed, "forged swap not caught");
  n.note(std::to_string(consistent) + "/100 consistent, forged swap caught");
  return n.done();
}

ScenarioConfig bribery_scenario(double bribe) {
  ScenarioConfig s;
  s.feature_count = 2;
  s.relevant = {0};
  s.adversary_feature = 1;
  s.mode = ScenarioMode::fee;
  s.lambda = 1.0;
  s.assumption1 = true;
  s.requests = {Request{1, 1, {50.0, 0.0}, 0, 0}, Request{2, 2, {50.0, 0.0}, 0, 0}};
  s.adversaries = {ByzantineClientSpec{1, 0, bribe}};
  s.noise.epsilon = 1.0;
  s.noise.sensitivity = 1.0;
  s.policy = make_fair_policy(s);
  s.validate();
  return s;
}

Outcome bribery() {
  Notes n;
  const ScenarioConfig s = bribery_scenario(1.0);
  n.check(lint_scenario(s).assumption1_ok, "bribe within lambda flagged");
  const auto r = estimate_order_probability(s, s.policy, {1, 2}, 1'000'000, RngSeed{11000});
  n.check(r.p_hat <= 0.7241 + 3 * r.confidence_radius, "briber wins " + fmt("%.5f", r.p_hat));
  const ScenarioLint lint = lint_scenario(bribery_scenario(3.0));
  n.check(!lint.assumption1_ok, "bribe of 3 lambda not flagged");
  n.note("briber wins " + fmt("%.5f", r.p_hat) + ", 3x bribe flagged: " +
         (lint.assumption1_ok ? "no" : "yes"));
  return n.done();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  Notes n;
  const fs::path root = fs::temp_directory_path() / "fairorder_acceptance_determinism";
  fs::remove_all(root);
  fs::create_directories(root);
  std::ofstream(root / "scenario.json") << R"({
    "feature_count": 3, "relevant": [0, 2], "delay_feature": 1, "lambda": 2,
    "assumption1": true,
    "clients": [
      {"id": 1, "requests": [{"id": 1, "features": [1, 0, 0], "issue_tick": 0},
                             {"id": 2, "features": [3, 0, 2], "issue_tick": 2}]},
      {"id": 2, "requests": [{"id": 3, "features": [2, 0, 1], "issue_tick": 1}]},
      {"id": 3, "requests": [{"id": 4, "features": [0, 0, 4], "issue_tick": 3}]}
    ],
    "delay": {"kind": "uniform", "lo": 0, "hi": 2},
    "noise": {"kind": "laplace", "epsilon": 1},
    "policy": {"kind": "fair"},
    "trials": {"n_trials": 20000, "base_seed": 3},
    "sweep": {"epsilon": [0.5, 1], "n": [0, 1, 2]},
    "seed": 12
  })";
  std::ostringstream err;
  for (const char* run_dir : {"a", "b"}) {
    cli::CommandOptions o;
    o.config = root / "scenario.json";
    o.out = root / run_dir;
    o.seed = 12;
    n.check(cli::cmd_run(o, err) == cli::kPass, std::string("run ") + run_dir + " failed");
    const int code = cli::cmd_sweep(o, err);
    n.check(code == cli::kPass || code == cli::kInconclusive, std::string("sweep ") + run_dir + " failed");
  }
  for (const char* f : {"trace.txt", "verdicts.txt", "sweep.csv"}) {
    const std::string a = slurp(root / "a" / f);
    n.check(!a.empty() && a == slurp(root / "b" / f), std::string(f) + " differs");
  }
  n.note("trace.txt, verdicts.txt, sweep.csv identical");
  if (!err.str().empty()) n.note("stderr: " + err.str());
  fs::remove_all(root);
  return n.done();
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  Outcome (*fn)();
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {1, "closed form vs quadrature oracle", 1.0, closed_form_vs_oracle},
      {2, "gap formula identity", 1.0, gap_identity},
      {3, "ratio bound", 1.0, ratio_bound},
      {4, "end-to-end monte carlo", 120.0, end_to_end_monte_carlo},
      {5, "k-scaled certification sweep", 180.0, k_sweep},
      {6, "uniform noise delta", 0.0, uniform_delta_case},
      {7, "validity suite and mutations", 0.0, validity_suite},
      {8, "impossibility demonstration", 0.0, impossibility},
      {9, "shared randomizer", 0.0, shared_randomizer},
      {10, "multi-server views", 0.0, multi_server},
      {11, "bribery", 0.0, bribery},
      {12, "determinism", 0.0, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.fn();
    } catch (const std::exception& e) {
      out = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0.0 && secs > c.budget_s) {
      out.pass = false;
      out.detail += " | over budget " + fmt("%.0fs", c.budget_s);
    }
    failed += out.pass ? 0 : 1;
    std::printf("criterion %d: %s  %s (%s) [%.2fs]\n", c.id, out.pass ? "PASS" : "FAIL", c.name,
                out.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d/12 criteria passed\n", 12 - failed);
  return failed == 0 ? 0 : 1;
}
