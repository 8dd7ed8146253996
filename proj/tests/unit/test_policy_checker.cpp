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

#include <array>
#include <functional>

#include "doctest.h"
#include "fairorder/errors.hpp"
#include "fairorder/ordering_engine.hpp"
#include "fairorder/policy_checker.hpp"
#include "support.hpp"

using namespace fairorder;
using fairorder::testing::PolicyChoice;

namespace {

Trace fcfs_trace() {
  ScenarioConfig s;
  s.feature_count = 1;
  s.relevant = {0};
  s.requests = {Request{1, 1, {0.0}, 0, 0}, Request{2, 2, {0.0}, 1, 1},
                Request{3, 3, {0.0}, 2, 2}};
  s.delay.base = DelayDistribution::constant(1);
  return run(s, FcfsPolicy{}, RngSeed{0});
}

std::array<bool, 4> passes(const Trace& t) {
  const auto v = check_validity(t);
  return {v[0].passed, v[1].passed, v[2].passed, v[3].passed};
}

}  // namespace

TEST_CASE("validity on engine and empty traces") {
  const Trace t = fcfs_trace();
  for (const auto& v : check_validity(t)) CHECK(v.passed);
  const Trace empty = parse_trace("order:\n");
  for (const auto& v : check_validity(empty)) CHECK(v.passed);
  const Trace single = parse_trace("0,issue,1\n0,deliver,1\n0,order,1\norder:1\n");
  for (const auto& v : check_validity(single)) CHECK(v.passed);
  CHECK(check_validity(t)[0].property == Property::order_determinism);
  CHECK(check_validity(t)[3].property == Property::monotonic_order);
}

TEST_CASE("order determinism: ordering before delivery") {
  const Trace t = parse_trace("0,issue,1\n0,order,1\n2,deliver,1\norder:1\n");
  const Verdict v = check_order_determinism(t);
  CHECK_FALSE(v.passed);
  REQUIRE(v.witness);
  CHECK(v.witness->ids == std::vector<RequestId>{1});
  CHECK(v.witness->tick == 0);
  CHECK_FALSE(check_order_determinism(parse_trace("0,order,7\norder:7\n")).passed);
}

TEST_CASE("non-blocking: a delivered request never ordered") {
  const Trace t = parse_trace("0,issue,1\n0,issue,2\n1,deliver,1\n1,deliver,2\n1,order,1\norder:1\n");
  const Verdict v = check_non_blocking(t);
  CHECK_FALSE(v.passed);
  REQUIRE(v.witness);
  CHECK(v.witness->ids == std::vector<RequestId>{2});
}

TEST_CASE("consistency and monotonic order on forged reorders") {
  // Reorder with no new arrival: consistency.
  const Trace quiet = parse_trace(
      "horizon:3\n0,deliver,1\n0,deliver,2\n0,order,1\n0,order,2\n2,order,1\norder:2,1\n");
  CHECK_FALSE(check_consistency(quiet).passed);
  CHECK(check_monotonic_order(quiet).passed);
  // Reorder alongside an arrival: monotonic order.
  const Trace arrival = parse_trace(
      "horizon:3\n0,deliver,1\n0,deliver,2\n0,order,1\n0,order,2\n2,deliver,3\n2,order,1\n"
      "2,order,3\norder:2,1,3\n");
  CHECK(check_consistency(arrival).passed);
  const Verdict v = check_monotonic_order(arrival);
  CHECK_FALSE(v.passed);
  REQUIRE(v.witness);
  CHECK(v.witness->tick == 2);
  // Ordering an unreceived id during a quiet tick.
  const Trace ghost = parse_trace("horizon:2\n0,deliver,1\n0,order,1\n1,order,9\norder:1,9\n");
  CHECK_FALSE(check_consistency(ghost).passed);
}

TEST_CASE("strong non-blocking") {
  CHECK(check_strong_non_blocking(fcfs_trace()).passed);
  const Trace lazy = parse_trace("horizon:4\n0,deliver,1\n3,order,1\norder:1\n");
  CHECK(check_non_blocking(lazy).passed);
  CHECK_FALSE(check_strong_non_blocking(lazy).passed);
}

TEST_CASE("policy predicate") {
  CHECK_NOTHROW(PolicyPredicate({{1, 2}, {2, 3}}));
  const PolicyPredicate p({{1, 2}, {2, 3}});
  CHECK(p.must_precede(1, 3));
  CHECK_FALSE(p.must_precede(3, 1));
  CHECK(p.closure().size() == 3);
  CHECK_THROWS_AS(PolicyPredicate({{1, 1}}), ConfigError);
  CHECK_THROWS_AS(PolicyPredicate({{1, 2}, {2, 1}}), ConfigError);
  CHECK_THROWS_AS(PolicyPredicate({{1, 2}, {2, 3}, {3, 1}}), ConfigError);

  const FeaturePartition part(1, {0});
  const std::vector<Request> rs{Request{1, 1, {2.0}, 0, 0}, Request{2, 2, {1.0}, 0, 0},
                                Request{3, 3, {2.0}, 0, 0}};
  const auto rel = PolicyPredicate::from_relevance(rs, part);
  CHECK(rel.must_precede(2, 1));
  CHECK(rel.must_precede(2, 3));
  CHECK_FALSE(rel.must_precede(1, 3));
  CHECK(PolicyPredicate::from_relevance(rs, part, true).must_precede(1, 2));
}

TEST_CASE("policy compliance") {
  const Trace t = fcfs_trace();
  CHECK(check_policy_compliance(t, PolicyPredicate{}).passed);
  CHECK(check_policy_compliance(t, PolicyPredicate({{1, 2}, {2, 3}})).passed);
  const Verdict v = check_policy_compliance(t, PolicyPredicate({{3, 2}}));
  CHECK_FALSE(v.passed);
  CHECK(v.witness->ids == std::vector<RequestId>{3, 2});
  CHECK_THROWS_AS(check_policy_compliance(t, PolicyPredicate({{1, 99}})), ConfigError);
}

TEST_CASE("format_verdict") {
  CHECK(format_verdict(Verdict::pass(Property::consistency)) == "consistency,pass,");
  const std::string s =
      format_verdict(Verdict::fail(Property::non_blocking, Witness{4, {1, 2}, "never ordered"}));
  CHECK(s == "non_blocking,fail,t=4 ids=1;2 never ordered");
}

TEST_CASE("mutations trip exactly one checker") {
  using Forge = std::function<std::optional<Trace>(const Trace&)>;
  const std::array<Forge, 4> forges{fairorder::testing::forge_early_order,
                                    fairorder::testing::forge_dropped_order,
                                    fairorder::testing::forge_quiet_reorder,
                                    fairorder::testing::forge_arrival_reorder};
  std::array<int, 4> exercised{};
  RngStream rng(RngSeed{12});
  for (int i = 0; i < 90; ++i) {
    const auto choice = static_cast<PolicyChoice>(i % 3);
    const ScenarioConfig s = fairorder::testing::random_bounded_scenario(rng, choice);
    const Trace t = run(s, s.policy, RngSeed{static_cast<std::uint64_t>(i)});
    for (std::size_t m = 0; m < forges.size(); ++m) {
      const auto forged = forges[m](t);
      if (!forged) continue;
      ++exercised[m];
      const auto ok = passes(*forged);
      for (std::size_t c = 0; c < 4; ++c) {
        INFO("mutation " << m << " checker " << c << " scenario " << i);
        CHECK(ok[c] == (c != m));
      }
      // A forged trace survives a text round trip unchanged.
      CHECK(parse_trace(serialize_trace(*forged)) == *forged);
    }
  }
  for (int n : exercised) CHECK(n >= 20);
}

TEST_CASE("impossibility harness") {
  const std::vector<Request> rs{Request{1, 1, {1.0, 5.0}, 0, 0}, Request{2, 2, {2.0, 9.0}, 0, 0}};
  const PolicyPredicate pred({{1, 2}});

  SUBCASE("fcfs") {
    const auto out = impossibility_harness(FcfsPolicy{}, pred, rs, 2, {0, 1});
    CHECK(out.applicable);
    CHECK(out.r1 == 1);
    CHECK(out.r2 == 2);
    REQUIRE(out.r2_order_tick);
    CHECK(out.prefix_agrees);
    CHECK_FALSE(out.verdict.passed);
    CHECK(out.verdict.property == Property::policy_compliance);
  }
  SUBCASE("ttl") {
    const auto out = impossibility_harness(TtlPolicy{1}, pred, rs, 2, {0, 1});
    CHECK(out.prefix_agrees);
    CHECK_FALSE(out.verdict.passed);
  }
  SUBCASE("fair without a stability horizon") {
    ScenarioConfig s;
    s.feature_count = 2;
    s.relevant = {0, 1};
    s.noise.epsilon = 1.0;
    const PolicyKind fair = make_fair_policy(s);
    const auto out = impossibility_harness(fair, pred, rs, 2, {0, 1});
    CHECK(out.prefix_agrees);
    CHECK_FALSE(out.verdict.passed);
    // With gating on and no delay bound nothing is ever ordered.
    const auto gated = impossibility_harness(fair, pred, rs, 2, {0, 1}, true);
    CHECK_FALSE(gated.verdict.passed);
    CHECK(gated.verdict.property == Property::non_blocking);
  }
  SUBCASE("same-client pairs are not applicable") {
    std::vector<Request> same = rs;
    same[1].client_id = 1;
    CHECK_FALSE(impossibility_harness(FcfsPolicy{}, pred, same, 2, {0, 1}).applicable);
  }
  SUBCASE("empty predicate") {
    CHECK_THROWS_AS(impossibility_harness(FcfsPolicy{}, PolicyPredicate{}, rs, 2, {0, 1}),
                    ConfigError);
  }
}
