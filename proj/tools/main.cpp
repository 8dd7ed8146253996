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

#include <omp.h>

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace fairorder::cli;
  CLI::App app{"fairorder: fair request ordering simulator and checkers"};
  app.require_subcommand(1);

  CommandOptions opts;
  std::uint64_t seed = 0;
  std::uint64_t trials = 0;
  std::uint64_t instances = 0;
  int jobs = 0;

  const auto common = [&](CLI::App* sub, bool needs_config) {
    auto* c = sub->add_option("--config", opts.config, "Scenario JSON file");
    if (needs_config) c->required();
    sub->add_option("--seed", seed, "Seed override (falls back to FAIRORDER_SEED)");
    sub->add_option("--out", opts.out, "Output directory")->capture_default_str();
    sub->add_option("--trials", trials, "Trial count override");
    sub->add_option("--jobs", jobs, "Worker threads");
  };

  auto* run = app.add_subcommand("run", "One engine run: trace.txt and verdicts.txt");
  common(run, true);
  auto* certify = app.add_subcommand("certify", "Monte Carlo fairness certification: report.csv");
  common(certify, true);
  auto* sweep = app.add_subcommand("sweep", "Epsilon by gap grid: sweep.csv");
  common(sweep, false);
  sweep->add_option("--grid", opts.grid, "Grid, e.g. \"eps=0.5,1,2;n=0,1,2,4\"");
  auto* check = app.add_subcommand("check", "Validity checkers over a trace file: verdicts.txt");
  common(check, false);
  check->add_option("--trace", opts.trace, "Trace file")->required();
  auto* randomizer = app.add_subcommand("randomizer", "Shared randomizer sweep: randomizer.csv");
  common(randomizer, true);
  randomizer->add_option("--strategy", opts.strategy, "constant | copy_correct | extreme")
      ->capture_default_str();
  randomizer->add_option("--instances", instances, "Instances to run");
  auto* quorum = app.add_subcommand("quorum", "Multi-server view checks: views.txt and verdicts.txt");
  common(quorum, false);
  quorum->add_option("--views", opts.views, "Check a serialized view file instead");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kConfig;
  }

  for (auto* sub : app.get_subcommands()) {
    if (sub->count("--seed")) opts.seed = seed;
    if (sub->count("--trials")) opts.trials = trials;
    if (sub->get_name() == "randomizer" && sub->count("--instances")) opts.instances = instances;
  }
  if (jobs > 0) omp_set_num_threads(jobs);

  if (run->parsed()) return cmd_run(opts, std::cerr);
  if (certify->parsed()) return cmd_certify(opts, std::cerr);
  if (sweep->parsed()) return cmd_sweep(opts, std::cerr);
  if (check->parsed()) return cmd_check(opts, std::cerr);
  if (randomizer->parsed()) return cmd_randomizer(opts, std::cerr);
  if (quorum->parsed()) return cmd_quorum(opts, std::cerr);
  return kConfig;
}
