// Copyright 2026 The Sensordep Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line entry point for the sensordep toolkit.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "sensordep/cli.h"

namespace {

void AddIngestOptions(CLI::App* app, sensordep::RunConfig& c) {
  app->add_option("--input,-i", c.input, "Sensor CSV (wide or long layout)");
  app->add_option("--bins", c.bins, "Quantization bins for real readings")
      ->check(CLI::PositiveNumber);
  app->add_option("--alphabet", c.alphabet, "Force the alphabet size");
}

void AddCommon(CLI::App* app, sensordep::RunConfig& c) {
  app->add_option("--output-dir,--out,-o", c.output_dir, "Output directory")
      ->capture_default_str();
  app->add_option("--seed", c.seed, "Random seed");
}

}  // namespace

int main(int argc, char** argv) {
  sensordep::RunConfig config;
  CLI::App app{"Sensor dependency analysis, selection and fusion"};
  app.footer(sensordep::ExitCodeHelp());
  app.set_version_flag("--version", std::string(sensordep::kToolVersion));
  app.require_subcommand(1);

  CLI::App* analyze = app.add_subcommand(
      "analyze", "Estimate the entropy vector and check polymatroid axioms");
  AddIngestOptions(analyze, config);
  AddCommon(analyze, config);
  analyze->add_option("--estimator", config.estimator)
      ->check(CLI::IsMember({"empirical", "lz"}));
  analyze->add_option("--subset", config.subsets,
                      "Subset to evaluate, e.g. 1,3 or #5 (repeatable)");
  analyze->add_option("--lattice-cap", config.lattice_cap,
                      "Largest K for a full lattice");
  analyze->add_option("--tolerance", config.tolerance);
  analyze->add_flag("--matroid", config.matroid,
                    "Round to an integer matroid candidate");
  analyze->add_option("--round-unit", config.round_unit,
                      "Rounding unit in bits (default log2 alphabet)");
  analyze->add_option("--phrases", config.phrases,
                      "Write the LZ78 phrases of this subset");

  CLI::App* random = app.add_subcommand(
      "select-random", "Draw random sensor subsets");
  AddIngestOptions(random, config);
  AddCommon(random, config);
  random->add_option("--estimator", config.estimator)
      ->check(CLI::IsMember({"empirical", "lz"}));
  random->add_option("--q", config.q, "Inclusion probability")
      ->check(CLI::Range(0.0, 1.0));
  random->add_option("--trials", config.trials);
  random->add_option("--size", config.size, "Condition on the subset size");
  random->add_option("--k", config.num_sensors,
                     "Number of sensors when no input is given");
  random->add_option("--guarantee-a", config.guarantee_a,
                     "Disjoint basis count for the guarantee report");
  random->add_option("--rank", config.rank, "Rank for the guarantee report");

  CLI::App* greedy = app.add_subcommand(
      "select-greedy", "Greedy entropy-maximizing selection");
  AddIngestOptions(greedy, config);
  AddCommon(greedy, config);
  greedy->add_option("--estimator", config.estimator)
      ->check(CLI::IsMember({"empirical", "lz"}));
  greedy->add_option("--epsilon", config.epsilon, "Early-stop threshold")
      ->check(CLI::NonNegativeNumber);
  greedy->add_option("--spec", config.spec,
                     "Use the analytic vector of a source spec");

  CLI::App* fuse = app.add_subcommand(
      "fuse", "Exponential-weights fusion over sensors and synthesized ones");
  AddIngestOptions(fuse, config);
  AddCommon(fuse, config);
  fuse->add_option("--truth", config.truth, "Truth CSV with header t,x");
  fuse->add_option("--truth-sensor", config.truth_sensor,
                   "Use this (1-based) sensor as the truth");
  fuse->add_option("--family", config.family,
                   "none, pair-average, ordered-pairs, max:m, median:m");
  fuse->add_option("--loss", config.loss)
      ->check(CLI::IsMember({"hamming", "logloss"}));
  fuse->add_option("--delta", config.delta, "Log-loss clamp");
  fuse->add_option("--eta", config.eta, "Learning rate or 'auto'");
  fuse->add_flag("--doubling", config.doubling, "Doubling-trick restarts");
  fuse->add_flag("--binarize", config.binarize,
                 "Threshold competitor outputs at 0.5");
  fuse->add_flag("--lazy", config.lazy,
                 "Evaluate synthesized competitors on the fly");
  fuse->add_flag("!--no-weights", config.record_weights,
                 "Skip the weight history");

  CLI::App* simulate = app.add_subcommand(
      "simulate", "Generate synthetic sensor data from a source spec");
  AddCommon(simulate, config);
  simulate->add_option("--spec", config.spec, "Source spec JSON")->required();
  simulate->add_option("--n", config.n, "Number of time steps");
  simulate->add_option("--seed-override", config.seed_override,
                       "Replace the seed in the spec");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : sensordep::kExitUsage;
  }

  if (analyze->parsed()) config.command = sensordep::Command::kAnalyze;
  if (random->parsed()) config.command = sensordep::Command::kSelectRandom;
  if (greedy->parsed()) config.command = sensordep::Command::kSelectGreedy;
  if (fuse->parsed()) config.command = sensordep::Command::kFuse;
  if (simulate->parsed()) config.command = sensordep::Command::kSimulate;
  return sensordep::Run(config, std::cout, std::cerr);
}
