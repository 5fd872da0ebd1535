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

#ifndef SENSORDEP_CLI_H_
#define SENSORDEP_CLI_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "sensordep/error.h"

namespace sensordep {

inline constexpr char kToolVersion[] = "0.1.0";

enum class Command { kAnalyze, kSelectRandom, kSelectGreedy, kFuse, kSimulate };

std::string_view CommandName(Command command);

// Exit statuses. Listed in `--help`.
enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitUsage = 2,
  kExitIo = 3,
  kExitParse = 4,
  kExitValidation = 5,
  kExitEmptyInput = 6,
  kExitOverflow = 7,
  kExitInvalidArgument = 8,
};

int ExitCodeFor(ErrorKind kind);

// Fully resolved settings of one invocation. Serialized into manifest.json.
struct RunConfig {
  Command command = Command::kAnalyze;
  std::string input;
  std::string output_dir = "out";
  std::string estimator = "empirical";
  std::uint64_t seed = 0;

  // Ingestion.
  int bins = 2;
  std::optional<std::uint64_t> alphabet;

  // analyze
  std::vector<std::string> subsets;
  int lattice_cap = 24;
  double tolerance = 1e-9;
  bool matroid = false;
  std::optional<double> round_unit;
  std::optional<std::string> phrases;

  // select-random
  double q = 0.5;
  int trials = 1;
  std::optional<int> size;
  std::optional<int> num_sensors;
  std::optional<double> guarantee_a;
  std::optional<double> rank;

  // select-greedy
  double epsilon = 0.0;
  std::string spec;  // also used by simulate

  // fuse
  std::string truth;
  std::optional<int> truth_sensor;
  std::string family = "none";
  std::string loss = "logloss";
  double delta = 1e-3;
  std::string eta = "auto";
  bool doubling = false;
  bool binarize = false;
  bool record_weights = true;
  bool lazy = false;

  // simulate
  std::size_t n = 1000;
  std::optional<std::uint64_t> seed_override;

  nlohmann::ordered_json ToJson() const;
};

// Executes one command, writing artifacts under config.output_dir and a human
// summary to `out`. Failures print an error JSON object to `err` and return
// the matching exit code.
int Run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Help text footer describing exit codes.
std::string ExitCodeHelp();

}  // namespace sensordep

#endif  // SENSORDEP_CLI_H_
