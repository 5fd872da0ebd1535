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

#ifndef SENSORDEP_SOURCES_H_
#define SENSORDEP_SOURCES_H_

#include <cstdint>
#include <variant>
#include <vector>

#include "json.hpp"
#include "sensordep/alphabet.h"
#include "sensordep/entropy_vector.h"

namespace sensordep {

// Sensor definitions. Source indices are 0-based and must refer to sensors
// declared earlier in the same spec.
struct IidBase {
  std::vector<double> probabilities;
};
struct MarkovBase {
  std::vector<std::vector<double>> transition;
};
struct CopyOf {
  int source = 0;
};
// (a + b) mod alpha; plain XOR for bits.
struct XorOf {
  int first = 0;
  int second = 0;
};
// Shifted by `lag` steps; the first `lag` outputs are 0.
struct DelayOf {
  int source = 0;
  int lag = 1;
};
// With probability `flip` the symbol is shifted by a uniformly chosen
// non-zero offset mod alpha.
struct NoisyCopyOf {
  int source = 0;
  double flip = 0.0;
};
// table[sum_i digit_i * alpha^i], first listed source least significant.
struct FunctionOf {
  std::vector<int> sources;
  std::vector<Symbol> table;
};

using SensorDef = std::variant<IidBase, MarkovBase, CopyOf, XorOf, DelayOf,
                               NoisyCopyOf, FunctionOf>;

// Generative description of a synthetic sensor ensemble.
struct SourceSpec {
  AlphabetSpec alphabet;
  std::vector<SensorDef> sensors;
  std::uint64_t seed = 0;

  int num_sensors() const { return static_cast<int>(sensors.size()); }
  // No Markov bases and no delays.
  bool IsMemoryless() const;
  int MaxLag() const;

  // Throws kValidation on malformed distributions, bad references or tables.
  void Validate() const;

  static SourceSpec FromJson(const nlohmann::json& json);
  nlohmann::ordered_json ToJson() const;
};

SensorMatrix Generate(const SourceSpec& spec, std::size_t n);

// Exact entropy vector of a memoryless spec, by enumerating every joint
// outcome of the independent bases and noise variables.
EntropyVector AnalyticEntropyVector(const SourceSpec& spec);

// Stationary distribution of an irreducible, aperiodic chain.
std::vector<double> StationaryDistribution(
    const std::vector<std::vector<double>>& transition);

// sum_i pi_i H(P_i.), in bits per step.
double MarkovEntropyRate(const std::vector<std::vector<double>>& transition);

// Random memoryless spec over bits: a few iid bases followed by derived
// sensors (copies, XORs, noisy copies, lookup functions).
SourceSpec RandomMemorylessSpec(int num_sensors, std::uint64_t seed);

// Real-valued readings of a hidden bit sequence. The truth is a symmetric
// two-state Markov chain; sensor j reports low/high for 0/1 plus Gaussian
// noise, clamped to [0, 1], and with probability artifact_rate replaces the
// reading by a uniform draw.
struct NoisySensor {
  double sigma = 0.1;
  double artifact_rate = 0.0;
};

struct NoisyObservationScenario {
  double truth_stay = 0.9;
  double low = 0.2;
  double high = 0.8;
  std::vector<NoisySensor> sensors;
  std::uint64_t seed = 0;

  void Validate() const;
  static NoisyObservationScenario FromJson(const nlohmann::json& json);
  nlohmann::ordered_json ToJson() const;
};

struct NoisyObservations {
  std::vector<std::vector<double>> readings;  // sensor-major
  std::vector<std::uint8_t> truth;
};

NoisyObservations GenerateNoisyObservations(
    const NoisyObservationScenario& scenario, std::size_t n);

}  // namespace sensordep

#endif  // SENSORDEP_SOURCES_H_
