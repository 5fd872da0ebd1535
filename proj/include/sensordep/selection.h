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

#ifndef SENSORDEP_SELECTION_H_
#define SENSORDEP_SELECTION_H_

#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "sensordep/alphabet.h"
#include "sensordep/entropy_vector.h"

namespace sensordep {

// Subset -> joint entropy in bits. Results are memoized, so repeated queries
// return identical values.
class EntropyOracle {
 public:
  virtual ~EntropyOracle() = default;

  virtual int num_sensors() const = 0;

  // The empty subset evaluates to 0.
  double Query(SubsetMask subset);

  // Number of Query calls so far, including cache hits.
  std::uint64_t evaluation_count() const { return queries_; }
  std::uint64_t distinct_evaluations() const { return cache_.size(); }

 protected:
  virtual double Compute(SubsetMask subset) = 0;

 private:
  std::unordered_map<std::uint64_t, double> cache_;
  std::uint64_t queries_ = 0;
};

// First-order empirical entropies of a matrix. The matrix must outlive the
// oracle.
class EmpiricalOracle : public EntropyOracle {
 public:
  explicit EmpiricalOracle(const SensorMatrix& matrix) : matrix_(matrix) {}
  int num_sensors() const override { return matrix_.num_sensors(); }

 protected:
  double Compute(SubsetMask subset) override;

 private:
  const SensorMatrix& matrix_;
};

// LZ78 estimates, parsed on demand.
class LzOracle : public EntropyOracle {
 public:
  explicit LzOracle(const SensorMatrix& matrix) : matrix_(matrix) {}
  int num_sensors() const override { return matrix_.num_sensors(); }

 protected:
  double Compute(SubsetMask subset) override;

 private:
  const SensorMatrix& matrix_;
};

// Lookups into a precomputed (e.g. analytic) vector.
class VectorOracle : public EntropyOracle {
 public:
  explicit VectorOracle(EntropyVector vec) : vec_(std::move(vec)) {}
  int num_sensors() const override { return vec_.num_sensors(); }

 protected:
  double Compute(SubsetMask subset) override { return vec_.at(subset); }

 private:
  EntropyVector vec_;
};

class FunctionOracle : public EntropyOracle {
 public:
  FunctionOracle(int num_sensors, std::function<double(SubsetMask)> fn)
      : num_sensors_(num_sensors), fn_(std::move(fn)) {}
  int num_sensors() const override { return num_sensors_; }

 protected:
  double Compute(SubsetMask subset) override { return fn_(subset); }

 private:
  int num_sensors_;
  std::function<double(SubsetMask)> fn_;
};

// Includes each of k sensors independently with probability q. Draws come
// from a mt19937_64 stream seeded with `seed`, converted to doubles with 53
// random bits, so results are identical on every platform.
SubsetMask RandomSelection(int k, double q, std::uint64_t seed);

struct SizedDraw {
  SubsetMask subset;
  std::uint64_t attempts = 0;
};

// Repeats RandomSelection rounds from one seeded stream until a draw of
// exactly `size` sensors appears.
SizedDraw RandomSelectionOfSize(int k, double q, int size, std::uint64_t seed,
                                std::uint64_t max_attempts = 1'000'000);

struct RandomSelectionGuarantee {
  // 1 - e^{-a q}
  double probability_floor = 0.0;
  // a + 2 + ln(r) / q disjoint bases needed for the floor to apply.
  double required_disjoint_bases = 0.0;
  // (2^k - 1) / sqrt(n); its constant is unknown.
  double order_term = 0.0;
  std::string caveat;
};

RandomSelectionGuarantee ComputeRandomSelectionGuarantee(double a, double q,
                                                         double rank, int k,
                                                         std::uint64_t n);

struct GreedyStep {
  int sensor = 0;  // 0-based
  double entropy = 0.0;
  double gain = 0.0;
};

struct GreedyTrace {
  std::vector<GreedyStep> steps;
  SubsetMask final_subset;
  double final_entropy = 0.0;
  // Stopped with sensors left because the best gain did not exceed epsilon.
  bool stopped_early = false;
  // Gain of the best rejected candidate; 0 when every sensor was taken.
  double last_best_gain = 0.0;
  double epsilon = 0.0;
  // k * epsilon
  double residual_bound = 0.0;

  nlohmann::ordered_json ToJson() const;
};

// Greedy maximization of the oracle from the empty set. A candidate is taken
// iff its entropy exceeds the current one by more than `epsilon`; ties in the
// argmax go to the lowest sensor index.
GreedyTrace GreedySelection(EntropyOracle& oracle, int k, double epsilon);

// The greedy chain without a stopping rule: entry m - 1 holds the greedy
// subset of size m.
std::vector<GreedyStep> GreedyChain(EntropyOracle& oracle, int k);

// k * epsilon. The vanishing sampling term is not estimated.
double EarlyStopGap(int k, double epsilon);
inline constexpr char kEarlyStopCaveat[] =
    "excludes an o(1) term from estimation noise; exact for analytic oracles";

}  // namespace sensordep

#endif  // SENSORDEP_SELECTION_H_
