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

#include "sensordep/selection.h"

#include <cmath>
#include <random>

#include "sensordep/empirical_entropy.h"
#include "sensordep/error.h"
#include "sensordep/lz78.h"

namespace sensordep {
namespace {

double UniformDouble(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

SubsetMask DrawSubset(std::mt19937_64& rng, int k, double q) {
  std::uint64_t bits = 0;
  for (int i = 0; i < k; ++i) {
    if (UniformDouble(rng) < q) bits |= std::uint64_t{1} << i;
  }
  return SubsetMask(bits);
}

void CheckSelectionArgs(int k, double q) {
  if (k < 1 || k > kMaxSensors) {
    Fail(ErrorKind::kInvalidArgument, "sensor count must be in 1.." +
                                          std::to_string(kMaxSensors));
  }
  if (!(q >= 0.0 && q <= 1.0)) {
    Fail(ErrorKind::kInvalidArgument, "q must lie in [0, 1]");
  }
}

// Best candidate outside `current`; lowest index wins ties.
GreedyStep BestCandidate(EntropyOracle& oracle, int k, SubsetMask current,
                         double current_entropy) {
  GreedyStep best{-1, 0.0, 0.0};
  for (int j = 0; j < k; ++j) {
    if (current.Contains(j)) continue;
    const double h = oracle.Query(current.With(j));
    if (best.sensor < 0 || h > best.entropy) best = {j, h, 0.0};
  }
  best.gain = best.entropy - current_entropy;
  return best;
}

}  // namespace

double EntropyOracle::Query(SubsetMask subset) {
  ++queries_;
  if (subset.empty()) return 0.0;
  if (!subset.FitsIn(num_sensors())) {
    Fail(ErrorKind::kInvalidArgument,
         "oracle query {" + subset.MembersString() + "} exceeds " +
             std::to_string(num_sensors()) + " sensors");
  }
  auto it = cache_.find(subset.bits());
  if (it != cache_.end()) return it->second;
  const double value = Compute(subset);
  cache_.emplace(subset.bits(), value);
  return value;
}

double EmpiricalOracle::Compute(SubsetMask subset) {
  return EntropyBits(ComputeJointType(matrix_, subset));
}

double LzOracle::Compute(SubsetMask subset) {
  ProjectedSequence seq = ProjectSubset(matrix_, subset);
  return LzEntropyEstimate(seq.symbols, seq.alphabet);
}

SubsetMask RandomSelection(int k, double q, std::uint64_t seed) {
  CheckSelectionArgs(k, q);
  std::mt19937_64 rng(seed);
  return DrawSubset(rng, k, q);
}

SizedDraw RandomSelectionOfSize(int k, double q, int size, std::uint64_t seed,
                                std::uint64_t max_attempts) {
  CheckSelectionArgs(k, q);
  if (size < 0 || size > k) {
    Fail(ErrorKind::kInvalidArgument, "requested size outside 0..k");
  }
  if ((q == 0.0 && size != 0) || (q == 1.0 && size != k)) {
    Fail(ErrorKind::kInvalidArgument,
         "q = " + std::to_string(q) + " can never yield size " +
             std::to_string(size));
  }
  std::mt19937_64 rng(seed);
  for (std::uint64_t attempt = 1; attempt <= max_attempts; ++attempt) {
    SubsetMask s = DrawSubset(rng, k, q);
    if (s.size() == size) return {s, attempt};
  }
  Fail(ErrorKind::kValidation, "no draw of the requested size after " +
                                   std::to_string(max_attempts) + " attempts");
}

RandomSelectionGuarantee ComputeRandomSelectionGuarantee(double a, double q,
                                                         double rank, int k,
                                                         std::uint64_t n) {
  if (!(a > 0.0)) Fail(ErrorKind::kInvalidArgument, "a must be positive");
  if (!(q > 0.0 && q <= 1.0)) {
    Fail(ErrorKind::kInvalidArgument, "q must lie in (0, 1]");
  }
  if (!(rank >= 1.0)) Fail(ErrorKind::kInvalidArgument, "rank must be >= 1");
  if (k < 1 || k >= 63 || n < 1) {
    Fail(ErrorKind::kInvalidArgument, "bad sensor count or length");
  }
  RandomSelectionGuarantee g;
  g.probability_floor = 1.0 - std::exp(-a * q);
  g.required_disjoint_bases = a + 2.0 + std::log(rank) / q;
  g.order_term = static_cast<double>((std::uint64_t{1} << k) - 1) /
                 std::sqrt(static_cast<double>(n));
  g.caveat =
      "heuristic: the order term's constant is unknown and is not subtracted "
      "from the floor";
  return g;
}

GreedyTrace GreedySelection(EntropyOracle& oracle, int k, double epsilon) {
  if (k < 1 || k > oracle.num_sensors()) {
    Fail(ErrorKind::kInvalidArgument, "greedy k outside the oracle's range");
  }
  if (!(epsilon >= 0.0)) {
    Fail(ErrorKind::kInvalidArgument, "epsilon must be non-negative");
  }
  GreedyTrace trace;
  trace.epsilon = epsilon;
  trace.residual_bound = EarlyStopGap(k, epsilon);
  SubsetMask current;
  double entropy = 0.0;
  while (current.size() < k) {
    const GreedyStep best = BestCandidate(oracle, k, current, entropy);
    if (!(best.entropy > entropy + epsilon)) {
      trace.stopped_early = true;
      trace.last_best_gain = best.gain;
      break;
    }
    current = current.With(best.sensor);
    entropy = best.entropy;
    trace.steps.push_back(best);
  }
  trace.final_subset = current;
  trace.final_entropy = entropy;
  return trace;
}

std::vector<GreedyStep> GreedyChain(EntropyOracle& oracle, int k) {
  if (k < 1 || k > oracle.num_sensors()) {
    Fail(ErrorKind::kInvalidArgument, "greedy k outside the oracle's range");
  }
  std::vector<GreedyStep> chain;
  SubsetMask current;
  double entropy = 0.0;
  for (int m = 0; m < k; ++m) {
    const GreedyStep best = BestCandidate(oracle, k, current, entropy);
    current = current.With(best.sensor);
    entropy = best.entropy;
    chain.push_back(best);
  }
  return chain;
}

double EarlyStopGap(int k, double epsilon) {
  if (!(epsilon >= 0.0)) {
    Fail(ErrorKind::kInvalidArgument, "epsilon must be non-negative");
  }
  return k * epsilon;
}

nlohmann::ordered_json GreedyTrace::ToJson() const {
  nlohmann::ordered_json steps_json = nlohmann::ordered_json::array();
  for (const GreedyStep& s : steps) {
    steps_json.push_back(
        {{"sensor", s.sensor + 1}, {"entropy", s.entropy}, {"gain", s.gain}});
  }
  return {{"steps", std::move(steps_json)},
          {"final_subset", final_subset.bits()},
          {"final_members", final_subset.MembersString()},
          {"final_entropy", final_entropy},
          {"stopped_early", stopped_early},
          {"last_best_gain", last_best_gain},
          {"epsilon", epsilon},
          {"residual_bound", residual_bound},
          {"residual_caveat", kEarlyStopCaveat}};
}

}  // namespace sensordep
