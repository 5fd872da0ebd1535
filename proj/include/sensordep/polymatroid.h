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

#ifndef SENSORDEP_POLYMATROID_H_
#define SENSORDEP_POLYMATROID_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "sensordep/entropy_vector.h"

namespace sensordep {

enum class Axiom { kMonotonicity, kSubmodularity };

struct ViolatingPair {
  SubsetMask first;
  SubsetMask second;
  Axiom axiom = Axiom::kMonotonicity;
  // How far the inequality is violated, in bits.
  double amount = 0.0;
};

inline constexpr std::size_t kViolationCap = 100;

struct AxiomReport {
  bool is_polymatroid = true;
  // Largest g(I) - g(J) over I subset of J. Positive means violated.
  double worst_monotonicity_violation = 0.0;
  // Largest g(I u J) + g(I n J) - g(I) - g(J). Positive means violated.
  double worst_submodularity_violation = 0.0;
  // g(empty) = 0 holds by construction of EntropyVector.
  bool normalization_ok = true;
  double tolerance = 0.0;
  // First kViolationCap pairs that exceed the tolerance.
  std::vector<ViolatingPair> violating_pairs;
  std::uint64_t total_violations = 0;

  nlohmann::ordered_json ToJson() const;
};

// Exhaustively checks monotonicity over every comparable pair and
// submodularity over every pair of subsets. Requires a complete vector.
AxiomReport CheckPolymatroid(const EntropyVector& vec, double tolerance);

struct MatroidCandidate {
  // Integer ranks stored as an entropy vector of kind analytic.
  EntropyVector ranks;
  int rank = 0;
  double rounding_residual = 0.0;

  int RankOf(SubsetMask s) const;
  // mask,rank
  void WriteCsv(std::ostream& out) const;
};

struct MatroidRounding {
  std::optional<MatroidCandidate> candidate;
  // Set when rounding does not yield a matroid.
  std::string failure;
  double rounding_residual = 0.0;
};

// Divides every entry by `unit`, rounds to the nearest integer and verifies
// the matroid axioms exactly on the integers.
MatroidRounding RoundToMatroid(const EntropyVector& vec, double unit);

// sum_{i in I} g({i}) - g(I). Zero for mutually independent sensors.
double IndependenceDefect(const EntropyVector& vec, SubsetMask subset);

bool IsIndependent(const EntropyVector& vec, SubsetMask subset,
                   double tolerance);

}  // namespace sensordep

#endif  // SENSORDEP_POLYMATROID_H_
