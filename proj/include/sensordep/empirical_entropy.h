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

#ifndef SENSORDEP_EMPIRICAL_ENTROPY_H_
#define SENSORDEP_EMPIRICAL_ENTROPY_H_

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "sensordep/alphabet.h"
#include "sensordep/entropy_vector.h"

namespace sensordep {

// Empirical joint distribution of the sensors in `subset`, keyed by product
// symbol (see ProjectSubset). Unobserved symbols are absent.
struct JointType {
  SubsetMask subset;
  AlphabetSpec base_alphabet;
  std::map<ProductSymbol, std::uint64_t> counts;
  std::uint64_t total = 0;

  double Frequency(ProductSymbol symbol) const;
};

JointType ComputeJointType(const SensorMatrix& matrix, SubsetMask subset);

// Same tally for an already projected stream.
JointType TallySymbols(std::span<const ProductSymbol> symbols,
                       SubsetMask subset, const AlphabetSpec& base_alphabet);

// -sum_i (c_i/n) log2(c_i/n), with 0 log 0 = 0.
double EntropyBits(const JointType& dist);

// Entropy in bits of an arbitrary probability vector.
double EntropyBits(std::span<const double> probabilities);

// Sums out the members of dist.subset that are not in `sub`.
JointType Marginalize(const JointType& dist, SubsetMask sub);

// First-order empirical entropies of the requested subsets, or of all
// 2^K - 1 non-empty subsets when `subsets` is empty. The full lattice is
// refused above `lattice_cap` sensors.
EntropyVector EmpiricalEntropyVector(
    const SensorMatrix& matrix,
    const std::optional<std::vector<SubsetMask>>& subsets = std::nullopt,
    int lattice_cap = kDefaultLatticeCap);

// Shared by the empirical and LZ estimators: validates an explicit subset
// list or expands the full lattice.
std::vector<SubsetMask> ResolveSubsets(
    int num_sensors, const std::optional<std::vector<SubsetMask>>& subsets,
    int lattice_cap);

}  // namespace sensordep

#endif  // SENSORDEP_EMPIRICAL_ENTROPY_H_
