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

#include "sensordep/empirical_entropy.h"

#include <algorithm>
#include <cmath>

#include "sensordep/error.h"

namespace sensordep {

double JointType::Frequency(ProductSymbol symbol) const {
  auto it = counts.find(symbol);
  if (it == counts.end() || total == 0) return 0.0;
  return static_cast<double>(it->second) / static_cast<double>(total);
}

JointType TallySymbols(std::span<const ProductSymbol> symbols,
                       SubsetMask subset, const AlphabetSpec& base_alphabet) {
  JointType out{subset, base_alphabet, {}, symbols.size()};
  // Sorting keeps the tally O(n log n) regardless of the product alphabet
  // size; the observed support never exceeds n.
  std::vector<ProductSymbol> sorted(symbols.begin(), symbols.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    out.counts.emplace_hint(out.counts.end(), sorted[i], j - i);
    i = j;
  }
  return out;
}

JointType ComputeJointType(const SensorMatrix& matrix, SubsetMask subset) {
  ProjectedSequence seq = ProjectSubset(matrix, subset);
  return TallySymbols(seq.symbols, subset, matrix.alphabet());
}

double EntropyBits(const JointType& dist) {
  if (dist.total == 0) return 0.0;
  const double n = static_cast<double>(dist.total);
  double h = 0.0;
  for (const auto& [symbol, count] : dist.counts) {
    if (count == 0) continue;
    const double p = static_cast<double>(count) / n;
    h -= p * std::log2(p);
  }
  return std::max(h, 0.0);
}

double EntropyBits(std::span<const double> probabilities) {
  double h = 0.0;
  for (double p : probabilities) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return std::max(h, 0.0);
}

JointType Marginalize(const JointType& dist, SubsetMask sub) {
  if (sub.empty()) {
    Fail(ErrorKind::kInvalidArgument, "cannot marginalize onto the empty set");
  }
  if (!sub.IsSubsetOf(dist.subset)) {
    Fail(ErrorKind::kInvalidArgument,
         "{" + sub.MembersString() + "} is not a subset of {" +
             dist.subset.MembersString() + "}");
  }
  const std::vector<int> members = dist.subset.Indices();
  const int count = static_cast<int>(members.size());
  // Positions (digit indices) of the kept members inside dist's encoding.
  std::vector<int> kept;
  for (int pos = 0; pos < count; ++pos) {
    if (sub.Contains(members[pos])) kept.push_back(pos);
  }
  JointType out{sub, dist.base_alphabet, {}, dist.total};
  for (const auto& [symbol, c] : dist.counts) {
    const std::vector<Symbol> digits =
        DecodeProductSymbol(symbol, dist.base_alphabet, count);
    ProductSymbol projected = 0;
    ProductSymbol place = 1;
    for (int pos : kept) {
      projected += digits[pos] * place;
      place *= dist.base_alphabet.size;
    }
    out.counts[projected] += c;
  }
  return out;
}

std::vector<SubsetMask> ResolveSubsets(
    int num_sensors, const std::optional<std::vector<SubsetMask>>& subsets,
    int lattice_cap) {
  if (subsets) {
    for (SubsetMask s : *subsets) {
      if (s.empty()) {
        Fail(ErrorKind::kInvalidArgument, "empty subset requested");
      }
      if (!s.FitsIn(num_sensors)) {
        Fail(ErrorKind::kInvalidArgument,
             "subset {" + s.MembersString() + "} exceeds " +
                 std::to_string(num_sensors) + " sensors");
      }
    }
    return *subsets;
  }
  if (num_sensors > lattice_cap) {
    Fail(ErrorKind::kInvalidArgument,
         std::to_string(num_sensors) + " sensors exceed the lattice cap of " +
             std::to_string(lattice_cap) +
             "; pass an explicit subset list for on-demand evaluation");
  }
  return AllNonEmptySubsets(num_sensors);
}

EntropyVector EmpiricalEntropyVector(
    const SensorMatrix& matrix,
    const std::optional<std::vector<SubsetMask>>& subsets, int lattice_cap) {
  EntropyVector out(matrix.num_sensors(), EntropyKind::kEmpiricalFirstOrder);
  for (SubsetMask s : ResolveSubsets(matrix.num_sensors(), subsets,
                                     lattice_cap)) {
    out.Set(s, EntropyBits(ComputeJointType(matrix, s)));
  }
  return out;
}

}  // namespace sensordep
