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

#ifndef SENSORDEP_ENTROPY_VECTOR_H_
#define SENSORDEP_ENTROPY_VECTOR_H_

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "sensordep/alphabet.h"

namespace sensordep {

// Largest K for which the full subset lattice is evaluated by default.
inline constexpr int kDefaultLatticeCap = 24;

enum class EntropyKind { kEmpiricalFirstOrder, kLz78, kAnalytic };

std::string_view EntropyKindName(EntropyKind kind);
EntropyKind ParseEntropyKind(std::string_view name);

// Joint entropies in bits, indexed by non-empty sensor subsets. May be
// partially evaluated; `evaluated()` lists what has been computed.
class EntropyVector {
 public:
  EntropyVector(int num_sensors, EntropyKind kind);

  int num_sensors() const { return num_sensors_; }
  EntropyKind kind() const { return kind_; }

  void Set(SubsetMask subset, double bits);
  bool Has(SubsetMask subset) const;
  // The empty subset evaluates to 0. Missing subsets are an error.
  double at(SubsetMask subset) const;
  std::optional<double> Find(SubsetMask subset) const;

  std::vector<SubsetMask> evaluated() const;
  const std::map<SubsetMask, double>& values() const { return values_; }
  std::size_t num_evaluated() const { return values_.size(); }

  // True when all 2^K - 1 non-empty subsets are present.
  bool IsComplete() const;
  // Non-empty subsets that have not been evaluated, up to `limit`.
  std::vector<SubsetMask> MissingSubsets(std::size_t limit = 16) const;

  // {"k": K, "kind": "...", "values": {"<mask>": bits}}
  nlohmann::ordered_json ToJson() const;
  static EntropyVector FromJson(const nlohmann::json& json);
  // mask,members,entropy_bits
  void WriteCsv(std::ostream& out) const;

 private:
  int num_sensors_;
  EntropyKind kind_;
  std::map<SubsetMask, double> values_;
};

}  // namespace sensordep

#endif  // SENSORDEP_ENTROPY_VECTOR_H_
