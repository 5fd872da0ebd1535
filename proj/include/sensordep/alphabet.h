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

#ifndef SENSORDEP_ALPHABET_H_
#define SENSORDEP_ALPHABET_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace sensordep {

// Raw per-sensor symbols are 32-bit; symbols over a product alphabet are
// 64-bit.
using Symbol = std::uint32_t;
using ProductSymbol = std::uint64_t;

// A finite alphabet {0, ..., size - 1}.
struct AlphabetSpec {
  std::uint64_t size = 2;

  // Size-1 alphabets are legal but carry zero entropy.
  bool degenerate() const { return size < 2; }
  bool Contains(std::uint64_t symbol) const { return symbol < size; }

  friend bool operator==(const AlphabetSpec&, const AlphabetSpec&) = default;
};

inline constexpr int kMaxSensors = 64;

// A subset of sensors {1..K}. Bit (i - 1) is set iff sensor i is a member.
class SubsetMask {
 public:
  constexpr SubsetMask() = default;
  constexpr explicit SubsetMask(std::uint64_t bits) : bits_(bits) {}

  // Builds a mask from 1-based sensor numbers.
  static SubsetMask FromMembers(std::span<const int> members);
  static SubsetMask FromMembers(std::initializer_list<int> members) {
    return FromMembers(std::span<const int>(members.begin(), members.size()));
  }
  // All sensors 1..k.
  static SubsetMask Full(int k);
  // Parses "1,2,5" (1-based members) or a decimal mask prefixed with '#'.
  static SubsetMask Parse(const std::string& text);

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  int size() const;

  // 0-based sensor index.
  constexpr bool Contains(int index) const {
    return (bits_ >> index) & std::uint64_t{1};
  }
  constexpr bool IsSubsetOf(SubsetMask other) const {
    return (bits_ & ~other.bits_) == 0;
  }
  constexpr bool FitsIn(int k) const {
    return k >= kMaxSensors || (bits_ >> k) == 0;
  }
  constexpr SubsetMask With(int index) const {
    return SubsetMask(bits_ | (std::uint64_t{1} << index));
  }
  constexpr SubsetMask operator|(SubsetMask o) const {
    return SubsetMask(bits_ | o.bits_);
  }
  constexpr SubsetMask operator&(SubsetMask o) const {
    return SubsetMask(bits_ & o.bits_);
  }

  // Ascending 0-based sensor indices.
  std::vector<int> Indices() const;
  // "1 2 5": 1-based, space separated.
  std::string MembersString() const;

  friend constexpr bool operator==(SubsetMask, SubsetMask) = default;
  friend constexpr auto operator<=>(SubsetMask a, SubsetMask b) {
    return a.bits_ <=> b.bits_;
  }

 private:
  std::uint64_t bits_ = 0;
};

// All non-empty subsets of k sensors, in increasing mask order.
std::vector<SubsetMask> AllNonEmptySubsets(int k);

// K sensor streams of n symbols over one shared alphabet. Immutable once
// constructed.
class SensorMatrix {
 public:
  // `rows[i]` is the stream of sensor i + 1. Validates that all rows have the
  // same non-zero length and every symbol lies in the alphabet.
  SensorMatrix(std::vector<std::vector<Symbol>> rows, AlphabetSpec alphabet);

  int num_sensors() const { return num_sensors_; }
  std::size_t num_steps() const { return num_steps_; }
  const AlphabetSpec& alphabet() const { return alphabet_; }

  // 0-based sensor index.
  std::span<const Symbol> row(int index) const;
  Symbol at(int index, std::size_t t) const {
    return data_[static_cast<std::size_t>(index) * num_steps_ + t];
  }

  // Sensors whose streams use a single symbol only.
  std::vector<int> ConstantSensors() const;

 private:
  int num_sensors_ = 0;
  std::size_t num_steps_ = 0;
  AlphabetSpec alphabet_;
  std::vector<Symbol> data_;
};

// Maps readings in [0, 1] to floor(v * bins), with 1.0 landing in the top
// bin.
std::vector<Symbol> QuantizeReadings(std::span<const double> values, int bins);

struct ProjectedSequence {
  std::vector<ProductSymbol> symbols;
  AlphabetSpec alphabet;
};

// alpha^count, or an overflow error if it does not fit in a ProductSymbol.
AlphabetSpec ProductAlphabet(const AlphabetSpec& base, int count);

// Encodes the member streams of `subset` as one stream over the product
// alphabet. The member with the lowest sensor index is the least significant
// digit.
ProjectedSequence ProjectSubset(const SensorMatrix& matrix, SubsetMask subset);

// Splits a product symbol back into `count` base digits, least significant
// first.
std::vector<Symbol> DecodeProductSymbol(ProductSymbol symbol,
                                        const AlphabetSpec& base, int count);

}  // namespace sensordep

#endif  // SENSORDEP_ALPHABET_H_
