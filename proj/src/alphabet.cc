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

#include "sensordep/alphabet.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <sstream>

#include "sensordep/error.h"

namespace sensordep {

SubsetMask SubsetMask::FromMembers(std::span<const int> members) {
  std::uint64_t bits = 0;
  for (int m : members) {
    if (m < 1 || m > kMaxSensors) {
      Fail(ErrorKind::kInvalidArgument,
           "sensor number " + std::to_string(m) + " outside 1.." +
               std::to_string(kMaxSensors));
    }
    bits |= std::uint64_t{1} << (m - 1);
  }
  return SubsetMask(bits);
}

SubsetMask SubsetMask::Full(int k) {
  if (k < 0 || k > kMaxSensors) {
    Fail(ErrorKind::kInvalidArgument, "bad sensor count " + std::to_string(k));
  }
  if (k == kMaxSensors) return SubsetMask(~std::uint64_t{0});
  return SubsetMask((std::uint64_t{1} << k) - 1);
}

SubsetMask SubsetMask::Parse(const std::string& text) {
  if (!text.empty() && text.front() == '#') {
    try {
      std::size_t used = 0;
      const std::uint64_t bits = std::stoull(text.substr(1), &used);
      if (used + 1 != text.size()) throw std::invalid_argument(text);
      return SubsetMask(bits);
    } catch (const std::exception&) {
      Fail(ErrorKind::kParse, "bad subset mask '" + text + "'");
    }
  }
  std::vector<int> members;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int m = std::stoi(item, &used);
      if (item.find_first_not_of(" \t", used) != std::string::npos) {
        throw std::invalid_argument(item);
      }
      members.push_back(m);
    } catch (const std::logic_error&) {
      Fail(ErrorKind::kParse, "bad subset member '" + item + "' in '" +
                                  text + "'");
    }
  }
  return FromMembers(members);
}

int SubsetMask::size() const { return std::popcount(bits_); }

std::vector<int> SubsetMask::Indices() const {
  std::vector<int> out;
  out.reserve(size());
  for (std::uint64_t b = bits_; b != 0; b &= b - 1) {
    out.push_back(std::countr_zero(b));
  }
  return out;
}

std::string SubsetMask::MembersString() const {
  std::string out;
  for (int i : Indices()) {
    if (!out.empty()) out += ' ';
    out += std::to_string(i + 1);
  }
  return out;
}

std::vector<SubsetMask> AllNonEmptySubsets(int k) {
  if (k < 1 || k >= kMaxSensors) {
    Fail(ErrorKind::kInvalidArgument,
         "cannot enumerate subsets of " + std::to_string(k) + " sensors");
  }
  const std::uint64_t count = (std::uint64_t{1} << k) - 1;
  std::vector<SubsetMask> out;
  out.reserve(count);
  for (std::uint64_t b = 1; b <= count; ++b) out.emplace_back(b);
  return out;
}

SensorMatrix::SensorMatrix(std::vector<std::vector<Symbol>> rows,
                           AlphabetSpec alphabet)
    : alphabet_(alphabet) {
  if (rows.empty()) Fail(ErrorKind::kEmptyInput, "sensor matrix has no rows");
  if (rows.size() > static_cast<std::size_t>(kMaxSensors)) {
    Fail(ErrorKind::kInvalidArgument,
         "at most " + std::to_string(kMaxSensors) + " sensors supported");
  }
  if (alphabet.size < 1) {
    Fail(ErrorKind::kInvalidArgument, "alphabet size must be positive");
  }
  num_sensors_ = static_cast<int>(rows.size());
  num_steps_ = rows.front().size();
  if (num_steps_ == 0) Fail(ErrorKind::kEmptyInput, "sensor rows are empty");
  data_.reserve(num_steps_ * rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != num_steps_) {
      Fail(ErrorKind::kValidation,
           "sensor " + std::to_string(i + 1) + " has " +
               std::to_string(rows[i].size()) + " steps, expected " +
               std::to_string(num_steps_));
    }
    for (std::size_t t = 0; t < num_steps_; ++t) {
      if (!alphabet.Contains(rows[i][t])) {
        Fail(ErrorKind::kValidation,
             "sensor " + std::to_string(i + 1) + " step " + std::to_string(t) +
                 ": symbol " + std::to_string(rows[i][t]) +
                 " outside alphabet of size " + std::to_string(alphabet.size));
      }
    }
    data_.insert(data_.end(), rows[i].begin(), rows[i].end());
  }
}

std::span<const Symbol> SensorMatrix::row(int index) const {
  if (index < 0 || index >= num_sensors_) {
    Fail(ErrorKind::kInvalidArgument,
         "sensor index " + std::to_string(index) + " out of range");
  }
  return std::span<const Symbol>(data_).subspan(
      static_cast<std::size_t>(index) * num_steps_, num_steps_);
}

std::vector<int> SensorMatrix::ConstantSensors() const {
  std::vector<int> out;
  for (int i = 0; i < num_sensors_; ++i) {
    auto r = row(i);
    if (std::all_of(r.begin(), r.end(), [&](Symbol s) { return s == r[0]; })) {
      out.push_back(i);
    }
  }
  return out;
}

std::vector<Symbol> QuantizeReadings(std::span<const double> values,
                                     int bins) {
  if (bins < 2) {
    Fail(ErrorKind::kInvalidArgument, "bins must be at least 2");
  }
  std::vector<Symbol> out;
  out.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      Fail(ErrorKind::kValidation, "reading at index " + std::to_string(i) +
                                       " is not a finite value in [0,1]");
    }
    const auto bin = static_cast<Symbol>(std::floor(v * bins));
    out.push_back(std::min<Symbol>(bin, static_cast<Symbol>(bins - 1)));
  }
  return out;
}

AlphabetSpec ProductAlphabet(const AlphabetSpec& base, int count) {
  std::uint64_t size = 1;
  for (int i = 0; i < count; ++i) {
    if (base.size != 0 &&
        size > std::numeric_limits<ProductSymbol>::max() / base.size) {
      Fail(ErrorKind::kOverflow,
           "product alphabet " + std::to_string(base.size) + "^" +
               std::to_string(count) + " exceeds 64-bit symbol range");
    }
    size *= base.size;
  }
  return AlphabetSpec{size};
}

ProjectedSequence ProjectSubset(const SensorMatrix& matrix,
                                SubsetMask subset) {
  if (subset.empty()) {
    Fail(ErrorKind::kInvalidArgument, "cannot project onto the empty subset");
  }
  if (!subset.FitsIn(matrix.num_sensors())) {
    Fail(ErrorKind::kInvalidArgument,
         "subset {" + subset.MembersString() + "} exceeds " +
             std::to_string(matrix.num_sensors()) + " sensors");
  }
  const std::vector<int> members = subset.Indices();
  ProjectedSequence out;
  out.alphabet = ProductAlphabet(matrix.alphabet(),
                                 static_cast<int>(members.size()));
  const std::size_t n = matrix.num_steps();
  out.symbols.assign(n, 0);
  ProductSymbol place = 1;
  for (int index : members) {
    auto r = matrix.row(index);
    for (std::size_t t = 0; t < n; ++t) out.symbols[t] += r[t] * place;
    place *= matrix.alphabet().size;
  }
  return out;
}

std::vector<Symbol> DecodeProductSymbol(ProductSymbol symbol,
                                        const AlphabetSpec& base, int count) {
  std::vector<Symbol> digits(count);
  for (int i = 0; i < count; ++i) {
    digits[i] = static_cast<Symbol>(symbol % base.size);
    symbol /= base.size;
  }
  return digits;
}

}  // namespace sensordep
