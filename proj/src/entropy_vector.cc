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

#include "sensordep/entropy_vector.h"

#include <cmath>
#include <ostream>

#include "sensordep/error.h"
#include "sensordep/format.h"

namespace sensordep {

std::string_view EntropyKindName(EntropyKind kind) {
  switch (kind) {
    case EntropyKind::kEmpiricalFirstOrder:
      return "empirical-first-order";
    case EntropyKind::kLz78:
      return "lz78";
    case EntropyKind::kAnalytic:
      return "analytic";
  }
  return "unknown";
}

EntropyKind ParseEntropyKind(std::string_view name) {
  for (EntropyKind kind :
       {EntropyKind::kEmpiricalFirstOrder, EntropyKind::kLz78,
        EntropyKind::kAnalytic}) {
    if (EntropyKindName(kind) == name) return kind;
  }
  Fail(ErrorKind::kParse, "unknown entropy kind '" + std::string(name) + "'");
}

EntropyVector::EntropyVector(int num_sensors, EntropyKind kind)
    : num_sensors_(num_sensors), kind_(kind) {
  if (num_sensors < 1 || num_sensors > kMaxSensors) {
    Fail(ErrorKind::kInvalidArgument,
         "entropy vector needs 1.." + std::to_string(kMaxSensors) +
             " sensors, got " + std::to_string(num_sensors));
  }
}

void EntropyVector::Set(SubsetMask subset, double bits) {
  if (subset.empty() || !subset.FitsIn(num_sensors_)) {
    Fail(ErrorKind::kInvalidArgument,
         "subset mask " + std::to_string(subset.bits()) +
             " is not a non-empty subset of " + std::to_string(num_sensors_) +
             " sensors");
  }
  if (!std::isfinite(bits) || bits < 0.0) {
    Fail(ErrorKind::kValidation, "entropy of {" + subset.MembersString() +
                                     "} must be finite and non-negative");
  }
  values_[subset] = bits;
}

bool EntropyVector::Has(SubsetMask subset) const {
  return subset.empty() || values_.contains(subset);
}

std::optional<double> EntropyVector::Find(SubsetMask subset) const {
  if (subset.empty()) return 0.0;
  auto it = values_.find(subset);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

double EntropyVector::at(SubsetMask subset) const {
  auto v = Find(subset);
  if (!v) {
    Fail(ErrorKind::kInvalidArgument,
         "subset {" + subset.MembersString() + "} was not evaluated");
  }
  return *v;
}

std::vector<SubsetMask> EntropyVector::evaluated() const {
  std::vector<SubsetMask> out;
  out.reserve(values_.size());
  for (const auto& [mask, _] : values_) out.push_back(mask);
  return out;
}

bool EntropyVector::IsComplete() const {
  if (num_sensors_ >= 63) return false;
  return values_.size() == (std::uint64_t{1} << num_sensors_) - 1;
}

std::vector<SubsetMask> EntropyVector::MissingSubsets(std::size_t limit) const {
  std::vector<SubsetMask> out;
  if (num_sensors_ >= 63) return out;
  const std::uint64_t count = (std::uint64_t{1} << num_sensors_) - 1;
  for (std::uint64_t b = 1; b <= count && out.size() < limit; ++b) {
    if (!values_.contains(SubsetMask(b))) out.emplace_back(b);
  }
  return out;
}

nlohmann::ordered_json EntropyVector::ToJson() const {
  nlohmann::ordered_json values = nlohmann::ordered_json::object();
  for (const auto& [mask, bits] : values_) {
    values[std::to_string(mask.bits())] = bits;
  }
  nlohmann::ordered_json out;
  out["k"] = num_sensors_;
  out["kind"] = EntropyKindName(kind_);
  out["values"] = std::move(values);
  return out;
}

EntropyVector EntropyVector::FromJson(const nlohmann::json& json) {
  try {
    EntropyVector vec(json.at("k").get<int>(),
                      ParseEntropyKind(json.at("kind").get<std::string>()));
    for (const auto& [key, value] : json.at("values").items()) {
      vec.Set(SubsetMask(std::stoull(key)), value.get<double>());
    }
    return vec;
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorKind::kParse, std::string("bad entropy vector JSON: ") + e.what());
  } catch (const std::logic_error& e) {
    Fail(ErrorKind::kParse, std::string("bad entropy vector key: ") + e.what());
  }
}

void EntropyVector::WriteCsv(std::ostream& out) const {
  out << "mask,members,entropy_bits\n";
  for (const auto& [mask, bits] : values_) {
    out << mask.bits() << ',' << mask.MembersString() << ','
        << FormatDouble(bits) << '\n';
  }
}

}  // namespace sensordep
