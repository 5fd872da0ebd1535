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

#include "sensordep/polymatroid.h"

#include <bit>
#include <cmath>
#include <ostream>

#include "sensordep/error.h"

namespace sensordep {
namespace {

constexpr int kMaxCheckedSensors = 20;

std::vector<double> DenseValues(const EntropyVector& vec) {
  if (!vec.IsComplete()) {
    std::string missing;
    for (SubsetMask s : vec.MissingSubsets()) {
      missing += " {" + s.MembersString() + "}";
    }
    Fail(ErrorKind::kInvalidArgument,
         "entropy vector is only partially evaluated; missing:" + missing);
  }
  if (vec.num_sensors() > kMaxCheckedSensors) {
    Fail(ErrorKind::kInvalidArgument,
         "exhaustive axiom check supports at most " +
             std::to_string(kMaxCheckedSensors) + " sensors");
  }
  std::vector<double> g(std::size_t{1} << vec.num_sensors(), 0.0);
  for (const auto& [mask, bits] : vec.values()) g[mask.bits()] = bits;
  return g;
}

// Exhaustive integer check of the matroid axioms. Returns an empty string on
// success.
std::string CheckIntegerMatroid(const std::vector<std::int64_t>& rank) {
  const std::uint64_t size = rank.size();
  if (rank[0] != 0) return "rank of the empty set is not 0";
  for (std::uint64_t s = 1; s < size; ++s) {
    const int card = std::popcount(s);
    if (rank[s] < 0 || rank[s] > card) {
      return "rank(" + SubsetMask(s).MembersString() + ") = " +
             std::to_string(rank[s]) + " outside [0, |I|]";
    }
  }
  for (std::uint64_t j = 1; j < size; ++j) {
    for (std::uint64_t i = (j - 1) & j;; i = (i - 1) & j) {
      if (rank[i] > rank[j]) {
        return "monotonicity fails for {" + SubsetMask(i).MembersString() +
               "} in {" + SubsetMask(j).MembersString() + "}";
      }
      if (i == 0) break;
    }
  }
  for (std::uint64_t i = 1; i < size; ++i) {
    for (std::uint64_t j = i + 1; j < size; ++j) {
      if (rank[i] + rank[j] < rank[i | j] + rank[i & j]) {
        return "submodularity fails for {" + SubsetMask(i).MembersString() +
               "}, {" + SubsetMask(j).MembersString() + "}";
      }
    }
  }
  return {};
}

}  // namespace

nlohmann::ordered_json AxiomReport::ToJson() const {
  nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
  for (const ViolatingPair& p : violating_pairs) {
    pairs.push_back({{"axiom", p.axiom == Axiom::kMonotonicity
                                   ? "monotonicity"
                                   : "submodularity"},
                     {"first", p.first.bits()},
                     {"second", p.second.bits()},
                     {"amount", p.amount}});
  }
  return {{"is_polymatroid", is_polymatroid},
          {"normalization_ok", normalization_ok},
          {"tolerance", tolerance},
          {"worst_monotonicity_violation", worst_monotonicity_violation},
          {"worst_submodularity_violation", worst_submodularity_violation},
          {"total_violations", total_violations},
          {"violating_pairs", std::move(pairs)}};
}

AxiomReport CheckPolymatroid(const EntropyVector& vec, double tolerance) {
  const std::vector<double> g = DenseValues(vec);
  const std::uint64_t size = g.size();
  AxiomReport report;
  report.tolerance = tolerance;

  auto record = [&](SubsetMask a, SubsetMask b, Axiom axiom, double amount) {
    if (amount <= tolerance) return;
    ++report.total_violations;
    if (report.violating_pairs.size() < kViolationCap) {
      report.violating_pairs.push_back({a, b, axiom, amount});
    }
  };

  // Every proper subset i of every j, including the empty set.
  for (std::uint64_t j = 1; j < size; ++j) {
    for (std::uint64_t i = (j - 1) & j;; i = (i - 1) & j) {
      const double amount = g[i] - g[j];
      report.worst_monotonicity_violation =
          std::max(report.worst_monotonicity_violation, amount);
      record(SubsetMask(i), SubsetMask(j), Axiom::kMonotonicity, amount);
      if (i == 0) break;
    }
  }
  for (std::uint64_t i = 1; i < size; ++i) {
    for (std::uint64_t j = i + 1; j < size; ++j) {
      const double amount = g[i | j] + g[i & j] - g[i] - g[j];
      report.worst_submodularity_violation =
          std::max(report.worst_submodularity_violation, amount);
      record(SubsetMask(i), SubsetMask(j), Axiom::kSubmodularity, amount);
    }
  }
  report.is_polymatroid = report.worst_monotonicity_violation <= tolerance &&
                          report.worst_submodularity_violation <= tolerance;
  return report;
}

int MatroidCandidate::RankOf(SubsetMask s) const {
  return static_cast<int>(std::llround(ranks.at(s)));
}

void MatroidCandidate::WriteCsv(std::ostream& out) const {
  out << "mask,rank\n";
  for (const auto& [mask, r] : ranks.values()) {
    out << mask.bits() << ',' << std::llround(r) << '\n';
  }
}

MatroidRounding RoundToMatroid(const EntropyVector& vec, double unit) {
  if (!(unit > 0.0) || !std::isfinite(unit)) {
    Fail(ErrorKind::kInvalidArgument, "rounding unit must be positive");
  }
  const std::vector<double> g = DenseValues(vec);
  std::vector<std::int64_t> rank(g.size(), 0);
  MatroidRounding out;
  for (std::uint64_t s = 1; s < g.size(); ++s) {
    const double scaled = g[s] / unit;
    rank[s] = std::llround(scaled);
    out.rounding_residual =
        std::max(out.rounding_residual,
                 std::abs(scaled - static_cast<double>(rank[s])));
  }
  out.failure = CheckIntegerMatroid(rank);
  if (!out.failure.empty()) return out;

  MatroidCandidate candidate{EntropyVector(vec.num_sensors(),
                                           EntropyKind::kAnalytic),
                             static_cast<int>(rank.back()),
                             out.rounding_residual};
  for (std::uint64_t s = 1; s < g.size(); ++s) {
    candidate.ranks.Set(SubsetMask(s), static_cast<double>(rank[s]));
  }
  out.candidate = std::move(candidate);
  return out;
}

double IndependenceDefect(const EntropyVector& vec, SubsetMask subset) {
  if (subset.empty()) {
    Fail(ErrorKind::kInvalidArgument, "independence of the empty set");
  }
  double sum = 0.0;
  for (int i : subset.Indices()) {
    sum += vec.at(SubsetMask(std::uint64_t{1} << i));
  }
  return sum - vec.at(subset);
}

bool IsIndependent(const EntropyVector& vec, SubsetMask subset,
                   double tolerance) {
  return IndependenceDefect(vec, subset) <= tolerance;
}

}  // namespace sensordep
