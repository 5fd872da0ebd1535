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

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "sensordep/error.h"
#include "sensordep/sources.h"

namespace sensordep {
namespace {

EntropyVector FromList(int k, const std::vector<double>& values) {
  EntropyVector v(k, EntropyKind::kAnalytic);
  for (std::size_t m = 1; m <= values.size(); ++m) {
    v.Set(SubsetMask(m), values[m - 1]);
  }
  return v;
}

const std::vector<double> kXorTriple = {1, 1, 2, 1, 2, 2, 2};

TEST_CASE("empirical and analytic vectors are polymatroids") {
  CHECK(CheckPolymatroid(FromList(3, kXorTriple), 1e-9).is_polymatroid);
  CHECK(CheckPolymatroid(FromList(2, {0, 0, 0}), 1e-9).is_polymatroid);
}

TEST_CASE("superadditive pair is flagged") {
  const AxiomReport r = CheckPolymatroid(FromList(2, {1, 1, 2.5}), 1e-9);
  CHECK_FALSE(r.is_polymatroid);
  CHECK(r.worst_submodularity_violation == doctest::Approx(0.5));
  REQUIRE_FALSE(r.violating_pairs.empty());
  CHECK(r.violating_pairs[0].axiom == Axiom::kSubmodularity);
  CHECK(r.ToJson()["is_polymatroid"] == false);
}

TEST_CASE("monotonicity violation is flagged") {
  const AxiomReport r = CheckPolymatroid(FromList(2, {1, 1, 0.5}), 1e-9);
  CHECK_FALSE(r.is_polymatroid);
  CHECK(r.worst_monotonicity_violation == doctest::Approx(0.5));
}

TEST_CASE("violation list is capped") {
  std::mt19937_64 rng(3);
  EntropyVector v(8, EntropyKind::kAnalytic);
  for (SubsetMask s : AllNonEmptySubsets(8)) v.Set(s, (rng() % 1000) / 100.0);
  const AxiomReport r = CheckPolymatroid(v, 1e-9);
  CHECK(r.violating_pairs.size() == kViolationCap);
  CHECK(r.total_violations > kViolationCap);
}

TEST_CASE("incomplete vectors are rejected") {
  EntropyVector v(2, EntropyKind::kAnalytic);
  v.Set(SubsetMask(1), 1.0);
  try {
    CheckPolymatroid(v, 1e-9);
    FAIL("expected rejection");
  } catch (const SensorError& e) {
    CHECK(std::string(e.what()).find("{2}") != std::string::npos);
  }
}

TEST_CASE("matroid rounding") {
  const MatroidRounding free2 = RoundToMatroid(FromList(2, {1, 1, 2}), 1.0);
  REQUIRE(free2.candidate);
  CHECK(free2.candidate->rank == 2);

  const MatroidRounding dup = RoundToMatroid(FromList(2, {1, 1, 1}), 1.0);
  REQUIRE(dup.candidate);
  CHECK(dup.candidate->rank == 1);

  const MatroidRounding u23 = RoundToMatroid(FromList(3, kXorTriple), 1.0);
  REQUIRE(u23.candidate);
  CHECK(u23.candidate->rank == 2);
  for (SubsetMask s : AllNonEmptySubsets(3)) {
    CHECK(u23.candidate->RankOf(s) == std::min(s.size(), 2));
  }
  std::ostringstream csv;
  u23.candidate->WriteCsv(csv);
  CHECK(csv.str().rfind("mask,rank\n", 0) == 0);

  const MatroidRounding bad = RoundToMatroid(FromList(2, {2, 1, 2}), 1.0);
  CHECK_FALSE(bad.candidate);
  CHECK_FALSE(bad.failure.empty());
  CHECK_THROWS_AS(RoundToMatroid(FromList(2, {1, 1, 2}), 0.0), SensorError);
}

TEST_CASE("rounded candidates satisfy matroid axioms exactly") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const SourceSpec spec = RandomMemorylessSpec(4, seed);
    const MatroidRounding r = RoundToMatroid(AnalyticEntropyVector(spec), 1.0);
    if (!r.candidate) continue;
    const MatroidCandidate& c = *r.candidate;
    for (SubsetMask a : AllNonEmptySubsets(4)) {
      CHECK(c.RankOf(a) >= 0);
      CHECK(c.RankOf(a) <= a.size());
      for (SubsetMask b : AllNonEmptySubsets(4)) {
        if (a.IsSubsetOf(b)) CHECK(c.RankOf(a) <= c.RankOf(b));
        CHECK(c.RankOf(a | b) + c.RankOf(a & b) <= c.RankOf(a) + c.RankOf(b));
      }
    }
  }
}

TEST_CASE("independence via additivity defect") {
  const EntropyVector v = FromList(3, kXorTriple);
  CHECK(IsIndependent(v, SubsetMask::Parse("2,3"), 1e-9));
  CHECK_FALSE(IsIndependent(v, SubsetMask::Parse("1,2,3"), 1e-9));
  CHECK(IndependenceDefect(v, SubsetMask::Parse("1,2,3")) == doctest::Approx(1.0));
  for (int i = 1; i <= 3; ++i) {
    CHECK(IsIndependent(v, SubsetMask::FromMembers({i}), 1e-9));
  }
  EntropyVector partial(2, EntropyKind::kAnalytic);
  partial.Set(SubsetMask(3), 1.0);
  CHECK_THROWS_AS(IsIndependent(partial, SubsetMask(3), 1e-9), SensorError);
}

TEST_CASE("defect is non-negative on polymatroids") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const EntropyVector v = AnalyticEntropyVector(RandomMemorylessSpec(5, seed));
    for (SubsetMask s : AllNonEmptySubsets(5)) {
      CHECK(IndependenceDefect(v, s) >= -1e-9);
    }
  }
}

}  // namespace
}  // namespace sensordep
