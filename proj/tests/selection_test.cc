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

#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "sensordep/error.h"
#include "sensordep/sources.h"

namespace sensordep {
namespace {

EntropyVector XorTriple() {
  EntropyVector v(3, EntropyKind::kAnalytic);
  const double values[] = {1, 1, 2, 1, 2, 2, 2};
  for (std::uint64_t m = 1; m <= 7; ++m) v.Set(SubsetMask(m), values[m - 1]);
  return v;
}

TEST_CASE("oracle memoizes and counts") {
  int calls = 0;
  FunctionOracle oracle(3, [&](SubsetMask s) {
    ++calls;
    return static_cast<double>(s.size());
  });
  CHECK(oracle.Query(SubsetMask(3)) == 2.0);
  CHECK(oracle.Query(SubsetMask(3)) == 2.0);
  CHECK(oracle.Query(SubsetMask()) == 0.0);
  CHECK(calls == 1);
  CHECK(oracle.evaluation_count() == 3);
  CHECK(oracle.distinct_evaluations() == 1);
  CHECK_THROWS_AS(oracle.Query(SubsetMask(8)), SensorError);
}

TEST_CASE("random selection degenerate probabilities") {
  CHECK(RandomSelection(10, 0.0, 1).empty());
  CHECK(RandomSelection(10, 1.0, 1) == SubsetMask::Full(10));
  CHECK(RandomSelection(10, 0.5, 77) == RandomSelection(10, 0.5, 77));
  CHECK_THROWS_AS(RandomSelection(10, 1.5, 1), SensorError);
}

TEST_CASE("random selection size is binomial") {
  double total = 0.0;
  const int seeds = 10000;
  for (int s = 0; s < seeds; ++s) total += RandomSelection(10, 0.5, s).size();
  CHECK(std::abs(total / seeds - 5.0) < 0.1);
}

TEST_CASE("sized draws condition on size") {
  for (int s = 0; s < 50; ++s) {
    const SizedDraw d = RandomSelectionOfSize(10, 0.5, 5, s);
    CHECK(d.subset.size() == 5);
    CHECK(d.attempts >= 1);
  }
  CHECK_THROWS_AS(RandomSelectionOfSize(10, 0.0, 5, 1, 100), SensorError);
  CHECK_THROWS_AS(RandomSelectionOfSize(10, 0.5, 11, 1), SensorError);
}

TEST_CASE("random selection guarantee") {
  const auto a = ComputeRandomSelectionGuarantee(3.0, 1.0, std::exp(2.0), 4, 100);
  CHECK(a.probability_floor == doctest::Approx(1.0 - std::exp(-3.0)));
  CHECK(a.probability_floor == doctest::Approx(0.9502).epsilon(1e-4));
  CHECK(a.required_disjoint_bases == doctest::Approx(7.0));
  CHECK(a.order_term == doctest::Approx(15.0 / 10.0));
  const auto b = ComputeRandomSelectionGuarantee(1.0, 0.5, 1.0, 4, 100);
  CHECK(b.probability_floor == doctest::Approx(0.3935).epsilon(1e-4));
  CHECK(b.required_disjoint_bases == doctest::Approx(3.0));
  CHECK(ComputeRandomSelectionGuarantee(60.0, 0.5, 1.0, 4, 100).probability_floor ==
        doctest::Approx(1.0));
  CHECK_THROWS_AS(ComputeRandomSelectionGuarantee(1.0, 0.0, 1.0, 4, 100),
                  SensorError);
}

TEST_CASE("greedy on the xor triple") {
  VectorOracle oracle(XorTriple());
  const GreedyTrace t = GreedySelection(oracle, 3, 0.0);
  REQUIRE(t.steps.size() == 2);
  CHECK(t.steps[0].sensor == 0);
  CHECK(t.steps[1].sensor == 1);
  CHECK(t.final_subset == SubsetMask(3));
  CHECK(t.final_entropy == 2.0);
  CHECK(t.stopped_early);
  const auto json = t.ToJson();
  CHECK(json["steps"][0]["sensor"] == 1);
}

TEST_CASE("greedy with zero singletons selects nothing") {
  FunctionOracle oracle(4, [](SubsetMask) { return 0.0; });
  const GreedyTrace t = GreedySelection(oracle, 4, 0.0);
  CHECK(t.steps.empty());
  CHECK(t.final_subset.empty());
}

TEST_CASE("greedy on an additive oracle takes everything") {
  FunctionOracle oracle(5, [](SubsetMask s) { return double(s.size()); });
  const GreedyTrace t = GreedySelection(oracle, 5, 0.0);
  CHECK(t.final_subset == SubsetMask::Full(5));
  CHECK(t.final_entropy == 5.0);
  CHECK_FALSE(t.stopped_early);
  for (const GreedyStep& s : t.steps) CHECK(s.gain == 1.0);
  CHECK(GreedySelection(oracle, 5, 1.0).steps.empty());
}

TEST_CASE("early stop gap") {
  CHECK(EarlyStopGap(10, 0.05) == doctest::Approx(0.5));
  CHECK(EarlyStopGap(7, 0.0) == 0.0);
  CHECK_THROWS_AS(EarlyStopGap(3, -1.0), SensorError);
}

TEST_CASE("greedy trace invariants and early-stop gap on random oracles") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    VectorOracle oracle(AnalyticEntropyVector(RandomMemorylessSpec(5, seed)));
    const GreedyTrace full = GreedySelection(oracle, 5, 0.0);
    double prev = 0.0;
    for (const GreedyStep& s : full.steps) {
      CHECK(s.gain > 0.0);
      CHECK(s.entropy == doctest::Approx(prev + s.gain));
      prev = s.entropy;
    }
    for (double eps : {0.01, 0.05, 0.2}) {
      const GreedyTrace stopped = GreedySelection(oracle, 5, eps);
      for (const GreedyStep& s : stopped.steps) CHECK(s.gain > eps);
      if (stopped.stopped_early) CHECK(stopped.last_best_gain <= eps);
      CHECK(full.final_entropy - stopped.final_entropy <=
            EarlyStopGap(5, eps) + 1e-9);
    }
  }
}

TEST_CASE("greedy chain reaches the approximation factor") {
  const double factor = 1.0 - std::exp(-1.0);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const int k = 6;
    VectorOracle oracle(AnalyticEntropyVector(RandomMemorylessSpec(k, seed)));
    const auto chain = GreedyChain(oracle, k);
    REQUIRE(chain.size() == static_cast<std::size_t>(k));
    for (int m = 1; m <= k; ++m) {
      double best = 0.0;
      for (SubsetMask s : AllNonEmptySubsets(k)) {
        if (s.size() == m) best = std::max(best, oracle.Query(s));
      }
      CHECK(chain[m - 1].entropy >= factor * best - 1e-12);
    }
  }
}

}  // namespace
}  // namespace sensordep
