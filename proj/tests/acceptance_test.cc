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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "sensordep/empirical_entropy.h"
#include "sensordep/fusion.h"
#include "sensordep/lz78.h"
#include "sensordep/polymatroid.h"
#include "sensordep/selection.h"
#include "sensordep/sources.h"

namespace sensordep {
namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

nlohmann::json LoadConfig(const std::string& name) {
  std::ifstream in(std::string(SENSORDEP_CONFIG_DIR) + "/" + name);
  if (!in) throw std::runtime_error("missing config " + name);
  return nlohmann::json::parse(in);
}

std::string Fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

// Criterion 1: empirical vectors of random matrices are polymatroids.
Outcome AxiomSuite() {
  std::mt19937_64 rng(20260101);
  int failures = 0;
  const int trials = 1200;
  double worst = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    const int k = 2 + static_cast<int>(rng() % 3);
    const std::size_t n = 8 + rng() % 57;
    const Symbol alpha = 2 + static_cast<Symbol>(rng() % 2);
    std::vector<std::vector<Symbol>> rows(k, std::vector<Symbol>(n));
    for (auto& r : rows)
      for (Symbol& s : r) s = static_cast<Symbol>(rng() % alpha);
    const AxiomReport report = CheckPolymatroid(
        EmpiricalEntropyVector(SensorMatrix(rows, AlphabetSpec{alpha})), 1e-9);
    if (!report.is_polymatroid) ++failures;
    worst = std::max({worst, report.worst_monotonicity_violation,
                      report.worst_submodularity_violation});
  }
  return {failures == 0, std::to_string(trials) + " matrices, " +
                             std::to_string(failures) +
                             " failures, worst violation " +
                             std::to_string(worst)};
}

// Criterion 2: empirical vector of the XOR triple at n = 1e5.
Outcome XorConvergence() {
  const SourceSpec spec = SourceSpec::FromJson(LoadConfig("xor_triple.json"));
  const EntropyVector emp = EmpiricalEntropyVector(Generate(spec, 100000));
  const EntropyVector ana = AnalyticEntropyVector(spec);
  const double expected[] = {1, 1, 2, 1, 2, 2, 2};
  double worst = 0.0;
  bool oracle_ok = true;
  std::string values;
  for (std::uint64_t m = 1; m <= 7; ++m) {
    const SubsetMask s(m);
    oracle_ok = oracle_ok && std::abs(ana.at(s) - expected[m - 1]) < 1e-12;
    worst = std::max(worst, std::abs(emp.at(s) - ana.at(s)));
    values += (m > 1 ? "," : "") + Fmt(emp.at(s));
  }
  return {oracle_ok && worst <= 0.02,
          "w_n=(" + values + "), max |w_n - w| = " + Fmt(worst, 5)};
}

// Criterion 3: reference LZ78 parse against the golden file.
Outcome GoldenParse() {
  const auto seq = SymbolsFromDigits("0100011011000001010011");
  std::vector<PhraseSpan> phrases;
  const ParseResult r = Lz78Parse(seq, AlphabetSpec{2}, &phrases);
  std::ostringstream dump;
  WritePhrases(dump, seq, phrases, AlphabetSpec{2});
  std::ifstream in(std::string(SENSORDEP_GOLDEN_DIR) +
                       "/reference_parse_phrases.txt",
                   std::ios::binary);
  std::stringstream golden;
  golden << in.rdbuf();
  const bool match = !golden.str().empty();
  return {match && r.phrase_count == 10 && dump.str() == golden.str(),
          "c = " + std::to_string(r.phrase_count) + ", dump " +
              (dump.str() == golden.str() ? "matches" : "differs from") +
              " golden file"};
}

// Criterion 4: LZ estimate error on a Markov chain shrinks with n.
Outcome MarkovTrend() {
  const SourceSpec spec = SourceSpec::FromJson(LoadConfig("markov_chain.json"));
  const auto& transition = std::get<MarkovBase>(spec.sensors[0]).transition;
  const double rate = MarkovEntropyRate(transition);
  const SensorMatrix m = Generate(spec, 1000000);
  const std::vector<ProductSymbol> full(m.row(0).begin(), m.row(0).end());
  std::vector<double> errors;
  std::string detail = "rate " + Fmt(rate) + ";";
  for (std::size_t n : {1000u, 10000u, 100000u, 1000000u}) {
    const double est = LzEntropyEstimate(
        std::span<const ProductSymbol>(full.data(), n), AlphabetSpec{2});
    errors.push_back(std::abs(est - rate));
    detail += " n=" + std::to_string(n) + ":" + Fmt(est);
  }
  int non_increasing = 0;
  for (std::size_t i = 1; i < errors.size(); ++i) {
    if (errors[i] <= errors[i - 1]) ++non_increasing;
  }
  const double relative = errors.back() / rate;
  detail += "; non-increasing steps " + std::to_string(non_increasing) +
            "/3, final relative error " + Fmt(relative);
  return {non_increasing >= 3 && relative <= 0.20, detail};
}

// Criterion 5: first-order estimates miss a one-step delay, LZ sees it.
Outcome DelayDetection() {
  const SourceSpec spec = SourceSpec::FromJson(LoadConfig("delay_pair.json"));
  const SensorMatrix m = Generate(spec, 1000000);
  const EntropyVector emp = EmpiricalEntropyVector(m);
  const double defect = IndependenceDefect(emp, SubsetMask(3));
  const EntropyVector lz = LzEntropyVector(m);
  const double gap = std::abs(lz.at(SubsetMask(3)) - lz.at(SubsetMask(1)));
  return {defect <= 0.01 && gap <= 0.1,
          "first-order defect " + Fmt(defect, 5) + ", LZ joint " +
              Fmt(lz.at(SubsetMask(3))) + " vs single " +
              Fmt(lz.at(SubsetMask(1))) + " (gap " + Fmt(gap) + ")"};
}

// Criterion 6: early-stopped greedy loses at most K * eps.
Outcome EarlyStopGapSuite() {
  const int k = 5;
  int violations = 0;
  double worst_slack = -1e300;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    VectorOracle oracle(AnalyticEntropyVector(RandomMemorylessSpec(k, seed)));
    const double full = GreedySelection(oracle, k, 0.0).final_entropy;
    for (double eps : {0.01, 0.05, 0.2}) {
      const double stopped = GreedySelection(oracle, k, eps).final_entropy;
      const double slack = (full - stopped) - EarlyStopGap(k, eps);
      worst_slack = std::max(worst_slack, slack);
      if (slack > 1e-9) ++violations;
    }
  }
  return {violations == 0, "200 oracles x 3 eps, violations " +
                               std::to_string(violations) +
                               ", max (gap - K*eps) " + Fmt(worst_slack, 6)};
}

// Criterion 7: greedy chain vs brute force at every cardinality.
Outcome GreedyApproximation() {
  const int k = 5;
  const double factor = 1.0 - std::exp(-1.0);
  int checked = 0, violations = 0;
  double worst_ratio = 1e300;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const EntropyVector vec = AnalyticEntropyVector(RandomMemorylessSpec(k, seed));
    if (!CheckPolymatroid(vec, 1e-9).is_polymatroid) continue;
    VectorOracle oracle(vec);
    const auto chain = GreedyChain(oracle, k);
    for (int m = 1; m <= k; ++m) {
      double best = 0.0;
      for (SubsetMask s : AllNonEmptySubsets(k)) {
        if (s.size() == m) best = std::max(best, vec.at(s));
      }
      ++checked;
      if (best > 0) worst_ratio = std::min(worst_ratio, chain[m - 1].entropy / best);
      if (chain[m - 1].entropy < factor * best - 1e-12) ++violations;
    }
  }
  return {violations == 0 && checked == 200 * k,
          std::to_string(checked) + " (oracle, m) pairs, violations " +
              std::to_string(violations) + ", worst greedy/optimum " +
              Fmt(worst_ratio)};
}

// Shared ensemble for criteria 8 and 9.
struct Ensemble {
  SourceSpec spec;
  EntropyVector analytic{1, EntropyKind::kAnalytic};
  SensorMatrix matrix{{{0}}, AlphabetSpec{2}};
  int rank = 0;
  bool ContainsBase(SubsetMask s) const {
    return !s.empty() && std::abs(analytic.at(s) - rank) < 1e-9;
  }
};

const Ensemble& MixedEnsemble() {
  static const Ensemble* ensemble = [] {
    auto* e = new Ensemble;
    e->spec = SourceSpec::FromJson(LoadConfig("mixed_ensemble.json"));
    e->analytic = AnalyticEntropyVector(e->spec);
    e->matrix = Generate(e->spec, 10000);
    e->rank = static_cast<int>(
        std::lround(e->analytic.at(SubsetMask::Full(e->spec.num_sensors()))));
    return e;
  }();
  return *ensemble;
}

// Criterion 8: size-5 draws split into ~5 bit and <= ~4 bit groups.
Outcome SizedDrawSplit() {
  const Ensemble& e = MixedEnsemble();
  EmpiricalOracle oracle(e.matrix);
  int with_base = 0, without = 0, violations = 0;
  std::ostringstream table;
  for (int draw = 1; draw <= 20; ++draw) {
    const SubsetMask s = RandomSelectionOfSize(10, 0.5, 5, 1000 + draw).subset;
    const double h = oracle.Query(s);
    const bool base = e.ContainsBase(s);
    (base ? with_base : without)++;
    if (base ? h < 4.9 : h > 4.1) ++violations;
    table << "    draw " << draw << " {" << s.MembersString() << "} "
          << Fmt(h) << (base ? " contains a base" : "") << '\n';
  }
  std::cout << table.str();
  return {violations == 0 && with_base > 0 && without > 0,
          std::to_string(with_base) + " draws with a base, " +
              std::to_string(without) + " without, violations " +
              std::to_string(violations)};
}

// Criterion 9: fraction of q-draws containing a base vs exact probability.
Outcome BaseContainmentFrequency() {
  const Ensemble& e = MixedEnsemble();
  const int k = e.spec.num_sensors();
  const double q = 0.5;
  double exact = 0.0;
  for (std::uint64_t m = 1; m < (std::uint64_t{1} << k); ++m) {
    const SubsetMask s(m);
    if (e.ContainsBase(s)) {
      exact += std::pow(q, s.size()) * std::pow(1 - q, k - s.size());
    }
  }
  EmpiricalOracle oracle(e.matrix);
  const int seeds = 10000;
  int hits = 0;
  for (int seed = 0; seed < seeds; ++seed) {
    const SubsetMask s = RandomSelection(k, q, seed);
    if (!s.empty() && oracle.Query(s) >= e.rank - 0.5) ++hits;
  }
  const double observed = static_cast<double>(hits) / seeds;
  return {std::abs(observed - exact) <= 0.02,
          "observed " + Fmt(observed) + ", exact " + Fmt(exact) + ", |diff| " +
              Fmt(std::abs(observed - exact))};
}

// Criterion 10: regret stays within the bound for M in {10, 240}.
Outcome RegretSuite() {
  const std::size_t n = 10000;
  const int runs = 200;
  const LossFunction loss = LossFunction::Hamming();
  bool ok = true;
  std::string detail;
  for (std::size_t m : {std::size_t{10}, std::size_t{240}}) {
    std::mt19937_64 rng(7000 + m);
    std::vector<std::uint8_t> iid_truth(n);
    for (auto& x : iid_truth) x = rng() & 1;
    // Competitor j agrees with the i.i.d. truth with probability in [0.5, 0.8].
    std::vector<std::vector<double>> rows(m, std::vector<double>(n));
    for (std::size_t j = 0; j < m; ++j) {
      const double acc = 0.5 + 0.3 * static_cast<double>(j) / (m - 1);
      for (std::size_t t = 0; t < n; ++t) {
        const bool agree = (rng() >> 11) * 0x1.0p-53 < acc;
        rows[j][t] = agree ? iid_truth[t] : 1 - iid_truth[t];
      }
    }
    const CompetitorGrid grid(rows);
    const auto trap = AlternatingTrapTruth(grid, loss);
    for (int variant = 0; variant < 2; ++variant) {
      const auto& truth = variant == 0 ? iid_truth : trap;
      std::vector<double> per_run;
      FusionRun last;
      FusionOptions options;
      options.record_weights = false;
      for (int s = 0; s < runs; ++s) {
        last = OnlineFusion(grid, truth, loss, DefaultEta(m, n, 1.0), s, options);
        per_run.push_back(last.algorithm_loss / n);
      }
      const double mean =
          std::accumulate(per_run.begin(), per_run.end(), 0.0) / runs;
      double var = 0.0;
      for (double x : per_run) var += (x - mean) * (x - mean);
      const double sem = std::sqrt(var / (runs - 1) / runs);
      const double best = last.per_competitor_loss[last.best_competitor] / n;
      const double limit = best + last.regret_bound + 3 * sem;
      const bool pass = mean <= limit;
      ok = ok && pass;
      detail += std::string(detail.empty() ? "" : "; ") + "M=" +
                std::to_string(m) + (variant == 0 ? " iid" : " trap") +
                ": mean " + Fmt(mean) + " <= " + Fmt(limit) + " (best " +
                Fmt(best) + ", bound " + Fmt(last.regret_bound) + ")" +
                (pass ? "" : " VIOLATED");
    }
  }
  return {ok, detail};
}

// Criterion 11: fused pair averages dominate the final weights.
Outcome FusionReproduction() {
  const NoisyObservationScenario scenario =
      NoisyObservationScenario::FromJson(LoadConfig("fusion_reproduction.json"));
  const std::size_t n = 5000;
  const NoisyObservations obs = GenerateNoisyObservations(scenario, n);
  const int k = static_cast<int>(obs.readings.size());
  const FamilyCompetitors comps(obs.readings, ParseFamily("ordered-pairs", k));
  const LossFunction loss = LossFunction::LogLoss(1e-3);
  const std::size_t m = comps.num_competitors();
  const FusionRun run = OnlineFusion(comps, obs.truth, loss,
                                     DefaultEta(m, n, loss.d_max()),
                                     scenario.seed);
  const auto ranked = run.RankByFinalWeight();
  const auto w = run.weights_at(n);
  const double top2 = w[ranked[0]] + w[ranked[1]];
  const bool synthesized = ranked[0] >= static_cast<std::size_t>(k) &&
                           ranked[1] >= static_cast<std::size_t>(k);
  return {m == 240 && synthesized && top2 >= 0.4,
          "M=" + std::to_string(m) + ", top-2 " + comps.Label(ranked[0]) +
              "=" + Fmt(w[ranked[0]]) + ", " + comps.Label(ranked[1]) + "=" +
              Fmt(w[ranked[1]]) + ", combined " + Fmt(top2)};
}

// Criterion 12: one exponential-weights step with losses (0, 1), eta = 1.
Outcome OneStepWeights() {
  const CompetitorGrid grid({{1.0}, {0.0}});
  const std::vector<std::uint8_t> truth{1};
  const FusionRun run = OnlineFusion(grid, truth, LossFunction::Hamming(), 1.0, 0);
  const auto w = run.weights_at(1);
  const double a = 1.0 / (1.0 + std::exp(-1.0));
  const bool ok = std::abs(w[0] - 0.7311) <= 1e-4 &&
                  std::abs(w[1] - 0.2689) <= 1e-4 &&
                  std::abs(w[0] - a) <= 1e-12;
  return {ok, "weights (" + Fmt(w[0], 6) + ", " + Fmt(w[1], 6) + ")"};
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace sensordep

int main() {
  using sensordep::Criterion;
  const std::vector<Criterion> criteria = {
      {1, "polymatroid axioms on empirical vectors", 30,
       sensordep::AxiomSuite},
      {2, "empirical XOR-triple vector converges", 5,
       sensordep::XorConvergence},
      {3, "LZ78 golden parse", 1, sensordep::GoldenParse},
      {4, "LZ error trend on a Markov chain", 120, sensordep::MarkovTrend},
      {5, "temporal dependence detection", 60, sensordep::DelayDetection},
      {6, "early-stop greedy gap", 10, sensordep::EarlyStopGapSuite},
      {7, "greedy (1 - 1/e) approximation", 30,
       sensordep::GreedyApproximation},
      {8, "random size-5 draws on the 5+5 ensemble", 30,
       sensordep::SizedDrawSplit},
      {9, "base-containment frequency vs exact", 60,
       sensordep::BaseContainmentFrequency},
      {10, "exponential-weights regret bound", 120, sensordep::RegretSuite},
      {11, "fusion over 240 competitors", 60, sensordep::FusionReproduction},
      {12, "one-step weight formula", 1, sensordep::OneStepWeights},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    sensordep::Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    const bool in_budget = seconds <= c.budget_seconds;
    const bool pass = outcome.pass && in_budget;
    if (!pass) ++failed;
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << c.id << ": "
              << c.name << " | " << outcome.detail << " | "
              << sensordep::Fmt(seconds, 2) << " s"
              << (in_budget ? "" : " (over budget)") << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size()
            << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
