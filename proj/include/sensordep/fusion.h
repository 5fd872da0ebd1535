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

#ifndef SENSORDEP_FUSION_H_
#define SENSORDEP_FUSION_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace sensordep {

enum class LossKind { kHamming, kLogLoss };

// Instantaneous loss d(p, x) for a prediction p in [0, 1] and a bit x.
// Log-loss is measured in bits after clamping p into [delta, 1 - delta], which
// bounds it by d_max = -log2(delta).
class LossFunction {
 public:
  static LossFunction Hamming();
  static LossFunction LogLoss(double clamp_delta = 1e-3);

  LossKind kind() const { return kind_; }
  double clamp_delta() const { return clamp_delta_; }
  double d_max() const { return d_max_; }
  std::string name() const;

  double operator()(double p, int x) const;

 private:
  LossFunction(LossKind kind, double clamp_delta, double d_max)
      : kind_(kind), clamp_delta_(clamp_delta), d_max_(d_max) {}

  LossKind kind_;
  double clamp_delta_;
  double d_max_;
};

enum class FamilyKind {
  kPairAverage,     // unordered pairs i < j
  kOrderedPairs,    // all (i, j), self pairs included
  kMaxOfSubset,     // max over m-subsets
  kMedianOfSubset,  // median over m-subsets
};

// Synthesized sensors computed pointwise from base sensor outputs. Members
// are enumerated in lexicographic order of their base index tuples.
struct SynthesizedFamily {
  FamilyKind kind = FamilyKind::kPairAverage;
  int base_count = 0;
  int subset_size = 2;
  std::vector<std::vector<int>> parameters;  // 0-based base indices

  std::size_t size() const { return parameters.size(); }
  double Evaluate(std::size_t member, std::span<const double> base) const;
  std::string Label(std::size_t member) const;
};

SynthesizedFamily BuildFamily(FamilyKind kind, int base_count,
                              int subset_size = 2);

// "pair-average", "ordered-pairs", "max:m", "median:m".
SynthesizedFamily ParseFamily(const std::string& text, int base_count);

// Per-step outputs of every competitor.
class CompetitorSource {
 public:
  virtual ~CompetitorSource() = default;
  virtual std::size_t num_competitors() const = 0;
  virtual std::size_t num_steps() const = 0;
  // Writes the outputs at step t (0-based) into `out`.
  virtual void Outputs(std::size_t t, std::span<double> out) const = 0;
  virtual std::string Label(std::size_t j) const;
};

// Dense step-major grid of competitor outputs.
class CompetitorGrid : public CompetitorSource {
 public:
  // `rows[j][t]` is competitor j's output at step t.
  explicit CompetitorGrid(const std::vector<std::vector<double>>& rows);

  std::size_t num_competitors() const override { return m_; }
  std::size_t num_steps() const override { return n_; }
  void Outputs(std::size_t t, std::span<double> out) const override;
  double at(std::size_t j, std::size_t t) const { return data_[t * m_ + j]; }

 private:
  std::size_t m_ = 0;
  std::size_t n_ = 0;
  std::vector<double> data_;
};

// Base sensors followed by a synthesized family. Family members are computed
// when a step is requested, so memory stays O(K * n).
class FamilyCompetitors : public CompetitorSource {
 public:
  FamilyCompetitors(std::vector<std::vector<double>> base,
                    SynthesizedFamily family);

  std::size_t num_competitors() const override;
  std::size_t num_steps() const override { return n_; }
  void Outputs(std::size_t t, std::span<double> out) const override;
  std::string Label(std::size_t j) const override;

  const SynthesizedFamily& family() const { return family_; }
  int base_count() const { return static_cast<int>(base_.size()); }

 private:
  std::vector<std::vector<double>> base_;
  SynthesizedFamily family_;
  std::size_t n_ = 0;
};

// Materializes any source into a dense grid.
CompetitorGrid Materialize(const CompetitorSource& source);

// sqrt(8 ln M / (n d_max^2))
double DefaultEta(std::size_t num_competitors, std::size_t n, double d_max);

// d_max sqrt(ln M / (2n)): bound on expected per-step regret.
double RegretBound(std::size_t num_competitors, std::size_t n, double d_max);

struct FusionOptions {
  bool record_weights = true;
  // Restart on blocks of length 1, 2, 4, ... with eta tuned per block.
  bool doubling = false;
};

struct FusionRun {
  std::size_t num_competitors = 0;
  std::size_t num_steps = 0;
  double eta = 0.0;
  double d_max = 0.0;
  std::string loss_name;
  // (num_steps + 1) x num_competitors, row-major; row 0 is uniform. Empty
  // when weights were not recorded.
  std::vector<double> weight_history;
  std::vector<std::uint32_t> chosen;
  std::vector<double> algorithm_step_loss;
  // Cumulative (unnormalized) losses.
  double algorithm_loss = 0.0;
  double expected_algorithm_loss = 0.0;
  std::vector<double> per_competitor_loss;
  std::size_t best_competitor = 0;
  // Per-step: algorithm_loss / n - min_j L_j / n.
  double regret = 0.0;
  double expected_regret = 0.0;
  double regret_bound = 0.0;
  std::vector<std::size_t> block_starts;

  std::span<const double> weights_at(std::size_t t) const {
    return std::span<const double>(weight_history)
        .subspan(t * num_competitors, num_competitors);
  }
  // Competitor indices ordered by final weight, heaviest first.
  std::vector<std::size_t> RankByFinalWeight() const;

  nlohmann::ordered_json ToJson(const CompetitorSource* labels = nullptr) const;
  // Header t,w1..wM; one row per recorded step.
  void WriteWeightsCsv(std::ostream& out) const;
};

// Exponential weighting over the competitors. At each step a competitor is
// sampled from the current weights and charged its loss against truth[t];
// then every competitor's cumulative loss is updated and the weights become
// e^{-eta L_j} / sum_i e^{-eta L_i} for the next step.
FusionRun OnlineFusion(const CompetitorSource& competitors,
                       std::span<const std::uint8_t> truth,
                       const LossFunction& loss, double eta,
                       std::uint64_t seed, const FusionOptions& options = {});

// Oblivious worst case for follow-the-leader: at each step the truth is the
// opposite of what the current cumulative-loss leader predicts.
std::vector<std::uint8_t> AlternatingTrapTruth(
    const CompetitorSource& competitors, const LossFunction& loss);

}  // namespace sensordep

#endif  // SENSORDEP_FUSION_H_
