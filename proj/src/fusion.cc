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

#include "sensordep/fusion.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>

#include "sensordep/error.h"
#include "sensordep/format.h"

namespace sensordep {
namespace {

// Lexicographic m-combinations of {0..k-1}.
std::vector<std::vector<int>> Combinations(int k, int m) {
  std::vector<std::vector<int>> out;
  std::vector<int> c(m);
  std::iota(c.begin(), c.end(), 0);
  while (true) {
    out.push_back(c);
    int i = m - 1;
    while (i >= 0 && c[i] == k - m + i) --i;
    if (i < 0) break;
    ++c[i];
    for (int j = i + 1; j < m; ++j) c[j] = c[j - 1] + 1;
  }
  return out;
}

void CheckOutput(double p, std::size_t j, std::size_t t) {
  if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
    Fail(ErrorKind::kValidation,
         "competitor " + std::to_string(j + 1) + " output at step " +
             std::to_string(t) + " is outside [0,1]");
  }
}

// Softmax of -eta * losses, shifted by the minimum loss for stability.
void ExponentialWeights(std::span<const double> losses, double eta,
                        std::span<double> weights) {
  const double lmin = *std::min_element(losses.begin(), losses.end());
  double total = 0.0;
  for (std::size_t j = 0; j < losses.size(); ++j) {
    weights[j] = std::exp(-eta * (losses[j] - lmin));
    total += weights[j];
  }
  for (double& w : weights) w /= total;
}

std::size_t Sample(std::span<const double> weights, double u) {
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    if (weights[j] <= 0.0) continue;
    last_positive = j;
    cumulative += weights[j];
    if (u < cumulative) return j;
  }
  return last_positive;
}

}  // namespace

LossFunction LossFunction::Hamming() {
  return LossFunction(LossKind::kHamming, 0.0, 1.0);
}

LossFunction LossFunction::LogLoss(double clamp_delta) {
  if (!(clamp_delta > 0.0 && clamp_delta < 0.5)) {
    Fail(ErrorKind::kInvalidArgument, "log-loss clamp must lie in (0, 0.5)");
  }
  return LossFunction(LossKind::kLogLoss, clamp_delta, -std::log2(clamp_delta));
}

std::string LossFunction::name() const {
  return kind_ == LossKind::kHamming ? "hamming" : "logloss";
}

double LossFunction::operator()(double p, int x) const {
  if (x != 0 && x != 1) {
    Fail(ErrorKind::kValidation, "truth must be a bit, got " +
                                     std::to_string(x));
  }
  if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
    Fail(ErrorKind::kValidation, "prediction outside [0,1]");
  }
  if (kind_ == LossKind::kHamming) {
    if (p != 0.0 && p != 1.0) {
      Fail(ErrorKind::kValidation,
           "Hamming loss needs binary predictions; got " + FormatDouble(p) +
               " (quantize first)");
    }
    return (p == 1.0) == (x == 1) ? 0.0 : 1.0;
  }
  const double q = std::clamp(p, clamp_delta_, 1.0 - clamp_delta_);
  return x == 1 ? -std::log2(q) : -std::log2(1.0 - q);
}

double SynthesizedFamily::Evaluate(std::size_t member,
                                   std::span<const double> base) const {
  const std::vector<int>& idx = parameters.at(member);
  switch (kind) {
    case FamilyKind::kPairAverage:
    case FamilyKind::kOrderedPairs:
      return 0.5 * (base[idx[0]] + base[idx[1]]);
    case FamilyKind::kMaxOfSubset: {
      double v = base[idx[0]];
      for (int i : idx) v = std::max(v, base[i]);
      return v;
    }
    case FamilyKind::kMedianOfSubset: {
      std::vector<double> v;
      v.reserve(idx.size());
      for (int i : idx) v.push_back(base[i]);
      std::sort(v.begin(), v.end());
      const std::size_t h = v.size() / 2;
      return v.size() % 2 == 1 ? v[h] : 0.5 * (v[h - 1] + v[h]);
    }
  }
  return 0.0;
}

std::string SynthesizedFamily::Label(std::size_t member) const {
  std::string name;
  switch (kind) {
    case FamilyKind::kPairAverage:
    case FamilyKind::kOrderedPairs:
      name = "avg";
      break;
    case FamilyKind::kMaxOfSubset:
      name = "max";
      break;
    case FamilyKind::kMedianOfSubset:
      name = "median";
      break;
  }
  name += '(';
  const std::vector<int>& idx = parameters.at(member);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i) name += ' ';
    name += std::to_string(idx[i] + 1);
  }
  return name + ')';
}

SynthesizedFamily BuildFamily(FamilyKind kind, int base_count,
                              int subset_size) {
  if (base_count < 1) {
    Fail(ErrorKind::kInvalidArgument, "family needs at least one base sensor");
  }
  SynthesizedFamily family;
  family.kind = kind;
  family.base_count = base_count;
  switch (kind) {
    case FamilyKind::kPairAverage:
      family.subset_size = 2;
      if (base_count >= 2) family.parameters = Combinations(base_count, 2);
      break;
    case FamilyKind::kOrderedPairs:
      family.subset_size = 2;
      for (int i = 0; i < base_count; ++i) {
        for (int j = 0; j < base_count; ++j) family.parameters.push_back({i, j});
      }
      break;
    case FamilyKind::kMaxOfSubset:
    case FamilyKind::kMedianOfSubset:
      if (subset_size < 1 || subset_size > base_count) {
        Fail(ErrorKind::kInvalidArgument,
             "subset size " + std::to_string(subset_size) +
                 " must lie in 1.." + std::to_string(base_count));
      }
      family.subset_size = subset_size;
      family.parameters = Combinations(base_count, subset_size);
      break;
  }
  return family;
}

SynthesizedFamily ParseFamily(const std::string& text, int base_count) {
  if (text == "pair-average") {
    return BuildFamily(FamilyKind::kPairAverage, base_count);
  }
  if (text == "ordered-pairs") {
    return BuildFamily(FamilyKind::kOrderedPairs, base_count);
  }
  const auto colon = text.find(':');
  if (colon != std::string::npos) {
    const std::string head = text.substr(0, colon);
    int m = 0;
    try {
      std::size_t used = 0;
      m = std::stoi(text.substr(colon + 1), &used);
      if (used != text.size() - colon - 1) throw std::invalid_argument(text);
    } catch (const std::logic_error&) {
      Fail(ErrorKind::kParse, "bad family subset size in '" + text + "'");
    }
    if (head == "max") return BuildFamily(FamilyKind::kMaxOfSubset, base_count, m);
    if (head == "median") {
      return BuildFamily(FamilyKind::kMedianOfSubset, base_count, m);
    }
  }
  Fail(ErrorKind::kParse, "unknown family '" + text + "'");
}

std::string CompetitorSource::Label(std::size_t j) const {
  return "c" + std::to_string(j + 1);
}

CompetitorGrid::CompetitorGrid(const std::vector<std::vector<double>>& rows) {
  if (rows.empty() || rows.front().empty()) {
    Fail(ErrorKind::kEmptyInput, "competitor grid is empty");
  }
  m_ = rows.size();
  n_ = rows.front().size();
  data_.resize(m_ * n_);
  for (std::size_t j = 0; j < m_; ++j) {
    if (rows[j].size() != n_) {
      Fail(ErrorKind::kValidation, "competitor rows differ in length");
    }
    for (std::size_t t = 0; t < n_; ++t) {
      CheckOutput(rows[j][t], j, t);
      data_[t * m_ + j] = rows[j][t];
    }
  }
}

void CompetitorGrid::Outputs(std::size_t t, std::span<double> out) const {
  std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(t * m_), m_,
              out.begin());
}

FamilyCompetitors::FamilyCompetitors(std::vector<std::vector<double>> base,
                                     SynthesizedFamily family)
    : base_(std::move(base)), family_(std::move(family)) {
  if (base_.empty() || base_.front().empty()) {
    Fail(ErrorKind::kEmptyInput, "no base sensor outputs");
  }
  if (family_.base_count != static_cast<int>(base_.size())) {
    Fail(ErrorKind::kInvalidArgument, "family built for a different base count");
  }
  n_ = base_.front().size();
  for (std::size_t j = 0; j < base_.size(); ++j) {
    if (base_[j].size() != n_) {
      Fail(ErrorKind::kValidation, "base sensor rows differ in length");
    }
    for (std::size_t t = 0; t < n_; ++t) CheckOutput(base_[j][t], j, t);
  }
}

std::size_t FamilyCompetitors::num_competitors() const {
  return base_.size() + family_.size();
}

void FamilyCompetitors::Outputs(std::size_t t, std::span<double> out) const {
  const std::size_t k = base_.size();
  std::vector<double> column(k);
  for (std::size_t j = 0; j < k; ++j) column[j] = base_[j][t];
  std::copy(column.begin(), column.end(), out.begin());
  for (std::size_t m = 0; m < family_.size(); ++m) {
    out[k + m] = family_.Evaluate(m, column);
  }
}

std::string FamilyCompetitors::Label(std::size_t j) const {
  if (j < base_.size()) return "s" + std::to_string(j + 1);
  return family_.Label(j - base_.size());
}

CompetitorGrid Materialize(const CompetitorSource& source) {
  const std::size_t m = source.num_competitors();
  const std::size_t n = source.num_steps();
  std::vector<std::vector<double>> rows(m, std::vector<double>(n));
  std::vector<double> column(m);
  for (std::size_t t = 0; t < n; ++t) {
    source.Outputs(t, column);
    for (std::size_t j = 0; j < m; ++j) rows[j][t] = column[j];
  }
  return CompetitorGrid(rows);
}

double DefaultEta(std::size_t num_competitors, std::size_t n, double d_max) {
  if (num_competitors < 2 || n < 1 || !(d_max > 0.0)) {
    Fail(ErrorKind::kInvalidArgument,
         "default eta needs M >= 2, n >= 1 and d_max > 0");
  }
  return std::sqrt(8.0 * std::log(static_cast<double>(num_competitors)) /
                   (static_cast<double>(n) * d_max * d_max));
}

double RegretBound(std::size_t num_competitors, std::size_t n, double d_max) {
  if (num_competitors < 2 || n < 1) {
    Fail(ErrorKind::kInvalidArgument, "regret bound needs M >= 2 and n >= 1");
  }
  return d_max * std::sqrt(std::log(static_cast<double>(num_competitors)) /
                           (2.0 * static_cast<double>(n)));
}

std::vector<std::size_t> FusionRun::RankByFinalWeight() const {
  std::vector<std::size_t> order(num_competitors);
  std::iota(order.begin(), order.end(), 0);
  if (weight_history.empty()) return order;
  auto w = weights_at(weight_history.size() / num_competitors - 1);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return w[a] > w[b]; });
  return order;
}

nlohmann::ordered_json FusionRun::ToJson(const CompetitorSource* labels) const {
  nlohmann::ordered_json out;
  out["num_competitors"] = num_competitors;
  out["num_steps"] = num_steps;
  out["loss"] = loss_name;
  out["eta"] = eta;
  out["d_max"] = d_max;
  out["algorithm_loss"] = algorithm_loss;
  out["expected_algorithm_loss"] = expected_algorithm_loss;
  out["best_competitor"] = best_competitor + 1;
  if (labels) out["best_competitor_label"] = labels->Label(best_competitor);
  out["regret"] = regret;
  out["expected_regret"] = expected_regret;
  out["regret_bound"] = regret_bound;
  out["per_competitor_loss"] = per_competitor_loss;
  if (labels) {
    std::vector<std::string> names;
    for (std::size_t j = 0; j < num_competitors; ++j) {
      names.push_back(labels->Label(j));
    }
    out["competitor_labels"] = names;
  }
  if (!weight_history.empty()) {
    std::vector<double> last(weights_at(num_steps).begin(),
                             weights_at(num_steps).end());
    out["final_weights"] = last;
  }
  if (!block_starts.empty()) out["block_starts"] = block_starts;
  std::vector<std::uint32_t> chosen_1based(chosen);
  for (auto& c : chosen_1based) ++c;
  out["chosen"] = chosen_1based;
  out["algorithm_step_loss"] = algorithm_step_loss;
  return out;
}

void FusionRun::WriteWeightsCsv(std::ostream& out) const {
  out << 't';
  for (std::size_t j = 0; j < num_competitors; ++j) out << ",w" << j + 1;
  out << '\n';
  if (weight_history.empty()) return;
  const std::size_t rows = weight_history.size() / num_competitors;
  for (std::size_t t = 0; t < rows; ++t) {
    out << t;
    for (double w : weights_at(t)) out << ',' << FormatDouble(w);
    out << '\n';
  }
}

FusionRun OnlineFusion(const CompetitorSource& competitors,
                       std::span<const std::uint8_t> truth,
                       const LossFunction& loss, double eta,
                       std::uint64_t seed, const FusionOptions& options) {
  const std::size_t m = competitors.num_competitors();
  const std::size_t n = competitors.num_steps();
  if (m < 1 || n < 1) Fail(ErrorKind::kEmptyInput, "no competitors or steps");
  if (truth.size() != n) {
    Fail(ErrorKind::kValidation,
         "truth has " + std::to_string(truth.size()) + " steps, competitors " +
             std::to_string(n));
  }
  if (!options.doubling && !(eta > 0.0 && std::isfinite(eta))) {
    Fail(ErrorKind::kInvalidArgument, "eta must be positive");
  }
  if (options.doubling && m < 2) {
    Fail(ErrorKind::kInvalidArgument, "doubling mode needs at least 2 competitors");
  }

  FusionRun run;
  run.num_competitors = m;
  run.num_steps = n;
  run.d_max = loss.d_max();
  run.loss_name = loss.name();
  run.eta = eta;
  run.per_competitor_loss.assign(m, 0.0);
  run.chosen.reserve(n);
  run.algorithm_step_loss.reserve(n);
  if (options.record_weights) run.weight_history.reserve((n + 1) * m);

  std::mt19937_64 rng(seed);
  std::vector<double> weights(m, 1.0 / static_cast<double>(m));
  std::vector<double> block_loss(m, 0.0);
  std::vector<double> outputs(m);
  std::vector<double> step_loss(m);
  if (options.record_weights) {
    run.weight_history.insert(run.weight_history.end(), weights.begin(),
                              weights.end());
  }

  std::size_t block_len = 1;
  std::size_t block_end = n;
  double bound_sum = 0.0;
  auto start_block = [&](std::size_t t) {
    block_end = std::min(n, t + block_len);
    run.eta = DefaultEta(m, block_len, loss.d_max());
    run.block_starts.push_back(t);
    std::fill(block_loss.begin(), block_loss.end(), 0.0);
    std::fill(weights.begin(), weights.end(), 1.0 / static_cast<double>(m));
    bound_sum += loss.d_max() *
                 std::sqrt(static_cast<double>(block_end - t) *
                           std::log(static_cast<double>(m)) / 2.0);
  };
  if (options.doubling) start_block(0);

  for (std::size_t t = 0; t < n; ++t) {
    if (options.doubling && t == block_end) {
      block_len *= 2;
      start_block(t);
    }
    competitors.Outputs(t, outputs);
    const int x = truth[t];
    double expected = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      CheckOutput(outputs[j], j, t);
      step_loss[j] = loss(outputs[j], x);
      expected += weights[j] * step_loss[j];
    }
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    const std::size_t pick = Sample(weights, u);
    run.chosen.push_back(static_cast<std::uint32_t>(pick));
    run.algorithm_step_loss.push_back(step_loss[pick]);
    run.algorithm_loss += step_loss[pick];
    run.expected_algorithm_loss += expected;
    for (std::size_t j = 0; j < m; ++j) {
      run.per_competitor_loss[j] += step_loss[j];
      block_loss[j] += step_loss[j];
    }
    ExponentialWeights(block_loss, run.eta, weights);
    if (options.record_weights) {
      run.weight_history.insert(run.weight_history.end(), weights.begin(),
                                weights.end());
    }
  }

  const auto best = std::min_element(run.per_competitor_loss.begin(),
                                     run.per_competitor_loss.end());
  run.best_competitor =
      static_cast<std::size_t>(best - run.per_competitor_loss.begin());
  const double nd = static_cast<double>(n);
  run.regret = (run.algorithm_loss - *best) / nd;
  run.expected_regret = (run.expected_algorithm_loss - *best) / nd;
  if (options.doubling) {
    run.regret_bound = bound_sum / nd;
  } else if (m >= 2) {
    run.regret_bound = RegretBound(m, n, loss.d_max());
  }
  return run;
}

std::vector<std::uint8_t> AlternatingTrapTruth(
    const CompetitorSource& competitors, const LossFunction& loss) {
  const std::size_t m = competitors.num_competitors();
  const std::size_t n = competitors.num_steps();
  std::vector<double> cumulative(m, 0.0);
  std::vector<double> outputs(m);
  std::vector<std::uint8_t> truth(n);
  for (std::size_t t = 0; t < n; ++t) {
    competitors.Outputs(t, outputs);
    const auto leader = static_cast<std::size_t>(
        std::min_element(cumulative.begin(), cumulative.end()) -
        cumulative.begin());
    truth[t] = outputs[leader] >= 0.5 ? 0 : 1;
    for (std::size_t j = 0; j < m; ++j) {
      cumulative[j] += loss(outputs[j], truth[t]);
    }
  }
  return truth;
}

}  // namespace sensordep
