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

#include "sensordep/sources.h"

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "sensordep/empirical_entropy.h"
#include "sensordep/error.h"

namespace sensordep {
namespace {

constexpr double kStochasticTolerance = 1e-12;
constexpr std::uint64_t kMaxAnalyticOutcomes = std::uint64_t{1} << 24;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double UniformDouble(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Symbol SampleCategorical(std::span<const double> probs, double u) {
  double cumulative = 0.0;
  Symbol last = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    last = static_cast<Symbol>(i);
    cumulative += probs[i];
    if (u < cumulative) return last;
  }
  return last;
}

// Box-Muller on our own uniform stream so the result is platform independent.
double StandardNormal(std::mt19937_64& rng) {
  const double u1 = 1.0 - UniformDouble(rng);  // (0, 1]
  const double u2 = UniformDouble(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

void CheckProbabilityVector(std::span<const double> p, std::size_t size,
                            const std::string& what) {
  if (p.size() != size) {
    Fail(ErrorKind::kValidation, what + " has " + std::to_string(p.size()) +
                                     " entries, expected " +
                                     std::to_string(size));
  }
  double sum = 0.0;
  for (double v : p) {
    if (!std::isfinite(v) || v < 0.0) {
      Fail(ErrorKind::kValidation, what + " has a negative or non-finite entry");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > kStochasticTolerance) {
    Fail(ErrorKind::kValidation, what + " sums to " + std::to_string(sum));
  }
}

void CheckStochastic(const std::vector<std::vector<double>>& transition) {
  if (transition.empty()) {
    Fail(ErrorKind::kValidation, "transition matrix is empty");
  }
  for (std::size_t i = 0; i < transition.size(); ++i) {
    CheckProbabilityVector(transition[i], transition.size(),
                           "transition row " + std::to_string(i));
  }
}

// Irreducible and aperiodic, judged on the graph of positive entries.
void CheckErgodic(const std::vector<std::vector<double>>& transition) {
  const std::size_t s = transition.size();
  auto reach = [&](bool reverse) {
    std::vector<int> level(s, -1);
    std::vector<std::size_t> queue{0};
    level[0] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const std::size_t u = queue[head];
      for (std::size_t v = 0; v < s; ++v) {
        const double w = reverse ? transition[v][u] : transition[u][v];
        if (w > 0.0 && level[v] < 0) {
          level[v] = level[u] + 1;
          queue.push_back(v);
        }
      }
    }
    return level;
  };
  const std::vector<int> forward = reach(false);
  const std::vector<int> backward = reach(true);
  for (std::size_t v = 0; v < s; ++v) {
    if (forward[v] < 0 || backward[v] < 0) {
      Fail(ErrorKind::kValidation, "transition matrix is reducible");
    }
  }
  int period = 0;
  for (std::size_t u = 0; u < s; ++u) {
    for (std::size_t v = 0; v < s; ++v) {
      if (transition[u][v] > 0.0) {
        period = std::gcd(period, std::abs(forward[u] + 1 - forward[v]));
      }
    }
  }
  if (period != 1) {
    Fail(ErrorKind::kValidation,
         "transition matrix is periodic with period " + std::to_string(period));
  }
}

void CheckReference(int ref, int self, const std::string& what) {
  if (ref < 0 || ref >= self) {
    Fail(ErrorKind::kValidation,
         "sensor " + std::to_string(self + 1) + " (" + what +
             ") must reference an earlier sensor, got " +
             std::to_string(ref + 1));
  }
}

int RefFromJson(const nlohmann::json& j) { return j.get<int>() - 1; }

std::uint64_t Power(std::uint64_t base, std::size_t exp) {
  return ProductAlphabet(AlphabetSpec{base}, static_cast<int>(exp)).size;
}

}  // namespace

bool SourceSpec::IsMemoryless() const {
  for (const SensorDef& d : sensors) {
    if (std::holds_alternative<MarkovBase>(d) ||
        std::holds_alternative<DelayOf>(d)) {
      return false;
    }
  }
  return true;
}

int SourceSpec::MaxLag() const {
  int lag = 0;
  for (const SensorDef& d : sensors) {
    if (const auto* delay = std::get_if<DelayOf>(&d)) {
      lag = std::max(lag, delay->lag);
    }
  }
  return lag;
}

void SourceSpec::Validate() const {
  if (alphabet.size < 2) {
    Fail(ErrorKind::kValidation, "source alphabet needs at least 2 symbols");
  }
  if (sensors.empty()) Fail(ErrorKind::kValidation, "spec has no sensors");
  if (sensors.size() > static_cast<std::size_t>(kMaxSensors)) {
    Fail(ErrorKind::kValidation, "too many sensors");
  }
  for (int i = 0; i < num_sensors(); ++i) {
    const std::string name = "sensor " + std::to_string(i + 1);
    std::visit(
        Overloaded{
            [&](const IidBase& b) {
              CheckProbabilityVector(b.probabilities, alphabet.size,
                                     name + " probabilities");
            },
            [&](const MarkovBase& b) {
              if (b.transition.size() != alphabet.size) {
                Fail(ErrorKind::kValidation,
                     name + " transition matrix must be alpha x alpha");
              }
              CheckStochastic(b.transition);
              CheckErgodic(b.transition);
            },
            [&](const CopyOf& c) { CheckReference(c.source, i, "copy"); },
            [&](const XorOf& x) {
              CheckReference(x.first, i, "xor");
              CheckReference(x.second, i, "xor");
            },
            [&](const DelayOf& d) {
              CheckReference(d.source, i, "delay");
              if (d.lag < 1) {
                Fail(ErrorKind::kValidation, name + " lag must be >= 1");
              }
            },
            [&](const NoisyCopyOf& c) {
              CheckReference(c.source, i, "noisy-copy");
              if (!(c.flip >= 0.0 && c.flip <= 1.0)) {
                Fail(ErrorKind::kValidation,
                     name + " flip probability must lie in [0, 1]");
              }
            },
            [&](const FunctionOf& f) {
              if (f.sources.empty()) {
                Fail(ErrorKind::kValidation, name + " function has no inputs");
              }
              for (int s : f.sources) CheckReference(s, i, "function");
              const std::uint64_t size = Power(alphabet.size, f.sources.size());
              if (f.table.size() != size) {
                Fail(ErrorKind::kValidation,
                     name + " lookup table needs " + std::to_string(size) +
                         " entries");
              }
              for (Symbol v : f.table) {
                if (!alphabet.Contains(v)) {
                  Fail(ErrorKind::kValidation,
                       name + " lookup table value outside the alphabet");
                }
              }
            },
        },
        sensors[i]);
  }
}

SourceSpec SourceSpec::FromJson(const nlohmann::json& json) {
  SourceSpec spec;
  try {
    spec.alphabet.size = json.value("alphabet", std::uint64_t{2});
    spec.seed = json.value("seed", std::uint64_t{0});
    for (const auto& s : json.at("sensors")) {
      const std::string type = s.at("type").get<std::string>();
      if (type == "iid") {
        spec.sensors.push_back(
            IidBase{s.at("probs").get<std::vector<double>>()});
      } else if (type == "markov") {
        spec.sensors.push_back(MarkovBase{
            s.at("transition").get<std::vector<std::vector<double>>>()});
      } else if (type == "copy") {
        spec.sensors.push_back(CopyOf{RefFromJson(s.at("of"))});
      } else if (type == "xor") {
        const auto& of = s.at("of");
        if (!of.is_array() || of.size() != 2) {
          Fail(ErrorKind::kParse, "xor needs exactly two inputs");
        }
        spec.sensors.push_back(XorOf{RefFromJson(of[0]), RefFromJson(of[1])});
      } else if (type == "delay") {
        spec.sensors.push_back(
            DelayOf{RefFromJson(s.at("of")), s.value("lag", 1)});
      } else if (type == "noisy-copy") {
        spec.sensors.push_back(
            NoisyCopyOf{RefFromJson(s.at("of")), s.at("flip").get<double>()});
      } else if (type == "function") {
        FunctionOf f;
        for (const auto& r : s.at("of")) f.sources.push_back(RefFromJson(r));
        f.table = s.at("table").get<std::vector<Symbol>>();
        spec.sensors.push_back(std::move(f));
      } else {
        Fail(ErrorKind::kParse, "unknown sensor type '" + type + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorKind::kParse, std::string("bad source spec: ") + e.what());
  }
  spec.Validate();
  return spec;
}

nlohmann::ordered_json SourceSpec::ToJson() const {
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (const SensorDef& d : sensors) {
    list.push_back(std::visit(
        Overloaded{
            [](const IidBase& b) -> nlohmann::ordered_json {
              return {{"type", "iid"}, {"probs", b.probabilities}};
            },
            [](const MarkovBase& b) -> nlohmann::ordered_json {
              return {{"type", "markov"}, {"transition", b.transition}};
            },
            [](const CopyOf& c) -> nlohmann::ordered_json {
              return {{"type", "copy"}, {"of", c.source + 1}};
            },
            [](const XorOf& x) -> nlohmann::ordered_json {
              return {{"type", "xor"},
                      {"of", {x.first + 1, x.second + 1}}};
            },
            [](const DelayOf& d) -> nlohmann::ordered_json {
              return {{"type", "delay"}, {"of", d.source + 1}, {"lag", d.lag}};
            },
            [](const NoisyCopyOf& c) -> nlohmann::ordered_json {
              return {{"type", "noisy-copy"},
                      {"of", c.source + 1},
                      {"flip", c.flip}};
            },
            [](const FunctionOf& f) -> nlohmann::ordered_json {
              std::vector<int> of;
              for (int s : f.sources) of.push_back(s + 1);
              return {{"type", "function"}, {"of", of}, {"table", f.table}};
            },
        },
        d));
  }
  return {{"alphabet", alphabet.size}, {"seed", seed}, {"sensors", list}};
}

std::vector<double> StationaryDistribution(
    const std::vector<std::vector<double>>& transition) {
  CheckStochastic(transition);
  CheckErgodic(transition);
  const auto s = static_cast<Eigen::Index>(transition.size());
  // Solve pi (P - I) = 0 with the last equation replaced by sum(pi) = 1.
  Eigen::MatrixXd a(s, s);
  for (Eigen::Index i = 0; i < s; ++i) {
    for (Eigen::Index j = 0; j < s; ++j) {
      a(j, i) = transition[i][j] - (i == j ? 1.0 : 0.0);
    }
  }
  a.row(s - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(s);
  b(s - 1) = 1.0;
  Eigen::VectorXd pi = a.fullPivLu().solve(b);
  // One fixed-point polish step against rounding.
  Eigen::MatrixXd p(s, s);
  for (Eigen::Index i = 0; i < s; ++i) {
    for (Eigen::Index j = 0; j < s; ++j) p(i, j) = transition[i][j];
  }
  Eigen::RowVectorXd polished = pi.transpose() * p;
  polished /= polished.sum();
  return std::vector<double>(polished.data(), polished.data() + s);
}

double MarkovEntropyRate(const std::vector<std::vector<double>>& transition) {
  const std::vector<double> pi = StationaryDistribution(transition);
  double rate = 0.0;
  for (std::size_t i = 0; i < pi.size(); ++i) {
    rate += pi[i] * EntropyBits(transition[i]);
  }
  return rate;
}

SensorMatrix Generate(const SourceSpec& spec, std::size_t n) {
  spec.Validate();
  if (n < 1 || n < static_cast<std::size_t>(spec.MaxLag()) + 1) {
    Fail(ErrorKind::kInvalidArgument,
         "n must be at least max lag + 1 = " +
             std::to_string(spec.MaxLag() + 1));
  }
  const std::uint64_t alpha = spec.alphabet.size;
  std::mt19937_64 rng(spec.seed);
  std::vector<std::vector<Symbol>> rows;
  rows.reserve(spec.sensors.size());
  for (const SensorDef& def : spec.sensors) {
    std::vector<Symbol> row(n, 0);
    std::visit(
        Overloaded{
            [&](const IidBase& b) {
              for (auto& s : row) {
                s = SampleCategorical(b.probabilities, UniformDouble(rng));
              }
            },
            [&](const MarkovBase& b) {
              const std::vector<double> pi = StationaryDistribution(b.transition);
              row[0] = SampleCategorical(pi, UniformDouble(rng));
              for (std::size_t t = 1; t < n; ++t) {
                row[t] = SampleCategorical(b.transition[row[t - 1]],
                                           UniformDouble(rng));
              }
            },
            [&](const CopyOf& c) { row = rows[c.source]; },
            [&](const XorOf& x) {
              for (std::size_t t = 0; t < n; ++t) {
                row[t] = static_cast<Symbol>(
                    (rows[x.first][t] + rows[x.second][t]) % alpha);
              }
            },
            [&](const DelayOf& d) {
              for (std::size_t t = static_cast<std::size_t>(d.lag); t < n; ++t) {
                row[t] = rows[d.source][t - d.lag];
              }
            },
            [&](const NoisyCopyOf& c) {
              for (std::size_t t = 0; t < n; ++t) {
                Symbol s = rows[c.source][t];
                if (UniformDouble(rng) < c.flip) {
                  const auto shift =
                      1 + static_cast<std::uint64_t>(UniformDouble(rng) *
                                                     static_cast<double>(alpha - 1));
                  s = static_cast<Symbol>((s + shift) % alpha);
                }
                row[t] = s;
              }
            },
            [&](const FunctionOf& f) {
              for (std::size_t t = 0; t < n; ++t) {
                std::uint64_t index = 0;
                std::uint64_t place = 1;
                for (int src : f.sources) {
                  index += rows[src][t] * place;
                  place *= alpha;
                }
                row[t] = f.table[index];
              }
            },
        },
        def);
    rows.push_back(std::move(row));
  }
  return SensorMatrix(std::move(rows), spec.alphabet);
}

EntropyVector AnalyticEntropyVector(const SourceSpec& spec) {
  spec.Validate();
  if (!spec.IsMemoryless()) {
    Fail(ErrorKind::kInvalidArgument,
         "analytic entropy vectors need memoryless specs; use "
         "MarkovEntropyRate for Markov bases and delays");
  }
  const std::uint64_t alpha = spec.alphabet.size;
  const int k = spec.num_sensors();
  if (k > kDefaultLatticeCap) {
    Fail(ErrorKind::kInvalidArgument, "too many sensors for the full lattice");
  }
  ProductAlphabet(spec.alphabet, k);  // joint symbols must fit in 64 bits

  // Independent variables: one per iid base and one noise per noisy copy.
  std::vector<std::vector<double>> laws;
  std::vector<int> variable_of(k, -1);
  for (int i = 0; i < k; ++i) {
    if (const auto* b = std::get_if<IidBase>(&spec.sensors[i])) {
      variable_of[i] = static_cast<int>(laws.size());
      laws.push_back(b->probabilities);
    } else if (const auto* c = std::get_if<NoisyCopyOf>(&spec.sensors[i])) {
      std::vector<double> noise(alpha, c->flip / static_cast<double>(alpha - 1));
      noise[0] = 1.0 - c->flip;
      variable_of[i] = static_cast<int>(laws.size());
      laws.push_back(std::move(noise));
    }
  }
  std::uint64_t outcomes = 1;
  for (std::size_t v = 0; v < laws.size(); ++v) {
    outcomes *= alpha;
    if (outcomes > kMaxAnalyticOutcomes) {
      Fail(ErrorKind::kOverflow, "too many joint outcomes to enumerate");
    }
  }

  std::map<ProductSymbol, double> joint;
  std::vector<std::uint64_t> value(laws.size());
  std::vector<Symbol> sensor(k);
  for (std::uint64_t code = 0; code < outcomes; ++code) {
    double prob = 1.0;
    std::uint64_t rest = code;
    for (std::size_t v = 0; v < laws.size(); ++v) {
      value[v] = rest % alpha;
      rest /= alpha;
      prob *= laws[v][value[v]];
    }
    if (prob == 0.0) continue;
    for (int i = 0; i < k; ++i) {
      std::visit(
          Overloaded{
              [&](const IidBase&) {
                sensor[i] = static_cast<Symbol>(value[variable_of[i]]);
              },
              [&](const CopyOf& c) { sensor[i] = sensor[c.source]; },
              [&](const XorOf& x) {
                sensor[i] = static_cast<Symbol>(
                    (sensor[x.first] + sensor[x.second]) % alpha);
              },
              [&](const NoisyCopyOf& c) {
                sensor[i] = static_cast<Symbol>(
                    (sensor[c.source] + value[variable_of[i]]) % alpha);
              },
              [&](const FunctionOf& f) {
                std::uint64_t index = 0;
                std::uint64_t place = 1;
                for (int src : f.sources) {
                  index += sensor[src] * place;
                  place *= alpha;
                }
                sensor[i] = f.table[index];
              },
              [](const auto&) {},
          },
          spec.sensors[i]);
    }
    ProductSymbol joint_symbol = 0;
    ProductSymbol place = 1;
    for (int i = 0; i < k; ++i) {
      joint_symbol += sensor[i] * place;
      place *= alpha;
    }
    joint[joint_symbol] += prob;
  }

  EntropyVector out(k, EntropyKind::kAnalytic);
  std::vector<double> probs;
  for (SubsetMask s : AllNonEmptySubsets(k)) {
    const std::vector<int> members = s.Indices();
    std::map<ProductSymbol, double> marginal;
    for (const auto& [symbol, p] : joint) {
      const std::vector<Symbol> digits =
          DecodeProductSymbol(symbol, spec.alphabet, k);
      ProductSymbol projected = 0;
      ProductSymbol place = 1;
      for (int m : members) {
        projected += digits[m] * place;
        place *= alpha;
      }
      marginal[projected] += p;
    }
    probs.clear();
    for (const auto& [_, p] : marginal) probs.push_back(p);
    out.Set(s, EntropyBits(probs));
  }
  return out;
}

SourceSpec RandomMemorylessSpec(int num_sensors, std::uint64_t seed) {
  if (num_sensors < 1) {
    Fail(ErrorKind::kInvalidArgument, "need at least one sensor");
  }
  std::mt19937_64 rng(seed);
  SourceSpec spec;
  spec.alphabet.size = 2;
  spec.seed = seed;
  const int bases = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(
                                                    std::min(num_sensors, 3)));
  for (int i = 0; i < bases; ++i) {
    const double p = 0.05 + 0.9 * UniformDouble(rng);
    spec.sensors.push_back(IidBase{{p, 1.0 - p}});
  }
  for (int i = bases; i < num_sensors; ++i) {
    auto pick = [&]() { return static_cast<int>(rng() % static_cast<std::uint64_t>(i)); };
    switch (rng() % 4) {
      case 0:
        spec.sensors.push_back(CopyOf{pick()});
        break;
      case 1:
        spec.sensors.push_back(XorOf{pick(), pick()});
        break;
      case 2:
        spec.sensors.push_back(NoisyCopyOf{pick(), 0.5 * UniformDouble(rng)});
        break;
      default: {
        FunctionOf f{{pick(), pick()}, {}};
        for (int e = 0; e < 4; ++e) f.table.push_back(rng() % 2);
        spec.sensors.push_back(std::move(f));
      }
    }
  }
  return spec;
}

void NoisyObservationScenario::Validate() const {
  if (!(truth_stay >= 0.0 && truth_stay <= 1.0)) {
    Fail(ErrorKind::kValidation, "truth_stay must lie in [0, 1]");
  }
  if (!(low >= 0.0 && high <= 1.0 && low < high)) {
    Fail(ErrorKind::kValidation, "need 0 <= low < high <= 1");
  }
  if (sensors.empty()) Fail(ErrorKind::kValidation, "scenario has no sensors");
  for (const NoisySensor& s : sensors) {
    if (!(s.sigma >= 0.0) || !(s.artifact_rate >= 0.0 && s.artifact_rate <= 1.0)) {
      Fail(ErrorKind::kValidation, "bad sensor noise parameters");
    }
  }
}

NoisyObservationScenario NoisyObservationScenario::FromJson(
    const nlohmann::json& json) {
  NoisyObservationScenario s;
  try {
    s.truth_stay = json.value("truth_stay", s.truth_stay);
    s.low = json.value("low", s.low);
    s.high = json.value("high", s.high);
    s.seed = json.value("seed", std::uint64_t{0});
    for (const auto& j : json.at("sensors")) {
      s.sensors.push_back(
          {j.at("sigma").get<double>(), j.value("artifact_rate", 0.0)});
    }
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorKind::kParse, std::string("bad scenario: ") + e.what());
  }
  s.Validate();
  return s;
}

nlohmann::ordered_json NoisyObservationScenario::ToJson() const {
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (const NoisySensor& s : sensors) {
    list.push_back({{"sigma", s.sigma}, {"artifact_rate", s.artifact_rate}});
  }
  return {{"scenario", "noisy-observation"},
          {"truth_stay", truth_stay},
          {"low", low},
          {"high", high},
          {"seed", seed},
          {"sensors", list}};
}

NoisyObservations GenerateNoisyObservations(
    const NoisyObservationScenario& scenario, std::size_t n) {
  scenario.Validate();
  if (n < 1) Fail(ErrorKind::kInvalidArgument, "n must be positive");
  std::mt19937_64 rng(scenario.seed);
  NoisyObservations out;
  out.truth.resize(n);
  out.truth[0] = UniformDouble(rng) < 0.5 ? 0 : 1;
  for (std::size_t t = 1; t < n; ++t) {
    const bool stay = UniformDouble(rng) < scenario.truth_stay;
    out.truth[t] = stay ? out.truth[t - 1] : 1 - out.truth[t - 1];
  }
  for (const NoisySensor& s : scenario.sensors) {
    std::vector<double> row(n);
    for (std::size_t t = 0; t < n; ++t) {
      const double level = out.truth[t] ? scenario.high : scenario.low;
      const double reading = level + s.sigma * StandardNormal(rng);
      const bool artifact = UniformDouble(rng) < s.artifact_rate;
      row[t] = artifact ? UniformDouble(rng) : std::clamp(reading, 0.0, 1.0);
    }
    out.readings.push_back(std::move(row));
  }
  return out;
}

}  // namespace sensordep
