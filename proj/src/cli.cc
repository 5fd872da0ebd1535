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

#include "sensordep/cli.h"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <ostream>
#include <sstream>

#include "sensordep/csv_io.h"
#include "sensordep/empirical_entropy.h"
#include "sensordep/format.h"
#include "sensordep/fusion.h"
#include "sensordep/lz78.h"
#include "sensordep/polymatroid.h"
#include "sensordep/selection.h"
#include "sensordep/sources.h"

namespace sensordep {
namespace {

namespace fs = std::filesystem;

template <typename T>
nlohmann::ordered_json OptionalJson(const std::optional<T>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

std::ofstream OpenOutput(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorKind::kIo, "cannot write '" + path.string() + "'");
  return out;
}

void WriteJson(const fs::path& path, const nlohmann::ordered_json& json) {
  std::ofstream out = OpenOutput(path);
  out << json.dump(2) << '\n';
}

nlohmann::json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorKind::kIo, "cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorKind::kParse, "'" + path + "': " + e.what());
  }
}

std::string UtcTimestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream ss;
  ss << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return ss.str();
}

void WriteManifest(const fs::path& dir, const RunConfig& config) {
  nlohmann::ordered_json manifest;
  manifest["tool"] = "sensordep";
  manifest["version"] = kToolVersion;
  manifest["command"] = CommandName(config.command);
  manifest["config"] = config.ToJson();
  manifest["created_at"] = UtcTimestamp();
  WriteJson(dir / "manifest.json", manifest);
}

SensorData LoadInput(const RunConfig& config) {
  if (config.input.empty()) {
    Fail(ErrorKind::kInvalidArgument, "--input is required");
  }
  CsvReadOptions options;
  options.bins = config.bins;
  options.alphabet = config.alphabet;
  return ReadSensorCsvFile(config.input, options);
}

std::optional<std::vector<SubsetMask>> ParseSubsets(const RunConfig& config) {
  if (config.subsets.empty()) return std::nullopt;
  std::vector<SubsetMask> out;
  for (const std::string& s : config.subsets) out.push_back(SubsetMask::Parse(s));
  return out;
}

std::unique_ptr<EntropyOracle> MakeOracle(const std::string& estimator,
                                          const SensorMatrix& matrix) {
  if (estimator == "empirical") return std::make_unique<EmpiricalOracle>(matrix);
  if (estimator == "lz") return std::make_unique<LzOracle>(matrix);
  Fail(ErrorKind::kInvalidArgument, "unknown estimator '" + estimator + "'");
}

void RunAnalyze(const RunConfig& config, const fs::path& dir, std::ostream& out) {
  const SensorData data = LoadInput(config);
  const SensorMatrix& matrix = data.matrix;
  const auto subsets = ParseSubsets(config);

  std::vector<ParseResult> parses;
  EntropyVector vec = [&] {
    if (config.estimator == "empirical") {
      return EmpiricalEntropyVector(matrix, subsets, config.lattice_cap);
    }
    if (config.estimator == "lz") {
      return LzEntropyVector(matrix, subsets, config.lattice_cap, &parses);
    }
    Fail(ErrorKind::kInvalidArgument,
         "unknown estimator '" + config.estimator + "'");
  }();

  WriteJson(dir / "entropy.json", vec.ToJson());
  {
    std::ofstream csv = OpenOutput(dir / "entropy.csv");
    vec.WriteCsv(csv);
  }
  if (!parses.empty()) {
    std::ofstream csv = OpenOutput(dir / "lz_parses.csv");
    csv << "mask,members,phrase_count,complete_phrases,last_phrase_partial,"
           "sequence_length,alphabet_size\n";
    std::size_t i = 0;
    const auto order = ResolveSubsets(matrix.num_sensors(), subsets,
                                      config.lattice_cap);
    for (SubsetMask s : order) {
      const ParseResult& p = parses[i++];
      csv << s.bits() << ',' << s.MembersString() << ',' << p.phrase_count
          << ',' << p.complete_phrases << ','
          << (p.last_phrase_partial ? "true" : "false") << ','
          << p.sequence_length << ',' << p.alphabet_size << '\n';
    }
  }
  if (config.phrases) {
    const SubsetMask s = SubsetMask::Parse(*config.phrases);
    const ProjectedSequence seq = ProjectSubset(matrix, s);
    std::vector<PhraseSpan> spans;
    Lz78Parse(seq.symbols, seq.alphabet, &spans);
    std::ofstream txt = OpenOutput(dir / "phrases.txt");
    WritePhrases(txt, seq.symbols, spans, seq.alphabet);
  }

  out << "sensors " << matrix.num_sensors() << ", steps "
      << matrix.num_steps() << ", alphabet " << matrix.alphabet().size
      << ", estimator " << EntropyKindName(vec.kind()) << '\n';
  for (int i : matrix.ConstantSensors()) {
    out << "note: sensor " << i + 1 << " is constant (zero entropy)\n";
  }
  for (const auto& [mask, bits] : vec.values()) {
    out << std::setw(10) << mask.bits() << "  {" << mask.MembersString()
        << "}  " << std::fixed << std::setprecision(4) << bits << '\n';
  }
  out.unsetf(std::ios::fixed);

  if (vec.IsComplete()) {
    const AxiomReport report = CheckPolymatroid(vec, config.tolerance);
    WriteJson(dir / "axioms.json", report.ToJson());
    out << "polymatroid: " << (report.is_polymatroid ? "yes" : "no") << '\n';
    if (config.matroid) {
      const double unit = config.round_unit.value_or(
          std::log2(static_cast<double>(matrix.alphabet().size)));
      const MatroidRounding rounding = RoundToMatroid(vec, unit);
      nlohmann::ordered_json mj;
      mj["unit"] = unit;
      mj["is_matroid"] = rounding.candidate.has_value();
      mj["rounding_residual"] = rounding.rounding_residual;
      if (rounding.candidate) {
        mj["rank"] = rounding.candidate->rank;
        std::ofstream csv = OpenOutput(dir / "matroid.csv");
        rounding.candidate->WriteCsv(csv);
        out << "matroid rank " << rounding.candidate->rank << '\n';
      } else {
        mj["failure"] = rounding.failure;
        out << "not a matroid: " << rounding.failure << '\n';
      }
      WriteJson(dir / "matroid.json", mj);
    }
  }
}

void RunSelectGreedy(const RunConfig& config, const fs::path& dir,
                     std::ostream& out) {
  std::optional<SensorData> data;
  std::unique_ptr<EntropyOracle> oracle;
  if (!config.spec.empty()) {
    const SourceSpec spec = SourceSpec::FromJson(ReadJsonFile(config.spec));
    oracle = std::make_unique<VectorOracle>(AnalyticEntropyVector(spec));
  } else {
    data.emplace(LoadInput(config));
    oracle = MakeOracle(config.estimator, data->matrix);
  }
  const int k = oracle->num_sensors();
  const GreedyTrace trace = GreedySelection(*oracle, k, config.epsilon);
  nlohmann::ordered_json json = trace.ToJson();
  json["estimator"] = config.spec.empty() ? config.estimator : "analytic";
  json["oracle_queries"] = oracle->evaluation_count();
  WriteJson(dir / "greedy.json", json);

  out << "step  sensor  entropy   gain\n";
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const GreedyStep& s = trace.steps[i];
    out << std::setw(4) << i + 1 << "  " << std::setw(6) << s.sensor + 1
        << "  " << std::fixed << std::setprecision(4) << s.entropy << "  "
        << s.gain << '\n';
  }
  out << "final {" << trace.final_subset.MembersString() << "} entropy "
      << trace.final_entropy << (trace.stopped_early ? " (stopped early)" : "")
      << ", residual bound " << trace.residual_bound << '\n';
  out.unsetf(std::ios::fixed);
}

void RunSelectRandom(const RunConfig& config, const fs::path& dir,
                     std::ostream& out) {
  std::optional<SensorData> data;
  std::unique_ptr<EntropyOracle> oracle;
  int k = config.num_sensors.value_or(0);
  if (!config.input.empty()) {
    data.emplace(LoadInput(config));
    oracle = MakeOracle(config.estimator, data->matrix);
    k = data->matrix.num_sensors();
  }
  if (k < 1) {
    Fail(ErrorKind::kInvalidArgument, "pass --input or --k");
  }
  if (config.trials < 1) {
    Fail(ErrorKind::kInvalidArgument, "--trials must be positive");
  }
  nlohmann::ordered_json draws = nlohmann::ordered_json::array();
  for (int trial = 0; trial < config.trials; ++trial) {
    const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(trial);
    nlohmann::ordered_json d;
    d["trial"] = trial + 1;
    d["seed"] = seed;
    SubsetMask mask;
    if (config.size) {
      const SizedDraw draw =
          RandomSelectionOfSize(k, config.q, *config.size, seed);
      mask = draw.subset;
      d["attempts"] = draw.attempts;
    } else {
      mask = RandomSelection(k, config.q, seed);
    }
    d["mask"] = mask.bits();
    d["members"] = mask.MembersString();
    out << "trial " << trial + 1 << ": {" << mask.MembersString() << "}";
    if (oracle && !mask.empty()) {
      const double h = oracle->Query(mask);
      double singles = 0.0;
      for (int i : mask.Indices()) {
        singles += oracle->Query(SubsetMask(std::uint64_t{1} << i));
      }
      d["entropy"] = h;
      d["independence_defect"] = singles - h;
      out << " entropy " << FormatDouble(h) << " defect "
          << FormatDouble(singles - h);
    }
    out << '\n';
    draws.push_back(std::move(d));
  }
  nlohmann::ordered_json json;
  json["k"] = k;
  json["q"] = config.q;
  json["draws"] = std::move(draws);
  if (config.guarantee_a && config.rank) {
    const std::uint64_t n = data ? data->matrix.num_steps() : 1;
    const RandomSelectionGuarantee g = ComputeRandomSelectionGuarantee(
        *config.guarantee_a, config.q, *config.rank, k, n);
    json["guarantee"] = {{"probability_floor", g.probability_floor},
                         {"required_disjoint_bases", g.required_disjoint_bases},
                         {"order_term", g.order_term},
                         {"caveat", g.caveat}};
  }
  WriteJson(dir / "random.json", json);
}

// Rounds every competitor output at 0.5 so Hamming loss applies.
class ThresholdedCompetitors : public CompetitorSource {
 public:
  explicit ThresholdedCompetitors(const CompetitorSource& inner)
      : inner_(inner) {}
  std::size_t num_competitors() const override {
    return inner_.num_competitors();
  }
  std::size_t num_steps() const override { return inner_.num_steps(); }
  void Outputs(std::size_t t, std::span<double> out) const override {
    inner_.Outputs(t, out);
    for (double& v : out) v = v >= 0.5 ? 1.0 : 0.0;
  }
  std::string Label(std::size_t j) const override { return inner_.Label(j); }

 private:
  const CompetitorSource& inner_;
};

void RunFuse(const RunConfig& config, const fs::path& dir, std::ostream& out) {
  const SensorData data = LoadInput(config);
  std::vector<std::vector<double>> base;
  if (data.readings) {
    base = *data.readings;
  } else {
    const double scale =
        static_cast<double>(std::max<std::uint64_t>(1, data.matrix.alphabet().size - 1));
    for (int i = 0; i < data.matrix.num_sensors(); ++i) {
      std::vector<double> row;
      for (Symbol s : data.matrix.row(i)) row.push_back(s / scale);
      base.push_back(std::move(row));
    }
  }

  std::vector<std::uint8_t> truth;
  if (config.truth_sensor) {
    const int j = *config.truth_sensor - 1;
    if (j < 0 || j >= static_cast<int>(base.size())) {
      Fail(ErrorKind::kInvalidArgument, "--truth-sensor out of range");
    }
    for (double v : base[j]) {
      if (v != 0.0 && v != 1.0) {
        Fail(ErrorKind::kValidation, "truth sensor must be binary");
      }
      truth.push_back(v == 1.0 ? 1 : 0);
    }
    base.erase(base.begin() + j);
    if (base.empty()) Fail(ErrorKind::kInvalidArgument, "no competitors left");
  } else if (!config.truth.empty()) {
    truth = ReadTruthCsvFile(config.truth);
  } else {
    Fail(ErrorKind::kInvalidArgument, "pass --truth or --truth-sensor");
  }

  const int k = static_cast<int>(base.size());
  SynthesizedFamily family;
  family.base_count = k;
  if (config.family != "none") family = ParseFamily(config.family, k);

  const LossFunction loss = config.loss == "hamming"
                                ? LossFunction::Hamming()
                                : config.loss == "logloss"
                                      ? LossFunction::LogLoss(config.delta)
                                      : (Fail(ErrorKind::kInvalidArgument,
                                              "unknown loss '" + config.loss + "'"),
                                         LossFunction::Hamming());

  FamilyCompetitors lazy(std::move(base), family);
  std::optional<CompetitorGrid> grid;
  const CompetitorSource* source = &lazy;
  if (!config.lazy) {
    grid.emplace(Materialize(lazy));
    source = &*grid;
  }
  std::optional<ThresholdedCompetitors> thresholded;
  if (config.binarize) {
    thresholded.emplace(*source);
    source = &*thresholded;
  }
  const std::size_t m = source->num_competitors();
  double eta = 0.0;
  if (config.eta == "auto") {
    eta = DefaultEta(m, source->num_steps(), loss.d_max());
  } else {
    try {
      eta = std::stod(config.eta);
    } catch (const std::logic_error&) {
      Fail(ErrorKind::kParse, "--eta must be 'auto' or a number");
    }
  }
  FusionOptions options;
  options.record_weights = config.record_weights;
  options.doubling = config.doubling;
  const FusionRun run =
      OnlineFusion(*source, truth, loss, eta, config.seed, options);

  // Labels come from the family source; thresholding keeps the order.
  WriteJson(dir / "fusion.json", run.ToJson(&lazy));
  {
    std::ofstream csv = OpenOutput(dir / "weights.csv");
    run.WriteWeightsCsv(csv);
  }
  out << "competitors " << m << " (" << k << " base + " << family.size()
      << " synthesized), steps " << run.num_steps << ", eta "
      << FormatDouble(run.eta) << '\n';
  out << "algorithm loss/step " << FormatDouble(run.algorithm_loss / run.num_steps)
      << ", best " << lazy.Label(run.best_competitor) << " loss/step "
      << FormatDouble(run.per_competitor_loss[run.best_competitor] /
                      run.num_steps)
      << ", regret " << FormatDouble(run.regret) << " (bound "
      << FormatDouble(run.regret_bound) << ")\n";
  if (!run.weight_history.empty()) {
    const auto ranked = run.RankByFinalWeight();
    const auto w = run.weights_at(run.num_steps);
    out << "top weights:";
    for (std::size_t i = 0; i < std::min<std::size_t>(5, ranked.size()); ++i) {
      out << ' ' << lazy.Label(ranked[i]) << '=' << FormatDouble(w[ranked[i]]);
    }
    out << '\n';
  }
}

void RunSimulate(const RunConfig& config, const fs::path& dir,
                 std::ostream& out) {
  if (config.spec.empty()) Fail(ErrorKind::kInvalidArgument, "--spec is required");
  const nlohmann::json json = ReadJsonFile(config.spec);
  if (json.value("scenario", std::string()) == "noisy-observation") {
    NoisyObservationScenario scenario = NoisyObservationScenario::FromJson(json);
    if (config.seed_override) scenario.seed = *config.seed_override;
    const NoisyObservations obs = GenerateNoisyObservations(scenario, config.n);
    {
      std::ofstream csv = OpenOutput(dir / "data.csv");
      WriteLongCsv(csv, obs.readings);
    }
    std::ofstream csv = OpenOutput(dir / "truth.csv");
    WriteTruthCsv(csv, obs.truth);
    out << "wrote " << obs.readings.size() << " noisy sensors x " << config.n
        << " steps and truth.csv\n";
    return;
  }
  SourceSpec spec = SourceSpec::FromJson(json);
  if (config.seed_override) spec.seed = *config.seed_override;
  const SensorMatrix matrix = Generate(spec, config.n);
  {
    std::ofstream csv = OpenOutput(dir / "data.csv");
    WriteWideCsv(csv, matrix);
  }
  if (spec.IsMemoryless()) {
    WriteJson(dir / "analytic.json", AnalyticEntropyVector(spec).ToJson());
  } else {
    nlohmann::ordered_json rates = nlohmann::ordered_json::object();
    for (int i = 0; i < spec.num_sensors(); ++i) {
      if (const auto* b = std::get_if<MarkovBase>(&spec.sensors[i])) {
        rates[std::to_string(i + 1)] = MarkovEntropyRate(b->transition);
      }
    }
    WriteJson(dir / "markov_rates.json", {{"entropy_rate_bits", rates}});
  }
  out << "wrote " << matrix.num_sensors() << " sensors x "
      << matrix.num_steps() << " steps\n";
}

}  // namespace

std::string_view CommandName(Command command) {
  switch (command) {
    case Command::kAnalyze:
      return "analyze";
    case Command::kSelectRandom:
      return "select-random";
    case Command::kSelectGreedy:
      return "select-greedy";
    case Command::kFuse:
      return "fuse";
    case Command::kSimulate:
      return "simulate";
  }
  return "unknown";
}

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kIo:
      return kExitIo;
    case ErrorKind::kParse:
      return kExitParse;
    case ErrorKind::kValidation:
      return kExitValidation;
    case ErrorKind::kEmptyInput:
      return kExitEmptyInput;
    case ErrorKind::kOverflow:
      return kExitOverflow;
    case ErrorKind::kInvalidArgument:
      return kExitInvalidArgument;
  }
  return kExitInternal;
}

std::string ExitCodeHelp() {
  return "Exit codes: 0 ok, 1 internal error, 2 usage, 3 I/O, 4 parse, "
         "5 validation, 6 empty input, 7 overflow, 8 invalid argument.\n"
         "On failure a JSON object {\"error\": {...}} is printed to stderr.";
}

nlohmann::ordered_json RunConfig::ToJson() const {
  nlohmann::ordered_json j;
  j["command"] = CommandName(command);
  j["input"] = input;
  j["output_dir"] = output_dir;
  j["estimator"] = estimator;
  j["seed"] = seed;
  j["bins"] = bins;
  j["alphabet"] = OptionalJson(alphabet);
  j["subsets"] = subsets;
  j["lattice_cap"] = lattice_cap;
  j["tolerance"] = tolerance;
  j["matroid"] = matroid;
  j["round_unit"] = OptionalJson(round_unit);
  j["phrases"] = OptionalJson(phrases);
  j["q"] = q;
  j["trials"] = trials;
  j["size"] = OptionalJson(size);
  j["k"] = OptionalJson(num_sensors);
  j["guarantee_a"] = OptionalJson(guarantee_a);
  j["rank"] = OptionalJson(rank);
  j["epsilon"] = epsilon;
  j["spec"] = spec;
  j["truth"] = truth;
  j["truth_sensor"] = OptionalJson(truth_sensor);
  j["family"] = family;
  j["loss"] = loss;
  j["delta"] = delta;
  j["eta"] = eta;
  j["doubling"] = doubling;
  j["binarize"] = binarize;
  j["record_weights"] = record_weights;
  j["lazy"] = lazy;
  j["n"] = n;
  j["seed_override"] = OptionalJson(seed_override);
  return j;
}

int Run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  auto report = [&](std::string_view kind, const std::string& message,
                    int code) {
    nlohmann::ordered_json e;
    e["error"] = {{"kind", kind}, {"message", message}, {"exit_code", code}};
    err << e.dump() << '\n';
    return code;
  };
  try {
    const fs::path dir(config.output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
      Fail(ErrorKind::kIo, "cannot create output directory '" +
                               config.output_dir + "': " + ec.message());
    }
    switch (config.command) {
      case Command::kAnalyze:
        RunAnalyze(config, dir, out);
        break;
      case Command::kSelectRandom:
        RunSelectRandom(config, dir, out);
        break;
      case Command::kSelectGreedy:
        RunSelectGreedy(config, dir, out);
        break;
      case Command::kFuse:
        RunFuse(config, dir, out);
        break;
      case Command::kSimulate:
        RunSimulate(config, dir, out);
        break;
    }
    WriteManifest(dir, config);
    return kExitOk;
  } catch (const SensorError& e) {
    return report(ErrorKindName(e.kind()), e.what(), ExitCodeFor(e.kind()));
  } catch (const std::exception& e) {
    return report("internal", e.what(), kExitInternal);
  }
}

}  // namespace sensordep
