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

// Drives the sensordep binary end to end.

#include <sys/wait.h>

#include <cstdlib>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "sensordep/cli.h"

namespace {

namespace fs = std::filesystem;

fs::path Scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "sensordep_cli_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int RunCli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(SENSORDEP_CLI_PATH) + " " + args +
                          " >" + (log / "stdout.txt").string() + " 2>" +
                          (log / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json LoadJson(const fs::path& p) {
  return nlohmann::json::parse(Slurp(p));
}

const std::string kConfigs = SENSORDEP_CONFIG_DIR;

TEST_CASE("simulate then analyze the xor triple") {
  const fs::path dir = Scratch("xor");
  REQUIRE(RunCli("simulate --spec " + kConfigs + "/xor_triple.json --n 100000 "
                 "--output-dir " + (dir / "sim").string(), dir) == 0);
  CHECK(fs::exists(dir / "sim" / "data.csv"));
  CHECK(fs::exists(dir / "sim" / "analytic.json"));
  CHECK(fs::exists(dir / "sim" / "manifest.json"));

  REQUIRE(RunCli("analyze --estimator empirical --matroid -i " +
                     (dir / "sim" / "data.csv").string() + " -o " +
                     (dir / "an").string(), dir) == 0);
  const auto entropy = LoadJson(dir / "an" / "entropy.json");
  CHECK(entropy["kind"] == "empirical-first-order");
  CHECK(std::abs(entropy["values"]["7"].get<double>() - 2.0) < 0.02);
  const auto axioms = LoadJson(dir / "an" / "axioms.json");
  CHECK(axioms["is_polymatroid"] == true);
  CHECK(fs::exists(dir / "an" / "entropy.csv"));
  CHECK(fs::exists(dir / "an" / "matroid.csv"));
  const auto manifest = LoadJson(dir / "an" / "manifest.json");
  CHECK(manifest["version"] == sensordep::kToolVersion);
  CHECK(manifest["config"]["estimator"] == "empirical");
}

TEST_CASE("outputs are byte identical across runs") {
  const fs::path dir = Scratch("repro");
  for (const char* run : {"a", "b"}) {
    REQUIRE(RunCli("simulate --spec " + kConfigs + "/mixed_ensemble.json "
                   "--n 2000 -o " + (dir / run / "sim").string(), dir) == 0);
    REQUIRE(RunCli("analyze --estimator lz -i " +
                       (dir / run / "sim" / "data.csv").string() + " -o " +
                       (dir / run / "an").string(), dir) == 0);
    REQUIRE(RunCli("select-greedy -i " +
                       (dir / run / "sim" / "data.csv").string() + " -o " +
                       (dir / run / "gr").string(), dir) == 0);
    REQUIRE(RunCli("fuse --loss hamming --binarize --truth-sensor 1 --family pair-average -i " +
                       (dir / run / "sim" / "data.csv").string() + " -o " +
                       (dir / run / "fu").string(), dir) == 0);
  }
  for (const char* f : {"sim/data.csv", "sim/analytic.json", "an/entropy.json",
                        "an/entropy.csv", "an/axioms.json", "an/lz_parses.csv",
                        "gr/greedy.json", "fu/fusion.json", "fu/weights.csv"}) {
    INFO(f);
    CHECK(Slurp(dir / "a" / f) == Slurp(dir / "b" / f));
  }
}

TEST_CASE("phrase dump via the CLI") {
  const fs::path dir = Scratch("phrases");
  {
    std::ofstream csv(dir / "seq.csv");
    csv << "t,s1\n";
    const std::string seq = "0100011011000001010011";
    for (std::size_t t = 0; t < seq.size(); ++t) csv << t << ',' << seq[t] << '\n';
  }
  REQUIRE(RunCli("analyze --estimator lz --phrases 1 -i " +
                     (dir / "seq.csv").string() + " -o " + dir.string(), dir) == 0);
  CHECK(Slurp(dir / "phrases.txt") ==
        Slurp(fs::path(SENSORDEP_GOLDEN_DIR) / "reference_parse_phrases.txt"));
}

TEST_CASE("fuse over ordered pairs of fifteen sensors") {
  const fs::path dir = Scratch("fuse");
  REQUIRE(RunCli("simulate --spec " + kConfigs + "/fusion_reproduction.json "
                 "--n 300 -o " + (dir / "sim").string(), dir) == 0);
  CHECK(fs::exists(dir / "sim" / "truth.csv"));
  REQUIRE(RunCli("fuse --family ordered-pairs -i " +
                     (dir / "sim" / "data.csv").string() + " --truth " +
                     (dir / "sim" / "truth.csv").string() + " -o " +
                     (dir / "out").string(), dir) == 0);
  const auto run = LoadJson(dir / "out" / "fusion.json");
  CHECK(run["num_competitors"] == 240);
  const std::string weights = Slurp(dir / "out" / "weights.csv");
  CHECK(weights.rfind("t,w1,", 0) == 0);
  CHECK(std::count(weights.begin(), weights.end(), '\n') == 302);

  REQUIRE(RunCli("fuse --family ordered-pairs --lazy -i " +
                     (dir / "sim" / "data.csv").string() + " --truth " +
                     (dir / "sim" / "truth.csv").string() + " -o " +
                     (dir / "lazy").string(), dir) == 0);
  CHECK(Slurp(dir / "lazy" / "fusion.json") == Slurp(dir / "out" / "fusion.json"));
}

TEST_CASE("select-random reports draws") {
  const fs::path dir = Scratch("random");
  REQUIRE(RunCli("simulate --spec " + kConfigs + "/mixed_ensemble.json "
                 "--n 1000 -o " + (dir / "sim").string(), dir) == 0);
  REQUIRE(RunCli("select-random --q 0.5 --size 5 --trials 4 --guarantee-a 1 "
                 "--rank 5 -i " + (dir / "sim" / "data.csv").string() + " -o " +
                     (dir / "out").string(), dir) == 0);
  const auto r = LoadJson(dir / "out" / "random.json");
  REQUIRE(r["draws"].size() == 4);
  const std::string members = r["draws"][0]["members"];
  CHECK(std::count(members.begin(), members.end(), ' ') == 4);
  CHECK(r["guarantee"].contains("probability_floor"));
  REQUIRE(RunCli("select-random --k 6 --q 1 -o " + (dir / "k").string(), dir) == 0);
  CHECK(LoadJson(dir / "k" / "random.json")["draws"][0]["mask"] == 63);
}

TEST_CASE("select-greedy from an analytic spec") {
  const fs::path dir = Scratch("greedy");
  REQUIRE(RunCli("select-greedy --spec " + kConfigs + "/xor_triple.json -o " +
                     dir.string(), dir) == 0);
  const auto g = LoadJson(dir / "greedy.json");
  CHECK(g["final_entropy"] == 2.0);
  CHECK(g["steps"].size() == 2);
}

TEST_CASE("simulate a Markov source writes rates") {
  const fs::path dir = Scratch("markov");
  REQUIRE(RunCli("simulate --spec " + kConfigs + "/markov_chain.json --n 100 -o " +
                     dir.string(), dir) == 0);
  const auto r = LoadJson(dir / "markov_rates.json");
  CHECK(std::abs(r["entropy_rate_bits"]["1"].get<double>() - 0.5533) < 1e-4);
}

TEST_CASE("error exit codes") {
  const fs::path dir = Scratch("errors");
  { std::ofstream empty(dir / "empty.csv"); }
  CHECK(RunCli("analyze -i " + (dir / "empty.csv").string() + " -o " +
                   (dir / "o").string(), dir) == sensordep::kExitEmptyInput);
  const auto err = nlohmann::json::parse(Slurp(dir / "stderr.txt"));
  CHECK(err["error"]["kind"] == "empty_input");

  CHECK(RunCli("analyze -i " + (dir / "missing.csv").string() + " -o " +
                   (dir / "o").string(), dir) == sensordep::kExitIo);
  {
    std::ofstream bad(dir / "bad.csv");
    bad << "t,s1\n0,zz\n";
  }
  CHECK(RunCli("analyze -i " + (dir / "bad.csv").string() + " -o " +
                   (dir / "o").string(), dir) == sensordep::kExitParse);
  {
    std::ofstream bad(dir / "spec.json");
    bad << R"({"sensors": [{"type": "copy", "of": 3}]})";
  }
  CHECK(RunCli("simulate --spec " + (dir / "spec.json").string() + " -o " +
                   (dir / "o").string(), dir) == sensordep::kExitValidation);
  CHECK(RunCli("analyze --bogus", dir) == sensordep::kExitUsage);
  CHECK(RunCli("--help", dir) == 0);
  CHECK(Slurp(dir / "stdout.txt").find("Exit codes") != std::string::npos);
}

}  // namespace
