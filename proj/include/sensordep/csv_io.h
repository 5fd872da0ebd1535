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

#ifndef SENSORDEP_CSV_IO_H_
#define SENSORDEP_CSV_IO_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sensordep/alphabet.h"

namespace sensordep {

enum class CsvLayout { kWide, kLong };

struct CsvReadOptions {
  // Quantization bins for real-valued (long layout) readings.
  int bins = 2;
  // Alphabet for integer (wide layout) symbols; inferred as max symbol + 1
  // (at least 2) when unset.
  std::optional<std::uint64_t> alphabet;
};

struct SensorData {
  CsvLayout layout = CsvLayout::kWide;
  SensorMatrix matrix;
  // Raw readings in [0, 1] when the input was real valued (long layout).
  std::optional<std::vector<std::vector<double>>> readings;
  // Sensor ids in row order (long layout) or column names (wide layout).
  std::vector<std::string> sensor_names;
};

// Reads either layout, detected from the header:
//   wide: t,s1,...,sK with integer symbols, one row per time step
//   long: epoch,sensor_id,value with values in [0, 1]
// Long-layout epochs and sensor ids are sorted numerically; every
// (epoch, sensor) cell must be present.
SensorData ReadSensorCsv(std::istream& in, const CsvReadOptions& options = {});
SensorData ReadSensorCsvFile(const std::string& path,
                             const CsvReadOptions& options = {});

void WriteWideCsv(std::ostream& out, const SensorMatrix& matrix);

// Real readings in the long layout (epoch = 0-based step, sensor ids 1..K).
void WriteLongCsv(std::ostream& out,
                  const std::vector<std::vector<double>>& readings);

// Ground-truth bits: header t,x.
std::vector<std::uint8_t> ReadTruthCsv(std::istream& in);
std::vector<std::uint8_t> ReadTruthCsvFile(const std::string& path);
void WriteTruthCsv(std::ostream& out, const std::vector<std::uint8_t>& truth);

}  // namespace sensordep

#endif  // SENSORDEP_CSV_IO_H_
