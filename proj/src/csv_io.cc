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

#include "sensordep/csv_io.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "sensordep/error.h"
#include "sensordep/format.h"

namespace sensordep {
namespace {

std::string Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> SplitFields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(Trim(std::string_view(line).substr(
        start, comma == std::string::npos ? std::string::npos : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string Lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

template <typename T>
T ParseNumber(const std::string& field, std::size_t line_no) {
  T value{};
  const char* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc() || ptr != end) {
    Fail(ErrorKind::kParse, "line " + std::to_string(line_no) +
                                ": cannot parse '" + field + "'");
  }
  return value;
}

struct CsvLines {
  std::vector<std::string> header;
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
};

CsvLines ReadLines(std::istream& in) {
  CsvLines out;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    if (!have_header) {
      out.header = SplitFields(line);
      for (auto& h : out.header) h = Lower(h);
      have_header = true;
      continue;
    }
    out.rows.emplace_back(line_no, SplitFields(line));
  }
  if (!have_header) Fail(ErrorKind::kEmptyInput, "input is empty");
  if (out.rows.empty()) Fail(ErrorKind::kEmptyInput, "input has no data rows");
  return out;
}

SensorData ReadWide(const CsvLines& lines, const CsvReadOptions& options) {
  const std::size_t k = lines.header.size() - 1;
  if (k < 1) Fail(ErrorKind::kParse, "wide layout needs at least one sensor");
  std::vector<std::vector<Symbol>> rows(k);
  std::uint64_t max_symbol = 0;
  for (const auto& [line_no, fields] : lines.rows) {
    if (fields.size() != k + 1) {
      Fail(ErrorKind::kParse, "line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(k + 1) + " fields");
    }
    for (std::size_t i = 0; i < k; ++i) {
      const auto s = ParseNumber<std::uint32_t>(fields[i + 1], line_no);
      max_symbol = std::max<std::uint64_t>(max_symbol, s);
      rows[i].push_back(s);
    }
  }
  AlphabetSpec alphabet{options.alphabet.value_or(
      std::max<std::uint64_t>(2, max_symbol + 1))};
  std::vector<std::string> names(lines.header.begin() + 1, lines.header.end());
  return SensorData{CsvLayout::kWide, SensorMatrix(std::move(rows), alphabet),
                    std::nullopt, std::move(names)};
}

SensorData ReadLong(const CsvLines& lines, const CsvReadOptions& options) {
  std::map<long long, std::map<long long, double>> by_sensor;
  std::map<long long, bool> epochs;
  for (const auto& [line_no, fields] : lines.rows) {
    if (fields.size() != 3) {
      Fail(ErrorKind::kParse,
           "line " + std::to_string(line_no) + ": expected 3 fields");
    }
    const auto epoch = ParseNumber<long long>(fields[0], line_no);
    const auto sensor = ParseNumber<long long>(fields[1], line_no);
    const auto value = ParseNumber<double>(fields[2], line_no);
    if (!by_sensor[sensor].emplace(epoch, value).second) {
      Fail(ErrorKind::kValidation, "line " + std::to_string(line_no) +
                                       ": duplicate reading for sensor " +
                                       fields[1] + " at epoch " + fields[0]);
    }
    epochs[epoch] = true;
  }
  std::vector<std::vector<double>> readings;
  std::vector<std::vector<Symbol>> rows;
  std::vector<std::string> names;
  for (const auto& [sensor, series] : by_sensor) {
    if (series.size() != epochs.size()) {
      Fail(ErrorKind::kValidation,
           "sensor " + std::to_string(sensor) + " has " +
               std::to_string(series.size()) + " readings but there are " +
               std::to_string(epochs.size()) +
               " epochs; inputs must be aligned");
    }
    std::vector<double> values;
    values.reserve(series.size());
    for (const auto& [_, v] : series) values.push_back(v);
    try {
      rows.push_back(QuantizeReadings(values, options.bins));
    } catch (const SensorError& e) {
      Fail(e.kind(), "sensor " + std::to_string(sensor) + ": " + e.what());
    }
    readings.push_back(std::move(values));
    names.push_back(std::to_string(sensor));
  }
  AlphabetSpec alphabet{static_cast<std::uint64_t>(options.bins)};
  return SensorData{CsvLayout::kLong, SensorMatrix(std::move(rows), alphabet),
                    std::move(readings), std::move(names)};
}

}  // namespace

SensorData ReadSensorCsv(std::istream& in, const CsvReadOptions& options) {
  const CsvLines lines = ReadLines(in);
  const auto& h = lines.header;
  if (h.size() == 3 && h[0] == "epoch" && h[1] == "sensor_id" &&
      h[2] == "value") {
    return ReadLong(lines, options);
  }
  if (!h.empty() && h[0] == "t") return ReadWide(lines, options);
  Fail(ErrorKind::kParse,
       "unrecognized header; expected 't,s1,...' or 'epoch,sensor_id,value'");
}

SensorData ReadSensorCsvFile(const std::string& path,
                             const CsvReadOptions& options) {
  std::ifstream in(path);
  if (!in) Fail(ErrorKind::kIo, "cannot open '" + path + "'");
  return ReadSensorCsv(in, options);
}

void WriteWideCsv(std::ostream& out, const SensorMatrix& matrix) {
  out << 't';
  for (int i = 0; i < matrix.num_sensors(); ++i) out << ",s" << i + 1;
  out << '\n';
  for (std::size_t t = 0; t < matrix.num_steps(); ++t) {
    out << t;
    for (int i = 0; i < matrix.num_sensors(); ++i) out << ',' << matrix.at(i, t);
    out << '\n';
  }
}

void WriteLongCsv(std::ostream& out,
                  const std::vector<std::vector<double>>& readings) {
  out << "epoch,sensor_id,value\n";
  if (readings.empty()) return;
  for (std::size_t t = 0; t < readings.front().size(); ++t) {
    for (std::size_t j = 0; j < readings.size(); ++j) {
      out << t << ',' << j + 1 << ',' << FormatDouble(readings[j][t]) << '\n';
    }
  }
}

std::vector<std::uint8_t> ReadTruthCsv(std::istream& in) {
  const CsvLines lines = ReadLines(in);
  if (lines.header.size() != 2 || lines.header[0] != "t" ||
      lines.header[1] != "x") {
    Fail(ErrorKind::kParse, "truth file header must be 't,x'");
  }
  std::vector<std::uint8_t> truth;
  truth.reserve(lines.rows.size());
  for (const auto& [line_no, fields] : lines.rows) {
    if (fields.size() != 2) {
      Fail(ErrorKind::kParse,
           "line " + std::to_string(line_no) + ": expected 2 fields");
    }
    const auto x = ParseNumber<int>(fields[1], line_no);
    if (x != 0 && x != 1) {
      Fail(ErrorKind::kValidation,
           "line " + std::to_string(line_no) + ": truth must be 0 or 1");
    }
    truth.push_back(static_cast<std::uint8_t>(x));
  }
  return truth;
}

std::vector<std::uint8_t> ReadTruthCsvFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorKind::kIo, "cannot open '" + path + "'");
  return ReadTruthCsv(in);
}

void WriteTruthCsv(std::ostream& out, const std::vector<std::uint8_t>& truth) {
  out << "t,x\n";
  for (std::size_t t = 0; t < truth.size(); ++t) {
    out << t << ',' << static_cast<int>(truth[t]) << '\n';
  }
}

}  // namespace sensordep
