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

#ifndef SENSORDEP_LZ78_H_
#define SENSORDEP_LZ78_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sensordep/alphabet.h"
#include "sensordep/entropy_vector.h"

namespace sensordep {

// Outcome of an LZ78 incremental parse.
struct ParseResult {
  // Phrases including a trailing partial one.
  std::uint64_t phrase_count = 0;
  std::uint64_t complete_phrases = 0;
  // The input ended while still matching an existing phrase.
  bool last_phrase_partial = false;
  std::uint64_t sequence_length = 0;
  std::uint64_t alphabet_size = 0;
};

// Half-open [begin, begin + length) slice of the parsed sequence.
struct PhraseSpan {
  std::size_t begin = 0;
  std::size_t length = 0;
};

// Parses `seq` with the LZ78 rule: each phrase is the shortest prefix of the
// unparsed remainder that is not already a phrase. The dictionary is a binary
// trie over the bits of each symbol, so a step costs O(log alpha). If
// `phrases` is non-null the phrase boundaries are appended to it.
ParseResult Lz78Parse(std::span<const ProductSymbol> seq,
                      const AlphabetSpec& alphabet,
                      std::vector<PhraseSpan>* phrases = nullptr);
ParseResult Lz78Parse(std::span<const Symbol> seq, const AlphabetSpec& alphabet,
                      std::vector<PhraseSpan>* phrases = nullptr);

// One phrase per line. Symbols are written as bare digits when the alphabet
// has at most 10 symbols, otherwise space separated.
void WritePhrases(std::ostream& out, std::span<const ProductSymbol> seq,
                  std::span<const PhraseSpan> phrases,
                  const AlphabetSpec& alphabet);

// Parses a digit string such as "0100011" into symbols.
std::vector<ProductSymbol> SymbolsFromDigits(const std::string& digits);

// c log2(c) / n in bits per time step.
double LzEntropyEstimate(const ParseResult& parse);
double LzEntropyEstimate(std::span<const ProductSymbol> seq,
                         const AlphabetSpec& alphabet);

// LZ78 estimates for each subset's product stream; every subset is parsed
// with its own dictionary. Empty `subsets` means the full lattice, subject to
// `lattice_cap`. If `parses` is non-null, per-subset parse results are
// appended in subset order.
EntropyVector LzEntropyVector(
    const SensorMatrix& matrix,
    const std::optional<std::vector<SubsetMask>>& subsets = std::nullopt,
    int lattice_cap = kDefaultLatticeCap, std::vector<ParseResult>* parses = nullptr);

// Deviation cap for a K-sensor Markov source: h_full / log2(n), together
// with the (2^K - 1)/sqrt(n) order term, whose constant is unknown and
// taken as 1.
struct MarkovDeviationBound {
  double deviation_cap = 0.0;
  double order_term = 0.0;
  double probability_floor = 0.0;  // max(0, 1 - order_term)
  std::string caveat;
};

MarkovDeviationBound ComputeMarkovDeviationBound(int num_sensors,
                                                 std::uint64_t n,
                                                 double h_full);

}  // namespace sensordep

#endif  // SENSORDEP_LZ78_H_
