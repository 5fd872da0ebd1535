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

#include "sensordep/lz78.h"

#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <ostream>

#include "sensordep/empirical_entropy.h"
#include "sensordep/error.h"

namespace sensordep {
namespace {

int BitsPerSymbol(const AlphabetSpec& alphabet) {
  if (alphabet.size <= 2) return 1;
  return std::bit_width(alphabet.size - 1);
}

// Binary trie. Every node at a depth divisible by the symbol width is a
// phrase, because LZ78 dictionaries are prefix closed.
class BitTrie {
 public:
  BitTrie() { children_.push_back({0, 0}); }

  std::uint32_t Child(std::uint32_t node, int bit) const {
    return children_[node][bit];
  }
  std::uint32_t AddChild(std::uint32_t node, int bit) {
    if (children_.size() >= std::numeric_limits<std::uint32_t>::max()) {
      Fail(ErrorKind::kOverflow, "LZ78 trie exceeded 2^32 nodes");
    }
    const auto id = static_cast<std::uint32_t>(children_.size());
    children_.push_back({0, 0});
    children_[node][bit] = id;
    return id;
  }

 private:
  // Node 0 is the root and never a child, so 0 marks a missing edge.
  std::vector<std::array<std::uint32_t, 2>> children_;
};

template <typename T>
ParseResult ParseImpl(std::span<const T> seq, const AlphabetSpec& alphabet,
                      std::vector<PhraseSpan>* phrases) {
  if (seq.empty()) Fail(ErrorKind::kEmptyInput, "cannot parse an empty sequence");
  if (alphabet.size < 1) {
    Fail(ErrorKind::kInvalidArgument, "alphabet size must be positive");
  }
  const int width = BitsPerSymbol(alphabet);
  BitTrie trie;
  ParseResult result;
  result.sequence_length = seq.size();
  result.alphabet_size = alphabet.size;

  std::uint32_t current = 0;
  std::size_t phrase_begin = 0;
  for (std::size_t t = 0; t < seq.size(); ++t) {
    const std::uint64_t s = seq[t];
    if (!alphabet.Contains(s)) {
      Fail(ErrorKind::kValidation,
           "symbol " + std::to_string(s) + " at index " + std::to_string(t) +
               " outside alphabet of size " + std::to_string(alphabet.size));
    }
    std::uint32_t node = current;
    bool created = false;
    for (int b = width - 1; b >= 0; --b) {
      const int bit = static_cast<int>((s >> b) & 1u);
      std::uint32_t next = created ? 0 : trie.Child(node, bit);
      if (next == 0) {
        next = trie.AddChild(node, bit);
        created = true;
      }
      node = next;
    }
    if (created) {
      ++result.complete_phrases;
      if (phrases) phrases->push_back({phrase_begin, t + 1 - phrase_begin});
      current = 0;
      phrase_begin = t + 1;
    } else {
      current = node;
    }
  }
  result.phrase_count = result.complete_phrases;
  if (current != 0) {
    result.last_phrase_partial = true;
    ++result.phrase_count;
    if (phrases) {
      phrases->push_back({phrase_begin, seq.size() - phrase_begin});
    }
  }
  return result;
}

}  // namespace

ParseResult Lz78Parse(std::span<const ProductSymbol> seq,
                      const AlphabetSpec& alphabet,
                      std::vector<PhraseSpan>* phrases) {
  return ParseImpl(seq, alphabet, phrases);
}

ParseResult Lz78Parse(std::span<const Symbol> seq, const AlphabetSpec& alphabet,
                      std::vector<PhraseSpan>* phrases) {
  return ParseImpl(seq, alphabet, phrases);
}

void WritePhrases(std::ostream& out, std::span<const ProductSymbol> seq,
                  std::span<const PhraseSpan> phrases,
                  const AlphabetSpec& alphabet) {
  const bool compact = alphabet.size <= 10;
  for (const PhraseSpan& p : phrases) {
    for (std::size_t i = 0; i < p.length; ++i) {
      if (!compact && i > 0) out << ' ';
      out << seq[p.begin + i];
    }
    out << '\n';
  }
}

std::vector<ProductSymbol> SymbolsFromDigits(const std::string& digits) {
  std::vector<ProductSymbol> out;
  out.reserve(digits.size());
  for (std::size_t i = 0; i < digits.size(); ++i) {
    const char ch = digits[i];
    if (ch < '0' || ch > '9') {
      Fail(ErrorKind::kParse, "non-digit '" + std::string(1, ch) +
                                  "' at index " + std::to_string(i));
    }
    out.push_back(static_cast<ProductSymbol>(ch - '0'));
  }
  return out;
}

double LzEntropyEstimate(const ParseResult& parse) {
  if (parse.sequence_length == 0) return 0.0;
  const double c = static_cast<double>(parse.phrase_count);
  return c * std::log2(c) / static_cast<double>(parse.sequence_length);
}

double LzEntropyEstimate(std::span<const ProductSymbol> seq,
                         const AlphabetSpec& alphabet) {
  return LzEntropyEstimate(Lz78Parse(seq, alphabet));
}

EntropyVector LzEntropyVector(
    const SensorMatrix& matrix,
    const std::optional<std::vector<SubsetMask>>& subsets, int lattice_cap,
    std::vector<ParseResult>* parses) {
  EntropyVector out(matrix.num_sensors(), EntropyKind::kLz78);
  for (SubsetMask s : ResolveSubsets(matrix.num_sensors(), subsets,
                                     lattice_cap)) {
    ProjectedSequence seq = ProjectSubset(matrix, s);
    ParseResult parse = Lz78Parse(seq.symbols, seq.alphabet);
    out.Set(s, LzEntropyEstimate(parse));
    if (parses) parses->push_back(parse);
  }
  return out;
}

MarkovDeviationBound ComputeMarkovDeviationBound(int num_sensors,
                                                 std::uint64_t n,
                                                 double h_full) {
  if (n < 2) Fail(ErrorKind::kInvalidArgument, "n must be at least 2");
  if (num_sensors < 1 || num_sensors >= 63) {
    Fail(ErrorKind::kInvalidArgument, "bad sensor count");
  }
  if (!(h_full >= 0.0)) {
    Fail(ErrorKind::kInvalidArgument, "h_full must be non-negative");
  }
  MarkovDeviationBound out;
  const double nd = static_cast<double>(n);
  out.deviation_cap = h_full / std::log2(nd);
  out.order_term =
      static_cast<double>((std::uint64_t{1} << num_sensors) - 1) /
      std::sqrt(nd);
  out.probability_floor = std::max(0.0, 1.0 - out.order_term);
  out.caveat =
      "heuristic: the order term's hidden constant is unknown and taken as 1";
  return out;
}

}  // namespace sensordep
