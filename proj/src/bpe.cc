// Copyright 2026 The mtrobust Authors.
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

#include "mtrobust/bpe.h"

#include <fstream>
#include <iterator>
#include <map>
#include <sstream>
#include <tuple>

#include "mtrobust/error.h"
#include "mtrobust/utf8.h"

namespace mtrobust {
namespace {

// Internal end-of-word flag. 0xFF never occurs in well-formed UTF-8.
constexpr char kFinal = '\xFF';
constexpr std::string_view kHeaderPrefix = "#mtrobust-bpe marker=";

bool IsFinal(std::string_view symbol) {
  return !symbol.empty() && symbol.back() == kFinal;
}

std::string PairKey(const std::string& left, const std::string& right) {
  return left + ' ' + right;
}

bool IsBaseSymbol(std::string_view symbol) {
  if (IsFinal(symbol)) symbol.remove_suffix(1);
  return !symbol.empty() && !utf8::FindInvalid(symbol) &&
         utf8::Decode(symbol).size() == 1;
}

std::vector<std::string> InitialSymbols(std::string_view word) {
  std::vector<std::string> symbols;
  for (char32_t c : utf8::Decode(word)) symbols.push_back(utf8::Encode(c));
  if (!symbols.empty()) symbols.back() += kFinal;
  return symbols;
}

Segmentation ToSegmentation(std::vector<std::string> symbols) {
  if (!symbols.empty() && IsFinal(symbols.back())) symbols.back().pop_back();
  return Segmentation::FromTexts(std::move(symbols));
}

// Shared encoder loop. `keep(pair)` decides whether an applicable merge
// position survives this step (always true without dropout).
template <typename Keep>
Segmentation Encode(std::string_view word, const MergeTable& merges,
                    Keep keep) {
  std::vector<std::string> symbols = InitialSymbols(word);
  while (symbols.size() > 1) {
    std::optional<size_t> best_rank;
    std::vector<std::pair<size_t, size_t>> candidates;  // (rank, position)
    for (size_t i = 0; i + 1 < symbols.size(); ++i) {
      const auto rank = merges.RankInternal(symbols[i], symbols[i + 1]);
      if (!rank || !keep()) continue;
      candidates.emplace_back(*rank, i);
      if (!best_rank || *rank < *best_rank) best_rank = rank;
    }
    if (!best_rank) break;
    std::vector<std::string> merged;
    merged.reserve(symbols.size());
    size_t i = 0;
    for (const auto& [rank, pos] : candidates) {
      // Overlapping occurrences (x x x) merge left to right.
      if (rank != *best_rank || pos < i) continue;
      for (; i < pos; ++i) merged.push_back(std::move(symbols[i]));
      merged.push_back(symbols[pos] + symbols[pos + 1]);
      i = pos + 2;
    }
    for (; i < symbols.size(); ++i) merged.push_back(std::move(symbols[i]));
    symbols = std::move(merged);
  }
  return ToSegmentation(std::move(symbols));
}

}  // namespace

std::string MergeTable::ToInternal(std::string_view symbol) {
  if (symbol.size() > kEndOfWord.size() && symbol.ends_with(kEndOfWord)) {
    std::string out(symbol.substr(0, symbol.size() - kEndOfWord.size()));
    out += kFinal;
    return out;
  }
  return std::string(symbol);
}

std::string MergeTable::ToFileForm(std::string_view symbol) {
  if (IsFinal(symbol)) {
    std::string out(symbol.substr(0, symbol.size() - 1));
    out += kEndOfWord;
    return out;
  }
  return std::string(symbol);
}

void MergeTable::AddInternal(const std::string& left,
                             const std::string& right) {
  const std::string key = PairKey(left, right);
  if (ranks_.count(key)) {
    throw DataError("duplicate merge: " + ToFileForm(left) + " " +
                    ToFileForm(right));
  }
  for (const std::string* symbol : {&left, &right}) {
    if (!IsBaseSymbol(*symbol) && !produced_.count(*symbol)) {
      throw DataError("merge " + std::to_string(merges_.size()) +
                      " uses symbol not produced by an earlier merge: " +
                      ToFileForm(*symbol));
    }
  }
  if (IsFinal(left)) {
    throw DataError("word-final symbol on the left of a merge: " +
                    ToFileForm(left));
  }
  ranks_.emplace(key, merges_.size());
  merges_.emplace_back(left, right);
  produced_.insert(left + right);
}

void MergeTable::Add(std::string_view left, std::string_view right) {
  AddInternal(ToInternal(left), ToInternal(right));
}

std::optional<size_t> MergeTable::RankInternal(const std::string& left,
                                               const std::string& right) const {
  const auto it = ranks_.find(PairKey(left, right));
  if (it == ranks_.end()) return std::nullopt;
  return it->second;
}

std::optional<size_t> MergeTable::Rank(std::string_view left,
                                       std::string_view right) const {
  return RankInternal(ToInternal(left), ToInternal(right));
}

std::vector<std::pair<std::string, std::string>> MergeTable::Merges() const {
  std::vector<std::pair<std::string, std::string>> out;
  out.reserve(merges_.size());
  for (const auto& [l, r] : merges_) {
    out.emplace_back(ToFileForm(l), ToFileForm(r));
  }
  return out;
}

std::set<std::string> MergeTable::Vocabulary() const {
  std::set<std::string> out;
  for (const auto& s : produced_) out.insert(ToFileForm(s));
  return out;
}

std::string MergeTable::Serialize() const {
  std::string out(kHeaderPrefix);
  out += marker_;
  out += '\n';
  for (const auto& [l, r] : merges_) {
    out += ToFileForm(l);
    out += ' ';
    out += ToFileForm(r);
    out += '\n';
  }
  return out;
}

MergeTable MergeTable::Parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || !line.starts_with(kHeaderPrefix)) {
    throw DataError("BPE model: missing header line");
  }
  MergeTable table(line.substr(kHeaderPrefix.size()));
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const size_t space = line.find(' ');
    if (space == std::string::npos || space == 0 ||
        line.find(' ', space + 1) != std::string::npos) {
      throw DataError("BPE model line " + std::to_string(line_no) +
                      ": expected 'left right'");
    }
    table.Add(std::string_view(line).substr(0, space),
              std::string_view(line).substr(space + 1));
  }
  return table;
}

void MergeTable::Save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << Serialize();
}

MergeTable MergeTable::Load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  const std::string data((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  return Parse(data);
}

MergeTable BpeTrain(const WordFrequencies& words, size_t num_merges,
                    const BpeTrainOptions& options, std::string marker) {
  using Pair = std::pair<std::string, std::string>;
  struct Word {
    std::vector<std::string> symbols;
    int64_t freq;
  };
  std::vector<Word> vocab;
  for (const auto& [word, freq] : words) {
    if (word.empty() || freq == 0) continue;
    vocab.push_back({InitialSymbols(word), static_cast<int64_t>(freq)});
  }

  std::map<Pair, int64_t> counts;
  std::map<Pair, std::set<size_t>> where;
  // Best pair first: highest count, then the lexicographically smallest
  // pair as written in model files.
  using Key = std::tuple<int64_t, std::string, std::string, Pair>;
  std::set<Key> order;
  const auto key = [](int64_t c, const Pair& pair) {
    return Key{-c, MergeTable::ToFileForm(pair.first),
               MergeTable::ToFileForm(pair.second), pair};
  };

  const auto adjust = [&](const Pair& pair, int64_t delta) {
    int64_t& c = counts[pair];
    if (c > 0) order.erase(key(c, pair));
    c += delta;
    if (c > 0) {
      order.insert(key(c, pair));
    } else {
      counts.erase(pair);
    }
  };
  const auto add_word = [&](size_t w, int64_t sign) {
    const auto& syms = vocab[w].symbols;
    for (size_t i = 0; i + 1 < syms.size(); ++i) {
      const Pair pair{syms[i], syms[i + 1]};
      adjust(pair, sign * vocab[w].freq);
      if (sign > 0) {
        where[pair].insert(w);
      } else if (auto it = where.find(pair); it != where.end()) {
        it->second.erase(w);
      }
    }
  };
  for (size_t w = 0; w < vocab.size(); ++w) add_word(w, +1);

  MergeTable table(std::move(marker));
  while (table.size() < num_merges && !order.empty()) {
    const int64_t best_count = -std::get<0>(*order.begin());
    const Pair pair = std::get<3>(*order.begin());
    if (static_cast<uint64_t>(best_count) < options.min_frequency) break;
    const std::string left = pair.first;
    const std::string right = pair.second;
    table.AddInternal(left, right);
    const std::set<size_t> affected = where[pair];
    for (size_t w : affected) {
      add_word(w, -1);
      auto& syms = vocab[w].symbols;
      std::vector<std::string> merged;
      merged.reserve(syms.size());
      for (size_t i = 0; i < syms.size();) {
        if (i + 1 < syms.size() && syms[i] == left && syms[i + 1] == right) {
          merged.push_back(left + right);
          i += 2;
        } else {
          merged.push_back(std::move(syms[i]));
          ++i;
        }
      }
      syms = std::move(merged);
      add_word(w, +1);
    }
  }
  return table;
}

Segmentation BpeEncode(std::string_view word, const MergeTable& merges) {
  return Encode(word, merges, [] { return true; });
}

Segmentation BpeDropoutEncode(std::string_view word, const MergeTable& merges,
                              double drop_prob, RandomStream& rng) {
  if (drop_prob <= 0.0) return BpeEncode(word, merges);
  return Encode(word, merges, [&] { return !rng.Bernoulli(drop_prob); });
}

}  // namespace mtrobust
