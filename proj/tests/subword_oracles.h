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

#ifndef MTROBUST_TESTS_SUBWORD_ORACLES_H_
#define MTROBUST_TESTS_SUBWORD_ORACLES_H_

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "mtrobust/random.h"
#include "mtrobust/unigram.h"
#include "mtrobust/utf8.h"

namespace mtrobust {
namespace testing_util {

struct Candidate {
  std::vector<std::string> pieces;
  double score = 0.0;
};

// Every segmentation of `word` whose pieces are all in the vocabulary,
// scored left to right.
inline std::vector<Candidate> Enumerate(const std::string& word,
                                 const UnigramVocab& vocab) {
  const std::u32string chars = utf8::Decode(word);
  const size_t cuts = chars.size() - 1;
  std::vector<Candidate> out;
  for (uint64_t mask = 0; mask < (uint64_t{1} << cuts); ++mask) {
    Candidate c;
    size_t begin = 0;
    bool ok = true;
    for (size_t i = 1; i <= chars.size() && ok; ++i) {
      if (i == chars.size() || (mask >> (i - 1) & 1)) {
        const std::string piece = utf8::Encode(chars.substr(begin, i - begin));
        const auto lp = vocab.LogProb(piece);
        if (!lp) ok = false;
        else {
          c.pieces.push_back(piece);
          c.score += *lp;
        }
        begin = i;
      }
    }
    if (ok) out.push_back(c);
  }
  return out;
}

inline std::vector<std::string> BruteForceBest(const std::string& word,
                                        const UnigramVocab& vocab) {
  const auto all = Enumerate(word, vocab);
  const Candidate* best = &all[0];
  for (const auto& c : all) {
    if (c.score > best->score ||
        (c.score == best->score &&
         (c.pieces.size() < best->pieces.size() ||
          (c.pieces.size() == best->pieces.size() &&
           c.pieces < best->pieces)))) {
      best = &c;
    }
  }
  return best->pieces;
}

// Scores are multiples of 1/1024 so that path sums are exact and ties are
// real ties.
inline UnigramVocab RandomVocab(Rng& rng, bool integer_scores) {
  const std::u32string alphabet = U"abcdé猫";
  std::unordered_map<std::string, double> lp;
  const auto draw = [&] {
    return integer_scores ? -1.0 - static_cast<double>(rng.UniformIndex(5))
                          : -0.5 - static_cast<double>(rng.UniformIndex(7680)) / 1024;
  };
  for (char32_t c : alphabet) lp[utf8::Encode(c)] = draw();
  const size_t extra = 5 + rng.UniformIndex(40);
  for (size_t i = 0; i < extra; ++i) {
    std::u32string piece;
    for (size_t k = 2 + rng.UniformIndex(3); k > 0; --k) {
      piece.push_back(alphabet[rng.UniformIndex(alphabet.size())]);
    }
    lp[utf8::Encode(piece)] = draw();
  }
  return UnigramVocab(lp);
}

inline std::string RandomWord(Rng& rng, size_t max_len) {
  const std::u32string alphabet = U"abcdé猫";
  std::u32string w;
  for (size_t k = 1 + rng.UniformIndex(max_len); k > 0; --k) {
    w.push_back(alphabet[rng.UniformIndex(alphabet.size())]);
  }
  return utf8::Encode(w);
}

inline std::string RandomUnicodeWord(Rng& rng) {
  // Blocks: ASCII letters and symbols, Latin-1, Cyrillic, CJK, emoji,
  // combining marks.
  static const std::vector<std::pair<char32_t, char32_t>> kRanges = {
      {0x21, 0x7E},     {0xC0, 0x17F},    {0x400, 0x44F},
      {0x4E00, 0x4E80}, {0x1F600, 0x1F64F}, {0x300, 0x36F}};
  std::u32string w;
  for (size_t k = 1 + rng.UniformIndex(12); k > 0; --k) {
    const auto& [lo, hi] = kRanges[rng.UniformIndex(kRanges.size())];
    w.push_back(lo + static_cast<char32_t>(rng.UniformIndex(hi - lo + 1)));
  }
  return utf8::Encode(w);
}

// Pearson chi-square goodness of fit of `observed` counts against the
// probabilities in `target`; returns the upper-tail p-value.
inline double ChiSquarePValue(
    const std::map<std::vector<std::string>, double>& target,
    const std::map<std::vector<std::string>, int>& observed, int n) {
  double chi2 = 0;
  for (const auto& [seg, p] : target) {
    const double e = p * n;
    const auto it = observed.find(seg);
    const double o = it == observed.end() ? 0.0 : it->second;
    chi2 += (o - e) * (o - e) / e;
  }
  const boost::math::chi_squared dist(static_cast<double>(target.size() - 1));
  return 1.0 - boost::math::cdf(dist, chi2);
}

}  // namespace testing_util
}  // namespace mtrobust

#endif  // MTROBUST_TESTS_SUBWORD_ORACLES_H_
