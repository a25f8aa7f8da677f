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

#ifndef MTROBUST_BLEU_H_
#define MTROBUST_BLEU_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mtrobust/corpus_io.h"

namespace mtrobust {

enum class BleuTokenizer { k13a, kCharacter };
enum class Smoothing { kNone, kEpsilon };

BleuTokenizer ParseTokenizer(std::string_view name);  // "13a" | "char"

struct BleuConfig {
  int max_order = 4;
  bool lowercase = true;
  BleuTokenizer tokenizer = BleuTokenizer::k13a;
  Smoothing smoothing = Smoothing::kNone;
  // With kEpsilon, an order with zero matches contributes epsilon / total.
  double epsilon = 0.1;

  void Validate() const;
};

// Sufficient statistics: clipped matches and totals per n-gram order plus
// token lengths. Corpus scores are computed from summed statistics.
struct BleuStats {
  std::vector<uint64_t> matches;
  std::vector<uint64_t> totals;
  uint64_t hyp_length = 0;
  uint64_t ref_length = 0;

  explicit BleuStats(int max_order = 4)
      : matches(static_cast<size_t>(max_order), 0),
        totals(static_cast<size_t>(max_order), 0) {}

  BleuStats& operator+=(const BleuStats& other);
};

struct NgramPrecision {
  uint64_t matches = 0;
  uint64_t total = 0;
};

struct BleuScore {
  double score = 0.0;  // [0, 100]
  std::vector<NgramPrecision> precisions;
  // exp(1 - r/h) when h < r; 1 otherwise; 0 for an empty hypothesis side.
  double brevity_penalty = 1.0;
  uint64_t hyp_length = 0;
  uint64_t ref_length = 0;
};

// mteval-v13a tokenization as implemented by sacreBLEU: normalization,
// punctuation splitting with digit-adjacent exceptions, then whitespace
// splitting.
std::vector<std::string> Tokenize13a(std::string_view line);

// One token per non-whitespace code point.
std::vector<std::string> TokenizeCharacter(std::string_view line);

// Lowercases (when configured) and tokenizes.
std::vector<std::string> TokenizeForBleu(std::string_view line,
                                         const BleuConfig& config);

BleuStats ComputeStats(const std::vector<std::string>& hyp_tokens,
                       const std::vector<std::string>& ref_tokens,
                       int max_order);
BleuStats SentenceStats(std::string_view hyp, std::string_view ref,
                        const BleuConfig& config);
BleuScore ScoreFromStats(const BleuStats& stats, const BleuConfig& config);

// Single-reference corpus BLEU. Throws DataError on length mismatch or an
// empty corpus.
BleuScore CorpusBleu(const SentenceList& hypotheses,
                     const SentenceList& references, const BleuConfig& config);

// Per-sentence statistics for a whole corpus, computed on `jobs` threads.
std::vector<BleuStats> CorpusStats(const SentenceList& hypotheses,
                                   const SentenceList& references,
                                   const BleuConfig& config, int jobs = 1);

}  // namespace mtrobust

#endif  // MTROBUST_BLEU_H_
