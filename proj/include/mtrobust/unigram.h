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

#ifndef MTROBUST_UNIGRAM_H_
#define MTROBUST_UNIGRAM_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mtrobust/random.h"
#include "mtrobust/subword.h"

namespace mtrobust {

// Unigram language model over subword pieces.
class UnigramVocab {
 public:
  UnigramVocab() = default;
  explicit UnigramVocab(std::unordered_map<std::string, double> log_probs);

  std::optional<double> LogProb(std::string_view piece) const;
  size_t size() const { return log_probs_.size(); }
  size_t max_piece_length() const { return max_piece_length_; }
  const std::unordered_map<std::string, double>& log_probs() const {
    return log_probs_;
  }
  // Log-prob assigned to characters missing from the vocabulary.
  double unknown_log_prob() const { return unknown_log_prob_; }

  // "piece<TAB>log_prob" lines, sorted by descending log-prob then piece.
  std::string Serialize() const;
  static UnigramVocab Parse(std::string_view text);
  void Save(const std::filesystem::path& path) const;
  static UnigramVocab Load(const std::filesystem::path& path);

 private:
  std::unordered_map<std::string, double> log_probs_;
  size_t max_piece_length_ = 0;  // in code points
  double unknown_log_prob_ = -20.0;
};

struct UnigramTrainerConfig {
  size_t seed_max_piece_len = 8;     // code points
  uint64_t min_seed_frequency = 2;   // multi-character seed pieces only
  size_t max_seed_pieces = 200000;
  double prune_fraction = 0.25;      // share of prunable pieces dropped per round
  int em_iterations = 2;             // EM steps between pruning rounds
};

struct UnigramTrainingTrace {
  // Corpus log-likelihood before each EM step, in order.
  std::vector<double> log_likelihoods;
  std::vector<size_t> vocab_sizes;  // after each pruning round
};

// EM over segmentation lattices alternating with likelihood-loss pruning.
// Single characters are never pruned. Throws UsageError if `target` is
// smaller than the number of distinct characters.
UnigramVocab UnigramTrain(const WordFrequencies& words, size_t target,
                          const UnigramTrainerConfig& config = {},
                          UnigramTrainingTrace* trace = nullptr);

// Initial vocabulary: every character plus multi-character substrings
// meeting the frequency floor, weighted by substring frequency.
UnigramVocab UnigramSeedVocab(const WordFrequencies& words,
                              const UnigramTrainerConfig& config);

// Sum over words of count * log(marginal likelihood of the word).
double CorpusLogLikelihood(const WordFrequencies& words,
                           const UnigramVocab& vocab);

// One EM step at fixed vocabulary: expected piece counts by forward-backward,
// then renormalization.
UnigramVocab EmStep(const WordFrequencies& words, const UnigramVocab& vocab);

// Most probable segmentation. Ties go to fewer pieces, then to the
// lexicographically smaller piece sequence. `used_fallback` is set when a
// character missing from the vocabulary had to be used.
Segmentation UnigramViterbi(std::string_view word, const UnigramVocab& vocab,
                            bool* used_fallback = nullptr);

// Samples a segmentation with probability proportional to
// prod(piece prob)^alpha by forward filtering, backward sampling.
Segmentation UnigramSample(std::string_view word, const UnigramVocab& vocab,
                           double alpha, RandomStream& rng);

}  // namespace mtrobust

#endif  // MTROBUST_UNIGRAM_H_
