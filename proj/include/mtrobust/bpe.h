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

#ifndef MTROBUST_BPE_H_
#define MTROBUST_BPE_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mtrobust/random.h"
#include "mtrobust/subword.h"

namespace mtrobust {

// Ordered byte-pair-encoding merges. Symbols are strings of code points; the
// last symbol of a word carries an end-of-word flag, written as a "</w>"
// suffix in model files, so word-final merges are learned separately.
class MergeTable {
 public:
  static constexpr std::string_view kEndOfWord = "</w>";

  explicit MergeTable(std::string marker = std::string(kDefaultMarker))
      : marker_(std::move(marker)) {}

  // Appends a merge. Throws DataError for a duplicate or for a symbol that is
  // neither a base character nor produced by an earlier merge. Symbols use
  // the file form ("x</w>" for word-final).
  void Add(std::string_view left, std::string_view right);

  std::optional<size_t> Rank(std::string_view left,
                             std::string_view right) const;

  size_t size() const { return merges_.size(); }
  const std::string& marker() const { return marker_; }
  // Merges in file form.
  std::vector<std::pair<std::string, std::string>> Merges() const;
  // Symbols produced by merges, in file form.
  std::set<std::string> Vocabulary() const;

  // First line "#mtrobust-bpe marker=<marker>", then "left right" lines.
  std::string Serialize() const;
  static MergeTable Parse(std::string_view text);
  void Save(const std::filesystem::path& path) const;
  static MergeTable Load(const std::filesystem::path& path);

  // Internal symbol helpers, exposed for the encoder.
  static std::string ToInternal(std::string_view symbol);
  static std::string ToFileForm(std::string_view symbol);
  std::optional<size_t> RankInternal(const std::string& left,
                                     const std::string& right) const;
  void AddInternal(const std::string& left, const std::string& right);

 private:
  std::string marker_;
  std::vector<std::pair<std::string, std::string>> merges_;  // internal form
  std::unordered_map<std::string, size_t> ranks_;
  std::set<std::string> produced_;
};

struct BpeTrainOptions {
  // Training stops early once the best pair is rarer than this.
  uint64_t min_frequency = 1;
};

// Greedy merge learning: repeatedly merges the most frequent adjacent pair
// (ties broken by lexicographic order of the pair).
MergeTable BpeTrain(const WordFrequencies& words, size_t num_merges,
                    const BpeTrainOptions& options = {},
                    std::string marker = std::string(kDefaultMarker));

// Applies the earliest-learned applicable merge until none applies.
Segmentation BpeEncode(std::string_view word, const MergeTable& merges);

// As BpeEncode, but at every step each applicable merge position is skipped
// with probability `drop_prob`.
Segmentation BpeDropoutEncode(std::string_view word, const MergeTable& merges,
                              double drop_prob, RandomStream& rng);

}  // namespace mtrobust

#endif  // MTROBUST_BPE_H_
