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

#ifndef MTROBUST_SUBWORD_H_
#define MTROBUST_SUBWORD_H_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "mtrobust/corpus_io.h"

namespace mtrobust {

// Word type -> count, from whitespace pre-tokenization.
using WordFrequencies = std::map<std::string, uint64_t>;

WordFrequencies CountWords(const SentenceList& sentences);

inline constexpr std::string_view kDefaultMarker = "@@";

struct Piece {
  std::string text;
  bool joins_right = false;  // continues into the next piece of the word

  friend bool operator==(const Piece&, const Piece&) = default;
};

// Subword pieces of one word. Every piece but the last joins right.
struct Segmentation {
  std::vector<Piece> pieces;

  static Segmentation FromTexts(std::vector<std::string> texts);

  std::vector<std::string> Texts() const;
  // Concatenation of the pieces: the original word.
  std::string Surface() const;
  // Pieces separated by spaces, with `marker` appended to joining pieces.
  std::string Serialize(std::string_view marker = kDefaultMarker) const;

  friend bool operator==(const Segmentation&, const Segmentation&) = default;
};

}  // namespace mtrobust

#endif  // MTROBUST_SUBWORD_H_
