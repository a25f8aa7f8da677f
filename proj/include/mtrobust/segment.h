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

#ifndef MTROBUST_SEGMENT_H_
#define MTROBUST_SEGMENT_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include "mtrobust/bpe.h"
#include "mtrobust/corpus_io.h"
#include "mtrobust/unigram.h"

namespace mtrobust {

using SubwordModel = std::variant<MergeTable, UnigramVocab>;

enum class SegmentMode { kDeterministic, kSample };

struct SegmentOptions {
  SegmentMode mode = SegmentMode::kDeterministic;
  // BPE: dropout probability. Unigram: sampling temperature alpha.
  double parameter = 0.2;
  uint64_t seed = 0;
  // Continuation marker for unigram output; BPE uses the table's marker.
  std::string marker = std::string(kDefaultMarker);
  int jobs = 1;
};

// Segments every whitespace-delimited word in place, keeping the original
// separators. In sample mode sentence i draws from Rng(MixSeed(seed, i)),
// giving one sampled segmentation per sentence.
SentenceList SegmentCorpus(const SentenceList& sentences,
                           const SubwordModel& model,
                           const SegmentOptions& options);

// Removes every "<marker> " joint. Inverse of SegmentCorpus for words that do
// not themselves end in the marker.
std::string DetokenizeLine(std::string_view line, std::string_view marker);
SentenceList DetokenizeCorpus(const SentenceList& sentences,
                              std::string_view marker);

}  // namespace mtrobust

#endif  // MTROBUST_SEGMENT_H_
