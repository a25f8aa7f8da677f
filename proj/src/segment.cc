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

#include "mtrobust/segment.h"

#include "mtrobust/error.h"
#include "mtrobust/parallel.h"
#include "mtrobust/random.h"
#include "mtrobust/subword.h"
#include "mtrobust/utf8.h"

namespace mtrobust {

WordFrequencies CountWords(const SentenceList& sentences) {
  WordFrequencies words;
  for (const auto& line : sentences.lines) {
    for (auto& word : utf8::SplitWhitespace(line)) ++words[std::move(word)];
  }
  return words;
}

Segmentation Segmentation::FromTexts(std::vector<std::string> texts) {
  Segmentation seg;
  seg.pieces.reserve(texts.size());
  for (size_t i = 0; i < texts.size(); ++i) {
    seg.pieces.push_back({std::move(texts[i]), i + 1 < texts.size()});
  }
  return seg;
}

std::vector<std::string> Segmentation::Texts() const {
  std::vector<std::string> out;
  out.reserve(pieces.size());
  for (const auto& p : pieces) out.push_back(p.text);
  return out;
}

std::string Segmentation::Surface() const {
  std::string out;
  for (const auto& p : pieces) out += p.text;
  return out;
}

std::string Segmentation::Serialize(std::string_view marker) const {
  std::string out;
  for (const auto& p : pieces) {
    out += p.text;
    if (p.joins_right) {
      out += marker;
      out += ' ';
    }
  }
  return out;
}

SentenceList SegmentCorpus(const SentenceList& sentences,
                           const SubwordModel& model,
                           const SegmentOptions& options) {
  const bool bpe = std::holds_alternative<MergeTable>(model);
  const bool sample = options.mode == SegmentMode::kSample;
  if (sample && bpe &&
      !(options.parameter >= 0.0 && options.parameter <= 1.0)) {
    throw UsageError("BPE dropout probability must be in [0, 1]");
  }
  if (sample && !bpe && !(options.parameter > 0.0)) {
    throw UsageError("unigram sampling alpha must be > 0");
  }
  const std::string marker =
      bpe ? std::get<MergeTable>(model).marker() : options.marker;

  std::vector<std::string> out(sentences.size());
  ParallelFor(sentences.size(), options.jobs, [&](size_t i) {
    const std::string& line = sentences[i];
    Rng rng(MixSeed(options.seed, i));
    std::string result;
    size_t cursor = 0;
    for (const auto& span : utf8::WhitespaceTokenSpans(line)) {
      result.append(line, cursor, span.begin - cursor);
      cursor = span.end;
      const std::string_view word =
          std::string_view(line).substr(span.begin, span.end - span.begin);
      Segmentation seg;
      if (bpe) {
        const auto& table = std::get<MergeTable>(model);
        seg = sample ? BpeDropoutEncode(word, table, options.parameter, rng)
                     : BpeEncode(word, table);
      } else {
        const auto& vocab = std::get<UnigramVocab>(model);
        seg = sample ? UnigramSample(word, vocab, options.parameter, rng)
                     : UnigramViterbi(word, vocab);
      }
      result += seg.Serialize(marker);
    }
    result.append(line, cursor, std::string::npos);
    out[i] = std::move(result);
  });
  return SentenceList(std::move(out));
}

std::string DetokenizeLine(std::string_view line, std::string_view marker) {
  const std::string joint = std::string(marker) + ' ';
  std::string out;
  out.reserve(line.size());
  size_t pos = 0;
  while (pos < line.size()) {
    const size_t hit = line.find(joint, pos);
    if (hit == std::string_view::npos) {
      out.append(line.substr(pos));
      break;
    }
    out.append(line.substr(pos, hit - pos));
    pos = hit + joint.size();
  }
  return out;
}

SentenceList DetokenizeCorpus(const SentenceList& sentences,
                              std::string_view marker) {
  std::vector<std::string> out;
  out.reserve(sentences.size());
  for (const auto& line : sentences.lines) {
    out.push_back(DetokenizeLine(line, marker));
  }
  return SentenceList(std::move(out));
}

}  // namespace mtrobust
