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

#ifndef MTROBUST_TRANSLATOR_H_
#define MTROBUST_TRANSLATOR_H_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mtrobust/corpus_io.h"
#include "mtrobust/random.h"

namespace mtrobust {

enum class TranslatorKind { kCommand, kFile, kStub };
enum class StubName { kIdentity, kDegrading };

struct StubConfig {
  StubName name = StubName::kIdentity;
  double sensitivity = 0.0;  // degrading stub only, in [0, 1]
  uint64_t seed = 0;
};

// The system under test. Exactly one kind-specific payload is set.
struct TranslatorSpec {
  TranslatorKind kind = TranslatorKind::kStub;
  std::optional<std::string> command_line;
  std::optional<std::filesystem::path> hyp_path;
  std::optional<StubConfig> stub = StubConfig{};
  std::chrono::seconds timeout{600};

  // "cmd:<command>" | "file:<path>" | "stub:identity" |
  // "stub:degrading,s=<x>,seed=<n>". Throws UsageError.
  static TranslatorSpec Parse(std::string_view flag);
  std::string ToString() const;
  void Validate() const;
};

// Word list the degrading stub treats as its training vocabulary. Known
// words keep their most frequent surface casing; unknown words within one
// edit of a known word can be recovered.
class StubLexicon {
 public:
  StubLexicon() = default;
  explicit StubLexicon(const SentenceList& training);

  bool empty() const { return frequency_.empty(); }
  // Surface form for a case-folded word, if known.
  std::optional<std::string> Surface(const std::string& folded) const;
  // Most frequent known word at edit distance exactly 1 (ties: smallest).
  std::optional<std::string> Correct(const std::string& folded) const;

 private:
  std::unordered_map<std::string, uint64_t> frequency_;
  std::unordered_map<std::string, std::string> surface_;
  std::unordered_map<std::string, std::vector<std::string>> deletes_;
};

// Deterministic pseudo-translation: case-folded words in reverse order.
// Unknown words are corrected through the lexicon when possible. Each word
// is then corrupted (scrambled, or dropped when it cannot be scrambled) with
// probability sensitivity * (fraction of its characters flagged as
// perturbed). Characters of unknown words are all flagged; characters of
// known words are flagged where their case differs from the lexicon form.
std::string DegradingStub(std::string_view sentence, double sensitivity,
                          RandomStream& rng, const StubLexicon& lexicon = {});

// Runs the translator. Command mode pipes all lines through `/bin/sh -c`
// in one batch; file mode loads hypotheses; stub mode uses stream
// Rng(MixSeed(stub.seed, i)) for sentence i. The output always has the input
// cardinality; violations throw TranslatorError.
SentenceList Translate(const SentenceList& sentences,
                       const TranslatorSpec& spec,
                       const StubLexicon* lexicon = nullptr, int jobs = 1);

SentenceList RunCommand(const SentenceList& sentences,
                        const std::string& command,
                        std::chrono::seconds timeout);

}  // namespace mtrobust

#endif  // MTROBUST_TRANSLATOR_H_
