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

#ifndef MTROBUST_PERTURBATION_H_
#define MTROBUST_PERTURBATION_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mtrobust/corpus_io.h"
#include "mtrobust/random.h"

namespace mtrobust {

enum class PerturbationKind { kMisspelling, kCaseChanging };
enum class LanguageMode { kDefault, kJapanese };

// A seeded synthetic perturbation at a given noise level. `probability` is
// per word (per character in Japanese mode) for misspelling and per
// sentence for case changing.
struct PerturbationSpec {
  PerturbationKind kind = PerturbationKind::kMisspelling;
  double probability = 0.1;
  LanguageMode language_mode = LanguageMode::kDefault;
  uint64_t master_seed = 0;

  // Throws UsageError if probability is outside [0, 1] or Japanese mode is
  // combined with case changing.
  void Validate() const;
};

enum class EditStrategy {
  kDeletion,
  kInsertion,
  kSubstitution,
  kRepetition,
  kUpperAll,
  kLowerAll,
  kTitleAll,
};

std::string_view StrategyName(EditStrategy strategy);
std::string_view KindName(PerturbationKind kind);
PerturbationKind ParseKind(std::string_view name);        // "misspell"|"case"
LanguageMode ParseLanguageMode(std::string_view name);    // "default"|"ja"

struct PerturbationRecord {
  size_t sentence_index = 0;
  size_t unit_index = 0;  // token index, character index, or 0 for casing
  EditStrategy strategy = EditStrategy::kDeletion;
  std::string original;
  std::string perturbed;
};

struct PerturbationLog {
  std::vector<PerturbationRecord> records;

  // TSV with header: sentence_index, unit_index, strategy, original,
  // perturbed.
  void WriteTsv(const std::filesystem::path& path) const;
};

struct PerturbationResult {
  SentenceList sentences;
  PerturbationLog log;
  size_t units_total = 0;     // tokens, characters or sentences considered
  size_t units_selected = 0;  // units that won the selection draw
};

// QWERTY neighbours of an ASCII letter, case preserved, sorted. Empty for
// anything else (digits, punctuation, accented letters).
std::vector<char32_t> QwertyNeighbors(char32_t c);

// A single character edit on a word of code points.
struct Edit {
  EditStrategy strategy;
  size_t position;    // insertion: insert before this index
  char32_t payload;   // inserted or substituted character, unused otherwise
};

std::u32string ApplyEdit(std::u32string_view word, const Edit& edit);

struct MisspellOutcome {
  std::u32string word;
  std::optional<Edit> edit;  // nullopt when no strategy applies
};

// Draws one edit (strategy, then position, then payload) uniformly among
// the strategies applicable to `word` and applies it. Default mode picks
// from deletion (needs >= 2 characters), insertion and substitution (needs
// a character with QWERTY neighbours). Japanese mode picks from deletion
// and repetition.
MisspellOutcome MisspellWord(std::u32string_view word, RandomStream& rng,
                             LanguageMode mode);

// Sentence i uses the stream Rng(MixSeed(master_seed, i)), so the output is
// independent of `jobs`.
PerturbationResult PerturbMisspelling(const SentenceList& sentences,
                                      const PerturbationSpec& spec,
                                      int jobs = 1);
PerturbationResult PerturbCasing(const SentenceList& sentences,
                                 const PerturbationSpec& spec, int jobs = 1);
PerturbationResult Perturb(const SentenceList& sentences,
                           const PerturbationSpec& spec, int jobs = 1);

// Whole-sentence case transforms used by case changing. Title-casing
// operates on whitespace-delimited words.
std::string UpperAll(std::string_view sentence);
std::string LowerAll(std::string_view sentence);
std::string TitleAll(std::string_view sentence);

}  // namespace mtrobust

#endif  // MTROBUST_PERTURBATION_H_
