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

#include "mtrobust/perturbation.h"

#include <algorithm>
#include <array>
#include <fstream>
#include <utility>

#include "mtrobust/error.h"
#include "mtrobust/parallel.h"
#include "mtrobust/utf8.h"

namespace mtrobust {
namespace {

// Three-row QWERTY adjacency: left/right neighbours within a row plus the
// standard stagger, where the key at column k of a lower row touches
// columns k and k+1 of the row above it.
constexpr std::array<std::string_view, 26> kQwertyTable = {
    "qswz",    // a
    "ghnv",    // b
    "dfvx",    // c
    "cefrsx",  // d
    "drsw",    // e
    "cdgrtv",  // f
    "bfhtvy",  // g
    "bgjnuy",  // h
    "jkou",    // i
    "hikmnu",  // j
    "ijlmo",   // k
    "kop",     // l
    "jkn",     // m
    "bhjm",    // n
    "iklp",    // o
    "lo",      // p
    "aw",      // q
    "deft",    // r
    "adewxz",  // s
    "fgry",    // t
    "hijy",    // u
    "bcfg",    // v
    "aeqs",    // w
    "cdsz",    // x
    "ghtu",    // y
    "asx",     // z
};

struct SentenceOutcome {
  std::string text;
  std::vector<PerturbationRecord> records;
  size_t units_total = 0;
  size_t units_selected = 0;
};

SentenceOutcome MisspellSentenceDefault(const std::string& line,
                                        size_t sentence_index, double p,
                                        RandomStream& rng) {
  SentenceOutcome out;
  size_t cursor = 0;
  const auto spans = utf8::WhitespaceTokenSpans(line);
  for (size_t t = 0; t < spans.size(); ++t) {
    const auto& span = spans[t];
    out.text.append(line, cursor, span.begin - cursor);
    const std::string token = line.substr(span.begin, span.end - span.begin);
    cursor = span.end;
    ++out.units_total;
    if (!rng.Bernoulli(p)) {
      out.text += token;
      continue;
    }
    ++out.units_selected;
    MisspellOutcome m =
        MisspellWord(utf8::Decode(token), rng, LanguageMode::kDefault);
    if (!m.edit) {
      out.text += token;
      continue;
    }
    std::string perturbed = utf8::Encode(m.word);
    out.records.push_back(
        {sentence_index, t, m.edit->strategy, token, perturbed});
    out.text += perturbed;
  }
  out.text.append(line, cursor, std::string::npos);
  return out;
}

SentenceOutcome MisspellSentenceJapanese(const std::string& line,
                                         size_t sentence_index, double p,
                                         RandomStream& rng) {
  SentenceOutcome out;
  const std::u32string chars = utf8::Decode(line);
  size_t remaining = 0;
  for (char32_t c : chars) remaining += utf8::IsSpace(c) ? 0 : 1;
  size_t emitted = 0;
  std::u32string result;
  for (size_t j = 0; j < chars.size(); ++j) {
    const char32_t c = chars[j];
    if (utf8::IsSpace(c)) {
      result.push_back(c);
      continue;
    }
    --remaining;
    ++out.units_total;
    if (!rng.Bernoulli(p)) {
      result.push_back(c);
      ++emitted;
      continue;
    }
    ++out.units_selected;
    // Deletion must not leave the sentence without any character.
    const bool can_delete = emitted + remaining > 0;
    EditStrategy strategy = EditStrategy::kRepetition;
    if (can_delete && rng.UniformIndex(2) == 0) {
      strategy = EditStrategy::kDeletion;
    }
    std::u32string unit;
    if (strategy == EditStrategy::kRepetition) {
      unit = {c, c};
      emitted += 2;
    }
    result += unit;
    out.records.push_back({sentence_index, j, strategy, utf8::Encode(c),
                           utf8::Encode(unit)});
  }
  out.text = utf8::Encode(result);
  return out;
}

SentenceOutcome CaseChangeSentence(const std::string& line,
                                   size_t sentence_index, double p,
                                   RandomStream& rng) {
  SentenceOutcome out;
  out.units_total = 1;
  if (!rng.Bernoulli(p)) {
    out.text = line;
    return out;
  }
  out.units_selected = 1;
  static constexpr std::array<EditStrategy, 3> kStrategies = {
      EditStrategy::kUpperAll, EditStrategy::kLowerAll,
      EditStrategy::kTitleAll};
  const EditStrategy strategy = kStrategies[rng.UniformIndex(3)];
  switch (strategy) {
    case EditStrategy::kUpperAll:
      out.text = UpperAll(line);
      break;
    case EditStrategy::kLowerAll:
      out.text = LowerAll(line);
      break;
    default:
      out.text = TitleAll(line);
      break;
  }
  if (out.text != line) {
    out.records.push_back({sentence_index, 0, strategy, line, out.text});
  }
  return out;
}

template <typename Fn>
PerturbationResult PerturbEach(const SentenceList& sentences,
                               const PerturbationSpec& spec, int jobs,
                               Fn per_sentence) {
  spec.Validate();
  std::vector<SentenceOutcome> outcomes(sentences.size());
  ParallelFor(sentences.size(), jobs, [&](size_t i) {
    Rng rng(MixSeed(spec.master_seed, i));
    outcomes[i] = per_sentence(sentences[i], i, spec.probability, rng);
  });
  PerturbationResult result;
  result.sentences.lines.reserve(sentences.size());
  for (auto& o : outcomes) {
    result.sentences.lines.push_back(std::move(o.text));
    result.units_total += o.units_total;
    result.units_selected += o.units_selected;
    for (auto& r : o.records) result.log.records.push_back(std::move(r));
  }
  return result;
}

}  // namespace

void PerturbationSpec::Validate() const {
  if (!(probability >= 0.0 && probability <= 1.0)) {
    throw UsageError("perturbation probability must be in [0, 1], got " +
                     std::to_string(probability));
  }
  if (language_mode == LanguageMode::kJapanese &&
      kind != PerturbationKind::kMisspelling) {
    throw UsageError("japanese mode only supports misspelling");
  }
}

std::string_view StrategyName(EditStrategy strategy) {
  switch (strategy) {
    case EditStrategy::kDeletion: return "deletion";
    case EditStrategy::kInsertion: return "insertion";
    case EditStrategy::kSubstitution: return "substitution";
    case EditStrategy::kRepetition: return "repetition";
    case EditStrategy::kUpperAll: return "upper";
    case EditStrategy::kLowerAll: return "lower";
    case EditStrategy::kTitleAll: return "title";
  }
  return "unknown";
}

std::string_view KindName(PerturbationKind kind) {
  return kind == PerturbationKind::kMisspelling ? "misspell" : "case";
}

PerturbationKind ParseKind(std::string_view name) {
  if (name == "misspell" || name == "misspelling") {
    return PerturbationKind::kMisspelling;
  }
  if (name == "case" || name == "case_changing") {
    return PerturbationKind::kCaseChanging;
  }
  throw UsageError("unknown perturbation kind: " + std::string(name));
}

LanguageMode ParseLanguageMode(std::string_view name) {
  if (name == "default") return LanguageMode::kDefault;
  if (name == "ja" || name == "japanese") return LanguageMode::kJapanese;
  throw UsageError("unknown language mode: " + std::string(name));
}

void PerturbationLog::WriteTsv(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << "sentence_index\tunit_index\tstrategy\toriginal\tperturbed\n";
  for (const auto& r : records) {
    out << r.sentence_index << '\t' << r.unit_index << '\t'
        << StrategyName(r.strategy) << '\t' << r.original << '\t'
        << r.perturbed << '\n';
  }
  if (!out) throw DataError("write failed: " + path.string());
}

std::vector<char32_t> QwertyNeighbors(char32_t c) {
  const bool upper = c >= U'A' && c <= U'Z';
  const char32_t lower = upper ? c - U'A' + U'a' : c;
  if (lower < U'a' || lower > U'z') return {};
  std::vector<char32_t> out;
  for (char n : kQwertyTable[lower - U'a']) {
    const char32_t nc = static_cast<char32_t>(n);
    out.push_back(upper ? nc - U'a' + U'A' : nc);
  }
  return out;
}

std::u32string ApplyEdit(std::u32string_view word, const Edit& edit) {
  std::u32string out(word);
  switch (edit.strategy) {
    case EditStrategy::kDeletion:
      out.erase(edit.position, 1);
      break;
    case EditStrategy::kInsertion:
      out.insert(out.begin() + static_cast<std::ptrdiff_t>(edit.position),
                 edit.payload);
      break;
    case EditStrategy::kSubstitution:
      out[edit.position] = edit.payload;
      break;
    case EditStrategy::kRepetition:
      out.insert(out.begin() + static_cast<std::ptrdiff_t>(edit.position),
                 out[edit.position]);
      break;
    default:
      throw UsageError("not a character edit: " +
                       std::string(StrategyName(edit.strategy)));
  }
  return out;
}

MisspellOutcome MisspellWord(std::u32string_view word, RandomStream& rng,
                             LanguageMode mode) {
  MisspellOutcome outcome{std::u32string(word), std::nullopt};
  if (word.empty()) return outcome;

  std::vector<EditStrategy> applicable;
  std::vector<size_t> substitutable;
  if (word.size() >= 2) applicable.push_back(EditStrategy::kDeletion);
  if (mode == LanguageMode::kJapanese) {
    applicable.push_back(EditStrategy::kRepetition);
  } else {
    applicable.push_back(EditStrategy::kInsertion);
    for (size_t i = 0; i < word.size(); ++i) {
      if (!QwertyNeighbors(word[i]).empty()) substitutable.push_back(i);
    }
    if (!substitutable.empty()) {
      applicable.push_back(EditStrategy::kSubstitution);
    }
  }

  Edit edit{applicable[rng.UniformIndex(applicable.size())], 0, 0};
  switch (edit.strategy) {
    case EditStrategy::kDeletion:
    case EditStrategy::kRepetition:
      edit.position = rng.UniformIndex(word.size());
      break;
    case EditStrategy::kInsertion: {
      edit.position = rng.UniformIndex(word.size() + 1);
      char32_t letter = U'a' + static_cast<char32_t>(rng.UniformIndex(26));
      const char32_t adjacent =
          edit.position > 0 ? word[edit.position - 1] : word[0];
      if (utf8::IsUpper(adjacent)) letter = letter - U'a' + U'A';
      edit.payload = letter;
      break;
    }
    case EditStrategy::kSubstitution: {
      edit.position = substitutable[rng.UniformIndex(substitutable.size())];
      const auto neighbors = QwertyNeighbors(word[edit.position]);
      edit.payload = neighbors[rng.UniformIndex(neighbors.size())];
      break;
    }
    default:
      break;
  }
  outcome.word = ApplyEdit(word, edit);
  outcome.edit = edit;
  return outcome;
}

PerturbationResult PerturbMisspelling(const SentenceList& sentences,
                                      const PerturbationSpec& spec, int jobs) {
  if (spec.kind != PerturbationKind::kMisspelling) {
    throw UsageError("PerturbMisspelling requires kind = misspelling");
  }
  if (spec.language_mode == LanguageMode::kJapanese) {
    return PerturbEach(sentences, spec, jobs, MisspellSentenceJapanese);
  }
  return PerturbEach(sentences, spec, jobs, MisspellSentenceDefault);
}

PerturbationResult PerturbCasing(const SentenceList& sentences,
                                 const PerturbationSpec& spec, int jobs) {
  if (spec.kind != PerturbationKind::kCaseChanging) {
    throw UsageError("PerturbCasing requires kind = case_changing");
  }
  return PerturbEach(sentences, spec, jobs, CaseChangeSentence);
}

PerturbationResult Perturb(const SentenceList& sentences,
                           const PerturbationSpec& spec, int jobs) {
  if (spec.kind == PerturbationKind::kMisspelling) {
    return PerturbMisspelling(sentences, spec, jobs);
  }
  return PerturbCasing(sentences, spec, jobs);
}

std::string UpperAll(std::string_view sentence) {
  std::u32string chars = utf8::Decode(sentence);
  for (char32_t& c : chars) c = utf8::ToUpper(c);
  return utf8::Encode(chars);
}

std::string LowerAll(std::string_view sentence) {
  std::u32string chars = utf8::Decode(sentence);
  for (char32_t& c : chars) c = utf8::ToLower(c);
  return utf8::Encode(chars);
}

std::string TitleAll(std::string_view sentence) {
  std::u32string chars = utf8::Decode(sentence);
  bool word_start = true;
  for (char32_t& c : chars) {
    if (utf8::IsSpace(c)) {
      word_start = true;
      continue;
    }
    c = word_start ? utf8::ToUpper(c) : utf8::ToLower(c);
    word_start = false;
  }
  return utf8::Encode(chars);
}

}  // namespace mtrobust
