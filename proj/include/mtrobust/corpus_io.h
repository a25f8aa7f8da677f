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

#ifndef MTROBUST_CORPUS_IO_H_
#define MTROBUST_CORPUS_IO_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace mtrobust {

// One sentence per element. Lines never contain '\n' or '\r'; loaders
// strip surrounding whitespace. Empty sentences are kept.
struct SentenceList {
  std::vector<std::string> lines;
  std::optional<std::string> source_path;

  SentenceList() = default;
  explicit SentenceList(std::vector<std::string> l,
                        std::optional<std::string> path = std::nullopt)
      : lines(std::move(l)), source_path(std::move(path)) {}

  size_t size() const { return lines.size(); }
  bool empty() const { return lines.empty(); }
  const std::string& operator[](size_t i) const { return lines[i]; }

  friend bool operator==(const SentenceList& a, const SentenceList& b) {
    return a.lines == b.lines;
  }
};

// Source x, reference y and the optional perturbed source x_delta and
// system outputs y' / y'_delta, index-aligned.
struct ParallelCorpus {
  SentenceList source;
  SentenceList reference;
  std::optional<SentenceList> perturbed_source;
  std::optional<SentenceList> hyp_original;
  std::optional<SentenceList> hyp_perturbed;

  size_t size() const { return source.size(); }

  // Throws DataError if the corpus is empty or any present list has a
  // different length from `source`.
  void Validate() const;

  void SetPerturbedSource(SentenceList list);
  void SetHypotheses(SentenceList original, SentenceList perturbed);
};

// Reads a UTF-8 text file. A trailing newline does not produce an extra
// empty sentence. Throws DataError on a missing file or ill-formed UTF-8
// (the message carries the byte offset).
SentenceList LoadLines(const std::filesystem::path& path);

// Writes one line per sentence, each terminated by '\n'. Throws DataError if
// a sentence contains a line break or the file cannot be written.
void WriteLines(const std::filesystem::path& path, const SentenceList& list);

// Throws DataError on length mismatch or an empty corpus.
ParallelCorpus Align(SentenceList source, SentenceList reference);

}  // namespace mtrobust

#endif  // MTROBUST_CORPUS_IO_H_
