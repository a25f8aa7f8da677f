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

#include "mtrobust/corpus_io.h"

#include <fstream>
#include <iterator>
#include <sstream>

#include "mtrobust/error.h"
#include "mtrobust/utf8.h"

namespace mtrobust {
namespace {

void CheckLength(const char* name, const SentenceList& list, size_t expected) {
  if (list.size() != expected) {
    std::ostringstream os;
    os << "length mismatch: " << name << " has " << list.size()
       << " lines, source has " << expected;
    throw DataError(os.str());
  }
}

}  // namespace

void ParallelCorpus::Validate() const {
  if (source.empty()) throw DataError("empty corpus");
  CheckLength("reference", reference, source.size());
  if (perturbed_source) {
    CheckLength("perturbed source", *perturbed_source, source.size());
  }
  if (hyp_original) CheckLength("original hypotheses", *hyp_original, size());
  if (hyp_perturbed) {
    CheckLength("perturbed hypotheses", *hyp_perturbed, size());
  }
}

void ParallelCorpus::SetPerturbedSource(SentenceList list) {
  CheckLength("perturbed source", list, size());
  perturbed_source = std::move(list);
}

void ParallelCorpus::SetHypotheses(SentenceList original,
                                   SentenceList perturbed) {
  CheckLength("original hypotheses", original, size());
  CheckLength("perturbed hypotheses", perturbed, size());
  hyp_original = std::move(original);
  hyp_perturbed = std::move(perturbed);
}

SentenceList LoadLines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  const std::string data((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  if (const auto bad = utf8::FindInvalid(data)) {
    throw DataError(path.string() + ": invalid UTF-8 at byte offset " +
                    std::to_string(*bad));
  }
  std::vector<std::string> lines;
  size_t begin = 0;
  while (begin < data.size()) {
    size_t end = data.find('\n', begin);
    if (end == std::string::npos) end = data.size();
    lines.emplace_back(utf8::Strip(
        std::string_view(data).substr(begin, end - begin)));
    begin = end + 1;
  }
  return SentenceList(std::move(lines), path.string());
}

void WriteLines(const std::filesystem::path& path, const SentenceList& list) {
  std::string data;
  for (size_t i = 0; i < list.size(); ++i) {
    if (list[i].find_first_of("\r\n") != std::string::npos) {
      throw DataError("sentence " + std::to_string(i) +
                      " contains a line break");
    }
    data += list[i];
    data += '\n';
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << data;
  if (!out) throw DataError("write failed: " + path.string());
}

ParallelCorpus Align(SentenceList source, SentenceList reference) {
  if (source.size() != reference.size()) {
    throw DataError("length mismatch: source has " +
                    std::to_string(source.size()) +
                    " lines, reference has " +
                    std::to_string(reference.size()));
  }
  if (source.empty()) throw DataError("empty corpus");
  ParallelCorpus corpus;
  corpus.source = std::move(source);
  corpus.reference = std::move(reference);
  return corpus;
}

}  // namespace mtrobust
