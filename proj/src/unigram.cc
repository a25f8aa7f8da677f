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

#include "mtrobust/unigram.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "mtrobust/error.h"
#include "mtrobust/utf8.h"

namespace mtrobust {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// Smallest share of the expected mass a character may get in an EM step.
constexpr double kCharacterFloor = 1e-12;

struct Edge {
  size_t begin;
  size_t end;
  double log_prob;
  bool fallback;
  std::string piece;
};

// ends[e] holds every edge of the segmentation lattice that ends at code
// point offset e. `exclude` removes one multi-character piece.
struct Lattice {
  size_t length = 0;
  std::vector<std::vector<Edge>> ends;
};

Lattice BuildLattice(const std::u32string& chars, const UnigramVocab& vocab,
                     std::string_view exclude = {}) {
  Lattice lattice;
  lattice.length = chars.size();
  lattice.ends.resize(chars.size() + 1);
  const size_t max_len = std::max<size_t>(vocab.max_piece_length(), 1);
  for (size_t e = 1; e <= chars.size(); ++e) {
    const size_t first = e > max_len ? e - max_len : 0;
    for (size_t s = first; s < e; ++s) {
      std::string piece =
          utf8::Encode(std::u32string_view(chars).substr(s, e - s));
      if (e - s > 1 && piece == exclude) continue;
      if (const auto lp = vocab.LogProb(piece)) {
        lattice.ends[e].push_back({s, e, *lp, false, std::move(piece)});
      } else if (e - s == 1) {
        lattice.ends[e].push_back(
            {s, e, vocab.unknown_log_prob(), true, std::move(piece)});
      }
    }
  }
  return lattice;
}

double LogAddExp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

// Forward log-marginals with edge weights scaled by `alpha`.
std::vector<double> Forward(const Lattice& lattice, double alpha) {
  std::vector<double> fwd(lattice.length + 1, kNegInf);
  fwd[0] = 0.0;
  for (size_t e = 1; e <= lattice.length; ++e) {
    for (const Edge& edge : lattice.ends[e]) {
      fwd[e] = LogAddExp(fwd[e], fwd[edge.begin] + alpha * edge.log_prob);
    }
  }
  return fwd;
}

std::vector<double> Backward(const Lattice& lattice) {
  std::vector<double> bwd(lattice.length + 1, kNegInf);
  bwd[lattice.length] = 0.0;
  for (size_t e = lattice.length; e >= 1; --e) {
    for (const Edge& edge : lattice.ends[e]) {
      bwd[edge.begin] =
          LogAddExp(bwd[edge.begin], edge.log_prob + bwd[e]);
    }
  }
  return bwd;
}

struct ViterbiCell {
  double score = kNegInf;
  size_t pieces = 0;
  const Edge* back = nullptr;
};

std::vector<std::string> TracePieces(const std::vector<ViterbiCell>& cells,
                                     size_t end, const Edge* last = nullptr) {
  std::vector<std::string> pieces;
  if (last) {
    pieces.push_back(last->piece);
    end = last->begin;
  }
  while (end > 0) {
    const Edge* edge = cells[end].back;
    pieces.push_back(edge->piece);
    end = edge->begin;
  }
  std::reverse(pieces.begin(), pieces.end());
  return pieces;
}

Segmentation ViterbiOnLattice(const Lattice& lattice, bool* used_fallback) {
  if (used_fallback) *used_fallback = false;
  if (lattice.length == 0) return {};
  std::vector<ViterbiCell> cells(lattice.length + 1);
  cells[0].score = 0.0;
  for (size_t e = 1; e <= lattice.length; ++e) {
    ViterbiCell& cell = cells[e];
    for (const Edge& edge : lattice.ends[e]) {
      const ViterbiCell& prev = cells[edge.begin];
      if (prev.score == kNegInf) continue;
      const double score = prev.score + edge.log_prob;
      const size_t pieces = prev.pieces + 1;
      bool better = cell.back == nullptr || score > cell.score ||
                    (score == cell.score && pieces < cell.pieces);
      if (!better && score == cell.score && pieces == cell.pieces) {
        better = TracePieces(cells, e, &edge) < TracePieces(cells, e);
      }
      if (better) {
        cell.score = score;
        cell.pieces = pieces;
        cell.back = &edge;
      }
    }
  }
  if (used_fallback) {
    for (size_t e = lattice.length; e > 0; e = cells[e].back->begin) {
      if (cells[e].back->fallback) *used_fallback = true;
    }
  }
  return Segmentation::FromTexts(TracePieces(cells, lattice.length));
}

size_t CodePointLength(std::string_view piece) {
  return utf8::Decode(piece).size();
}

UnigramVocab Normalize(const std::map<std::string, double>& counts) {
  double total = 0.0;
  for (const auto& [piece, count] : counts) total += count;
  std::unordered_map<std::string, double> log_probs;
  for (const auto& [piece, count] : counts) {
    log_probs.emplace(piece, std::log(count / total));
  }
  return UnigramVocab(std::move(log_probs));
}

// Drops the share of multi-character pieces whose removal loses the least
// likelihood, approximating each removed piece's loss by re-segmenting it
// with the remaining vocabulary.
UnigramVocab Prune(const WordFrequencies& words, const UnigramVocab& vocab,
                   size_t target, double prune_fraction) {
  std::map<std::string, double> freq;
  for (const auto& [piece, lp] : vocab.log_probs()) freq[piece] = 0.0;
  for (const auto& [word, count] : words) {
    for (const auto& piece : UnigramViterbi(word, vocab).pieces) {
      freq[piece.text] += static_cast<double>(count);
    }
  }
  double sum = 0.0;
  for (const auto& [piece, f] : freq) sum += f;
  const double logsum = std::log(sum);

  std::map<std::string, double> kept;
  std::vector<std::pair<double, std::string>> candidates;
  for (const auto& [piece, lp] : vocab.log_probs()) {
    if (CodePointLength(piece) <= 1) {
      kept[piece] = std::exp(lp);
      continue;
    }
    const double f = freq[piece];
    double loss = 0.0;
    if (f > 0.0) {
      const Lattice alt_lattice =
          BuildLattice(utf8::Decode(piece), vocab, piece);
      const auto alternatives = ViterbiOnLattice(alt_lattice, nullptr).pieces;
      const double logprob_sp = std::log(f) - logsum;
      const double logsum_alt = std::log(
          sum + f * (static_cast<double>(alternatives.size()) - 1.0));
      double logprob_alt = 0.0;
      for (const auto& alt : alternatives) {
        logprob_alt += std::log(freq[alt.text] + f) - logsum_alt;
      }
      loss = (f / sum) * (logprob_sp - logprob_alt);
    }
    candidates.emplace_back(loss, piece);
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const auto& a, const auto& b) {
              return a.first != b.first ? a.first > b.first
                                        : a.second < b.second;
            });
  const size_t drop = std::max<size_t>(
      1, static_cast<size_t>(prune_fraction *
                             static_cast<double>(candidates.size())));
  const size_t new_size =
      std::max(target, vocab.size() - std::min(drop, candidates.size()));
  const size_t keep_multi = new_size - kept.size();
  for (size_t i = 0; i < keep_multi && i < candidates.size(); ++i) {
    const std::string& piece = candidates[i].second;
    kept[piece] = std::exp(*vocab.LogProb(piece));
  }
  return Normalize(kept);
}

}  // namespace

UnigramVocab::UnigramVocab(std::unordered_map<std::string, double> log_probs)
    : log_probs_(std::move(log_probs)) {
  double min_lp = 0.0;
  for (const auto& [piece, lp] : log_probs_) {
    max_piece_length_ = std::max(max_piece_length_, CodePointLength(piece));
    min_lp = std::min(min_lp, lp);
  }
  unknown_log_prob_ = min_lp - 10.0;
}

std::optional<double> UnigramVocab::LogProb(std::string_view piece) const {
  const auto it = log_probs_.find(std::string(piece));
  if (it == log_probs_.end()) return std::nullopt;
  return it->second;
}

std::string UnigramVocab::Serialize() const {
  std::vector<std::pair<std::string, double>> sorted(log_probs_.begin(),
                                                     log_probs_.end());
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  std::string out;
  char buf[64];
  for (const auto& [piece, lp] : sorted) {
    std::snprintf(buf, sizeof(buf), "%.17g", lp);
    out += piece;
    out += '\t';
    out += buf;
    out += '\n';
  }
  return out;
}

UnigramVocab UnigramVocab::Parse(std::string_view text) {
  std::unordered_map<std::string, double> log_probs;
  std::istringstream in{std::string(text)};
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw DataError("unigram vocab line " + std::to_string(line_no) +
                      ": expected 'piece<TAB>log_prob'");
    }
    const std::string piece = line.substr(0, tab);
    char* end = nullptr;
    const double lp = std::strtod(line.c_str() + tab + 1, &end);
    if (end == line.c_str() + tab + 1 || *end != '\0' || !std::isfinite(lp) ||
        lp > 0.0) {
      throw DataError("unigram vocab line " + std::to_string(line_no) +
                      ": bad log-probability");
    }
    if (!log_probs.emplace(piece, lp).second) {
      throw DataError("unigram vocab: duplicate piece '" + piece + "'");
    }
  }
  return UnigramVocab(std::move(log_probs));
}

void UnigramVocab::Save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << Serialize();
}

UnigramVocab UnigramVocab::Load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  const std::string data((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  return Parse(data);
}

Segmentation UnigramViterbi(std::string_view word, const UnigramVocab& vocab,
                            bool* used_fallback) {
  return ViterbiOnLattice(BuildLattice(utf8::Decode(word), vocab),
                          used_fallback);
}

Segmentation UnigramSample(std::string_view word, const UnigramVocab& vocab,
                           double alpha, RandomStream& rng) {
  if (!(alpha > 0.0)) throw UsageError("sampling alpha must be > 0");
  const Lattice lattice = BuildLattice(utf8::Decode(word), vocab);
  if (lattice.length == 0) return {};
  const std::vector<double> fwd = Forward(lattice, alpha);
  std::vector<std::string> pieces;
  size_t e = lattice.length;
  while (e > 0) {
    const auto& edges = lattice.ends[e];
    const double u = rng.UniformReal();
    double cumulative = 0.0;
    const Edge* chosen = &edges.back();
    for (const Edge& edge : edges) {
      cumulative +=
          std::exp(fwd[edge.begin] + alpha * edge.log_prob - fwd[e]);
      if (u < cumulative) {
        chosen = &edge;
        break;
      }
    }
    pieces.push_back(chosen->piece);
    e = chosen->begin;
  }
  std::reverse(pieces.begin(), pieces.end());
  return Segmentation::FromTexts(std::move(pieces));
}

double CorpusLogLikelihood(const WordFrequencies& words,
                           const UnigramVocab& vocab) {
  double total = 0.0;
  for (const auto& [word, count] : words) {
    const Lattice lattice = BuildLattice(utf8::Decode(word), vocab);
    if (lattice.length == 0) continue;
    total += static_cast<double>(count) * Forward(lattice, 1.0).back();
  }
  return total;
}

UnigramVocab EmStep(const WordFrequencies& words, const UnigramVocab& vocab) {
  std::map<std::string, double> expected;
  for (const auto& [piece, lp] : vocab.log_probs()) expected[piece] = 0.0;
  for (const auto& [word, count] : words) {
    const Lattice lattice = BuildLattice(utf8::Decode(word), vocab);
    if (lattice.length == 0) continue;
    const std::vector<double> fwd = Forward(lattice, 1.0);
    const std::vector<double> bwd = Backward(lattice);
    const double z = fwd.back();
    for (size_t e = 1; e <= lattice.length; ++e) {
      for (const Edge& edge : lattice.ends[e]) {
        if (edge.fallback) continue;
        const double posterior =
            std::exp(fwd[edge.begin] + edge.log_prob + bwd[e] - z);
        expected[edge.piece] += static_cast<double>(count) * posterior;
      }
    }
  }
  // Multi-character pieces that lost all mass leave the vocabulary;
  // characters keep a floor so every word stays segmentable.
  double total = 0.0;
  for (const auto& [piece, c] : expected) total += c;
  const double floor = std::max(total, 1.0) * kCharacterFloor;
  for (auto it = expected.begin(); it != expected.end();) {
    const bool is_char = CodePointLength(it->first) <= 1;
    if (is_char && it->second < floor) {
      it->second = floor;
      ++it;
    } else if (it->second > 0.0) {
      ++it;
    } else {
      it = expected.erase(it);
    }
  }
  return Normalize(expected);
}

UnigramVocab UnigramSeedVocab(const WordFrequencies& words,
                              const UnigramTrainerConfig& config) {
  std::map<std::string, double> chars;
  std::map<std::string, uint64_t> substrings;
  for (const auto& [word, count] : words) {
    const std::u32string cps = utf8::Decode(word);
    for (size_t s = 0; s < cps.size(); ++s) {
      chars[utf8::Encode(cps[s])] += static_cast<double>(count);
      const size_t max_end =
          std::min(cps.size(), s + config.seed_max_piece_len);
      for (size_t e = s + 2; e <= max_end; ++e) {
        substrings[utf8::Encode(std::u32string_view(cps).substr(s, e - s))] +=
            count;
      }
    }
  }
  std::vector<std::pair<uint64_t, std::string>> ranked;
  for (const auto& [piece, freq] : substrings) {
    if (freq >= config.min_seed_frequency) ranked.emplace_back(freq, piece);
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  if (ranked.size() > config.max_seed_pieces) {
    ranked.resize(config.max_seed_pieces);
  }
  std::map<std::string, double> seed = chars;
  for (const auto& [freq, piece] : ranked) {
    seed[piece] = static_cast<double>(freq);
  }
  return Normalize(seed);
}

UnigramVocab UnigramTrain(const WordFrequencies& words, size_t target,
                          const UnigramTrainerConfig& config,
                          UnigramTrainingTrace* trace) {
  std::set<std::string> chars;
  for (const auto& [word, count] : words) {
    for (char32_t c : utf8::Decode(word)) chars.insert(utf8::Encode(c));
  }
  if (chars.empty()) throw DataError("unigram training: empty corpus");
  if (target < chars.size()) {
    throw UsageError("unigram vocabulary size " + std::to_string(target) +
                     " is smaller than the character count " +
                     std::to_string(chars.size()));
  }
  const auto run_em = [&](UnigramVocab vocab) {
    for (int i = 0; i < config.em_iterations; ++i) {
      if (trace) {
        trace->log_likelihoods.push_back(CorpusLogLikelihood(words, vocab));
      }
      vocab = EmStep(words, vocab);
    }
    return vocab;
  };

  UnigramVocab vocab = UnigramSeedVocab(words, config);
  for (;;) {
    vocab = run_em(std::move(vocab));
    if (vocab.size() <= target) break;
    const size_t before = vocab.size();
    vocab = Prune(words, vocab, target, config.prune_fraction);
    if (trace) trace->vocab_sizes.push_back(vocab.size());
    if (vocab.size() >= before) break;
  }
  return run_em(std::move(vocab));
}

}  // namespace mtrobust
