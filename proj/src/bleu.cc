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

#include "mtrobust/bleu.h"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "mtrobust/error.h"
#include "mtrobust/parallel.h"
#include "mtrobust/utf8.h"

namespace mtrobust {
namespace {

void ReplaceAll(std::string* s, std::string_view from, std::string_view to) {
  size_t pos = 0;
  while ((pos = s->find(from, pos)) != std::string::npos) {
    s->replace(pos, from.size(), to);
    pos += to.size();
  }
}

// The 13a symbol class: {|}~ [\]^_` space!"#$%& ()*+ :;<=>?@ and '/'.
bool Is13aSymbol(char32_t c) {
  return (c >= 0x7B && c <= 0x7E) || (c >= 0x5B && c <= 0x60) ||
         (c >= 0x20 && c <= 0x26) || (c >= 0x28 && c <= 0x2B) ||
         (c >= 0x3A && c <= 0x40) || c == 0x2F;
}

bool IsDigit(char32_t c) { return c >= U'0' && c <= U'9'; }
bool IsPeriodOrComma(char32_t c) { return c == U'.' || c == U','; }

// Left-to-right, non-overlapping rewrite of every two-character window
// matching `match`, equivalent to re.sub with a two-group pattern.
template <typename Match, typename Emit>
std::u32string RewritePairs(const std::u32string& s, Match match, Emit emit) {
  std::u32string out;
  out.reserve(s.size() + s.size() / 2);
  size_t i = 0;
  while (i < s.size()) {
    if (i + 1 < s.size() && match(s[i], s[i + 1])) {
      emit(&out, s[i], s[i + 1]);
      i += 2;
    } else {
      out.push_back(s[i]);
      ++i;
    }
  }
  return out;
}

std::string JoinNgram(const std::vector<std::string>& tokens, size_t begin,
                      size_t n) {
  std::string key = tokens[begin];
  for (size_t k = 1; k < n; ++k) {
    key += ' ';
    key += tokens[begin + k];
  }
  return key;
}

}  // namespace

BleuTokenizer ParseTokenizer(std::string_view name) {
  if (name == "13a") return BleuTokenizer::k13a;
  if (name == "char" || name == "character") return BleuTokenizer::kCharacter;
  throw UsageError("unknown tokenizer: " + std::string(name));
}

void BleuConfig::Validate() const {
  if (max_order < 1) throw UsageError("max_order must be >= 1");
  if (smoothing == Smoothing::kEpsilon && !(epsilon > 0.0)) {
    throw UsageError("epsilon smoothing requires epsilon > 0");
  }
}

BleuStats& BleuStats::operator+=(const BleuStats& other) {
  for (size_t n = 0; n < matches.size(); ++n) {
    matches[n] += other.matches[n];
    totals[n] += other.totals[n];
  }
  hyp_length += other.hyp_length;
  ref_length += other.ref_length;
  return *this;
}

std::vector<std::string> Tokenize13a(std::string_view line) {
  std::string text(line);
  ReplaceAll(&text, "<skipped>", "");
  ReplaceAll(&text, "-\n", "");
  ReplaceAll(&text, "\n", " ");
  if (text.find('&') != std::string::npos) {
    ReplaceAll(&text, "&quot;", "\"");
    ReplaceAll(&text, "&amp;", "&");
    ReplaceAll(&text, "&lt;", "<");
    ReplaceAll(&text, "&gt;", ">");
  }

  std::u32string s = utf8::Decode(" " + text + " ");
  std::u32string spaced;
  spaced.reserve(s.size() * 2);
  for (char32_t c : s) {
    if (Is13aSymbol(c)) {
      spaced.push_back(U' ');
      spaced.push_back(c);
      spaced.push_back(U' ');
    } else {
      spaced.push_back(c);
    }
  }
  // Period and comma unless preceded by a digit.
  spaced = RewritePairs(
      spaced,
      [](char32_t a, char32_t b) { return !IsDigit(a) && IsPeriodOrComma(b); },
      [](std::u32string* out, char32_t a, char32_t b) {
        out->push_back(a);
        out->push_back(U' ');
        out->push_back(b);
        out->push_back(U' ');
      });
  // Period and comma unless followed by a digit.
  spaced = RewritePairs(
      spaced,
      [](char32_t a, char32_t b) { return IsPeriodOrComma(a) && !IsDigit(b); },
      [](std::u32string* out, char32_t a, char32_t b) {
        out->push_back(U' ');
        out->push_back(a);
        out->push_back(U' ');
        out->push_back(b);
      });
  // Dash preceded by a digit.
  spaced = RewritePairs(
      spaced, [](char32_t a, char32_t b) { return IsDigit(a) && b == U'-'; },
      [](std::u32string* out, char32_t a, char32_t b) {
        out->push_back(a);
        out->push_back(U' ');
        out->push_back(b);
        out->push_back(U' ');
      });
  return utf8::SplitWhitespace(utf8::Encode(spaced));
}

std::vector<std::string> TokenizeCharacter(std::string_view line) {
  std::vector<std::string> tokens;
  for (char32_t c : utf8::Decode(line)) {
    if (!utf8::IsSpace(c)) tokens.push_back(utf8::Encode(c));
  }
  return tokens;
}

std::vector<std::string> TokenizeForBleu(std::string_view line,
                                         const BleuConfig& config) {
  std::string text = config.lowercase ? utf8::ToLower(line) : std::string(line);
  return config.tokenizer == BleuTokenizer::k13a ? Tokenize13a(text)
                                                 : TokenizeCharacter(text);
}

BleuStats ComputeStats(const std::vector<std::string>& hyp_tokens,
                       const std::vector<std::string>& ref_tokens,
                       int max_order) {
  BleuStats stats(max_order);
  stats.hyp_length = hyp_tokens.size();
  stats.ref_length = ref_tokens.size();
  for (int order = 1; order <= max_order; ++order) {
    const size_t n = static_cast<size_t>(order);
    if (hyp_tokens.size() < n) break;
    std::unordered_map<std::string, uint64_t> ref_counts;
    for (size_t i = 0; i + n <= ref_tokens.size(); ++i) {
      ++ref_counts[JoinNgram(ref_tokens, i, n)];
    }
    std::unordered_map<std::string, uint64_t> hyp_counts;
    for (size_t i = 0; i + n <= hyp_tokens.size(); ++i) {
      ++hyp_counts[JoinNgram(hyp_tokens, i, n)];
    }
    uint64_t matches = 0;
    for (const auto& [ngram, count] : hyp_counts) {
      const auto it = ref_counts.find(ngram);
      if (it != ref_counts.end()) matches += std::min(count, it->second);
    }
    stats.matches[n - 1] = matches;
    stats.totals[n - 1] = hyp_tokens.size() - n + 1;
  }
  return stats;
}

BleuStats SentenceStats(std::string_view hyp, std::string_view ref,
                        const BleuConfig& config) {
  return ComputeStats(TokenizeForBleu(hyp, config),
                      TokenizeForBleu(ref, config), config.max_order);
}

BleuScore ScoreFromStats(const BleuStats& stats, const BleuConfig& config) {
  BleuScore score;
  score.hyp_length = stats.hyp_length;
  score.ref_length = stats.ref_length;
  for (size_t n = 0; n < stats.matches.size(); ++n) {
    score.precisions.push_back({stats.matches[n], stats.totals[n]});
  }
  if (stats.hyp_length < stats.ref_length) {
    score.brevity_penalty =
        stats.hyp_length > 0
            ? std::exp(1.0 - static_cast<double>(stats.ref_length) /
                                 static_cast<double>(stats.hyp_length))
            : 0.0;
  }
  const bool any_match =
      std::any_of(stats.matches.begin(), stats.matches.end(),
                  [](uint64_t m) { return m > 0; });
  if (!any_match) return score;

  // Orders without any hypothesis n-gram are left out of the geometric mean.
  double log_sum = 0.0;
  int orders = 0;
  for (size_t n = 0; n < stats.matches.size(); ++n) {
    const uint64_t total = stats.totals[n];
    if (total == 0) continue;
    double precision;
    if (stats.matches[n] > 0) {
      precision = static_cast<double>(stats.matches[n]) /
                  static_cast<double>(total);
    } else if (config.smoothing == Smoothing::kEpsilon) {
      precision = config.epsilon / static_cast<double>(total);
    } else {
      return score;
    }
    log_sum += std::log(precision);
    ++orders;
  }
  if (orders == 0) return score;
  score.score = 100.0 * score.brevity_penalty * std::exp(log_sum / orders);
  return score;
}

std::vector<BleuStats> CorpusStats(const SentenceList& hypotheses,
                                   const SentenceList& references,
                                   const BleuConfig& config, int jobs) {
  config.Validate();
  if (hypotheses.size() != references.size()) {
    throw DataError("length mismatch: " + std::to_string(hypotheses.size()) +
                    " hypotheses, " + std::to_string(references.size()) +
                    " references");
  }
  if (hypotheses.empty()) throw DataError("empty corpus");
  std::vector<BleuStats> stats(hypotheses.size(), BleuStats(config.max_order));
  ParallelFor(hypotheses.size(), jobs, [&](size_t i) {
    stats[i] = SentenceStats(hypotheses[i], references[i], config);
  });
  return stats;
}

BleuScore CorpusBleu(const SentenceList& hypotheses,
                     const SentenceList& references, const BleuConfig& config) {
  BleuStats total(config.max_order);
  for (const auto& s : CorpusStats(hypotheses, references, config)) {
    total += s;
  }
  return ScoreFromStats(total, config);
}

}  // namespace mtrobust
