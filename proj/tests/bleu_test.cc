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

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "json.hpp"
#include "mtrobust/error.h"
#include "mtrobust/perturbation.h"
#include "test_util.h"

namespace mtrobust {
namespace {

using testing_util::TestData;

std::string JoinTokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

std::vector<nlohmann::json> ReadJsonLines(const std::string& name) {
  std::ifstream in(TestData(name));
  std::vector<nlohmann::json> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(nlohmann::json::parse(line));
  }
  return out;
}

// Independent corpus BLEU over pre-split tokens, smoothing none.
double OracleCorpusBleu(const std::vector<std::vector<std::string>>& hyps,
                        const std::vector<std::vector<std::string>>& refs) {
  double matches[4] = {0, 0, 0, 0}, totals[4] = {0, 0, 0, 0};
  double h = 0, r = 0;
  for (size_t s = 0; s < hyps.size(); ++s) {
    h += hyps[s].size();
    r += refs[s].size();
    for (size_t n = 1; n <= 4; ++n) {
      std::map<std::vector<std::string>, int> hc, rc;
      for (size_t i = 0; i + n <= hyps[s].size(); ++i) {
        hc[{hyps[s].begin() + i, hyps[s].begin() + i + n}]++;
      }
      for (size_t i = 0; i + n <= refs[s].size(); ++i) {
        rc[{refs[s].begin() + i, refs[s].begin() + i + n}]++;
      }
      for (const auto& [g, c] : hc) {
        totals[n - 1] += c;
        matches[n - 1] += std::min(c, rc[g]);
      }
    }
  }
  double log_sum = 0;
  for (int n = 0; n < 4; ++n) {
    if (matches[n] == 0) return 0.0;
    log_sum += std::log(matches[n] / totals[n]);
  }
  const double bp = h < r ? std::exp(1 - r / h) : 1.0;
  return 100 * bp * std::exp(log_sum / 4);
}

TEST(Tokenize13aTest, GoldenFixtures) {
  const auto cases = ReadJsonLines("tokenize_13a.jsonl");
  ASSERT_GE(cases.size(), 50u);
  for (const auto& c : cases) {
    const std::string input = c["input"];
    EXPECT_EQ(JoinTokens(Tokenize13a(input)), c["output"].get<std::string>())
        << "input: " << input;
  }
}

TEST(Tokenize13aTest, Examples) {
  EXPECT_EQ(Tokenize13a("Hello, world!"),
            (std::vector<std::string>{"Hello", ",", "world", "!"}));
  EXPECT_EQ(Tokenize13a("3.5 pigs"), (std::vector<std::string>{"3.5", "pigs"}));
  EXPECT_TRUE(Tokenize13a("").empty());
}

TEST(TokenizeCharacterTest, Examples) {
  EXPECT_EQ(TokenizeCharacter("猫が好き"),
            (std::vector<std::string>{"猫", "が", "好", "き"}));
  EXPECT_EQ(TokenizeCharacter("a b"), (std::vector<std::string>{"a", "b"}));
  EXPECT_TRUE(TokenizeCharacter("").empty());
}

TEST(CorpusBleuTest, GoldenScores) {
  const auto cases = ReadJsonLines("corpus_bleu.jsonl");
  ASSERT_FALSE(cases.empty());
  for (const auto& c : cases) {
    BleuConfig config;
    config.tokenizer = ParseTokenizer(c["tokenize"].get<std::string>());
    config.lowercase = c["lowercase"];
    config.smoothing = c["smooth"] == "none" ? Smoothing::kNone
                                             : Smoothing::kEpsilon;
    const SentenceList hyps(c["hyps"].get<std::vector<std::string>>());
    const SentenceList refs(c["refs"].get<std::vector<std::string>>());
    const BleuScore score = CorpusBleu(hyps, refs, config);
    EXPECT_NEAR(score.score, c["score"].get<double>(), 1e-9) << c.dump();
    EXPECT_EQ(score.hyp_length, c["sys_len"].get<uint64_t>());
    EXPECT_EQ(score.ref_length, c["ref_len"].get<uint64_t>());
    for (size_t n = 0; n < 4; ++n) {
      EXPECT_EQ(score.precisions[n].matches, c["counts"][n].get<uint64_t>());
      EXPECT_EQ(score.precisions[n].total, c["totals"][n].get<uint64_t>());
    }
  }
}

TEST(CorpusBleuTest, HandCountedPrecisions) {
  const BleuScore s = CorpusBleu(SentenceList({"the cat sat on the mat"}),
                                 SentenceList({"the cat is on the mat"}), {});
  const uint64_t expected[4][2] = {{5, 6}, {3, 5}, {1, 4}, {0, 3}};
  for (size_t n = 0; n < 4; ++n) {
    EXPECT_EQ(s.precisions[n].matches, expected[n][0]);
    EXPECT_EQ(s.precisions[n].total, expected[n][1]);
  }
  EXPECT_EQ(s.score, 0.0);
  EXPECT_EQ(s.brevity_penalty, 1.0);
}

TEST(CorpusBleuTest, Clipping) {
  // "the" occurs once in the reference, so only one of four hypothesis
  // unigrams counts.
  const BleuScore s =
      CorpusBleu(SentenceList({"the the the the"}), SentenceList({"the cat"}),
                 {});
  EXPECT_EQ(s.precisions[0].matches, 1u);
  EXPECT_EQ(s.precisions[0].total, 4u);
  const BleuScore twice = CorpusBleu(SentenceList({"the the the the"}),
                                     SentenceList({"the cat the"}), {});
  EXPECT_EQ(twice.precisions[0].matches, 2u);
}

TEST(CorpusBleuTest, IdentityScoresHundred) {
  const SentenceList x({"The cat sat on the mat .", "Short", "",
                        "Ein Haus am See, sagte er."});
  const BleuScore s = CorpusBleu(x, x, {});
  EXPECT_EQ(s.score, 100.0);
  EXPECT_EQ(s.brevity_penalty, 1.0);
  for (const auto& p : s.precisions) EXPECT_EQ(p.matches, p.total);
  // Identity holds even when no sentence reaches the maximum order.
  EXPECT_EQ(CorpusBleu(SentenceList({"a b"}), SentenceList({"a b"}), {}).score,
            100.0);
}

TEST(CorpusBleuTest, CorpusIsNotMeanOfSentences) {
  const SentenceList hyps({"the cat sat on the mat today", "a dog"});
  const SentenceList refs({"the cat sat on the mat today", "the dog barked"});
  const BleuScore corpus = CorpusBleu(hyps, refs, {});
  const double s0 = CorpusBleu(SentenceList({hyps[0]}),
                               SentenceList({refs[0]}), {}).score;
  const double s1 = CorpusBleu(SentenceList({hyps[1]}),
                               SentenceList({refs[1]}), {}).score;
  std::vector<std::vector<std::string>> th, tr;
  for (size_t i = 0; i < 2; ++i) {
    th.push_back(Tokenize13a(hyps[i]));
    tr.push_back(Tokenize13a(refs[i]));
  }
  EXPECT_NEAR(corpus.score, OracleCorpusBleu(th, tr), 1e-9);
  EXPECT_GT(std::abs(corpus.score - (s0 + s1) / 2), 1.0);
}

TEST(CorpusBleuTest, MatchesOracleOnRandomCorpora) {
  Rng rng(3);
  const std::vector<std::string> words = {"a", "b", "c", "d", "e", "f"};
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::string> h, r;
    std::vector<std::vector<std::string>> th, tr;
    for (int s = 0; s < 5; ++s) {
      std::vector<std::string> ht, rt;
      for (size_t k = 4 + rng.UniformIndex(6); k > 0; --k) {
        ht.push_back(words[rng.UniformIndex(words.size())]);
      }
      for (size_t k = 4 + rng.UniformIndex(6); k > 0; --k) {
        rt.push_back(words[rng.UniformIndex(words.size())]);
      }
      std::string hs, rs;
      for (const auto& w : ht) hs += w + " ";
      for (const auto& w : rt) rs += w + " ";
      h.push_back(hs);
      r.push_back(rs);
      th.push_back(ht);
      tr.push_back(rt);
    }
    EXPECT_NEAR(CorpusBleu(SentenceList(h), SentenceList(r), {}).score,
                OracleCorpusBleu(th, tr), 1e-9);
  }
}

TEST(CorpusBleuTest, CaseInsensitive) {
  const SentenceList refs({"The cat sat on the mat .", "Ein Haus am See ."});
  const SentenceList hyps({"the cat sat on a mat .", "ein Haus im See ."});
  const double base = CorpusBleu(hyps, refs, {}).score;
  EXPECT_GT(base, 0.0);
  for (auto fn : {UpperAll, LowerAll, TitleAll}) {
    std::vector<std::string> h;
    for (const auto& l : hyps.lines) h.push_back(fn(l));
    EXPECT_DOUBLE_EQ(CorpusBleu(SentenceList(h), refs, {}).score, base);
  }
  BleuConfig cased;
  cased.lowercase = false;
  std::vector<std::string> upper;
  for (const auto& l : hyps.lines) upper.push_back(UpperAll(l));
  EXPECT_LT(CorpusBleu(SentenceList(upper), refs, cased).score, base);
}

TEST(CorpusBleuTest, BrevityPenalty) {
  const SentenceList refs({"one two three four five six"});
  const BleuScore full = CorpusBleu(refs, refs, {});
  const BleuScore shorter =
      CorpusBleu(SentenceList({"one two three four five"}), refs, {});
  EXPECT_LT(shorter.brevity_penalty, full.brevity_penalty);
  EXPECT_DOUBLE_EQ(shorter.brevity_penalty, std::exp(1.0 - 6.0 / 5.0));
  const BleuScore empty = CorpusBleu(SentenceList({""}), refs, {});
  EXPECT_EQ(empty.score, 0.0);
  EXPECT_EQ(empty.brevity_penalty, 0.0);
}

TEST(CorpusBleuTest, EpsilonSmoothing) {
  BleuConfig config;
  config.smoothing = Smoothing::kEpsilon;
  const BleuScore s = CorpusBleu(SentenceList({"the cat sat on the mat"}),
                                 SentenceList({"the cat is on the mat"}),
                                 config);
  const double expected =
      100 * std::exp((std::log(5.0 / 6) + std::log(3.0 / 5) +
                      std::log(1.0 / 4) + std::log(0.1 / 3)) / 4);
  EXPECT_NEAR(s.score, expected, 1e-9);
}

TEST(CorpusBleuTest, Errors) {
  EXPECT_THROW(CorpusBleu(SentenceList({"a"}), SentenceList({"a", "b"}), {}),
               DataError);
  EXPECT_THROW(CorpusBleu(SentenceList(), SentenceList(), {}), DataError);
  BleuConfig bad;
  bad.max_order = 0;
  EXPECT_THROW(bad.Validate(), UsageError);
  EXPECT_THROW(ParseTokenizer("intl"), UsageError);
}

TEST(CorpusBleuTest, StatsAreParallelInvariant) {
  std::vector<std::string> h, r;
  for (int i = 0; i < 100; ++i) {
    h.push_back("sentence " + std::to_string(i) + " is here.");
    r.push_back("sentence " + std::to_string(i * 7 % 13) + " was here.");
  }
  const auto a = CorpusStats(SentenceList(h), SentenceList(r), {}, 1);
  const auto b = CorpusStats(SentenceList(h), SentenceList(r), {}, 4);
  ASSERT_EQ(a.size(), b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].matches, b[i].matches);
    EXPECT_EQ(a[i].totals, b[i].totals);
  }
}

}  // namespace
}  // namespace mtrobust
