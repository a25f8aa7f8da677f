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

#include "mtrobust/robustness.h"

#include <cmath>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "mtrobust/error.h"

namespace mtrobust {
namespace {

TEST(RobustScoreTest, Ratios) {
  EXPECT_DOUBLE_EQ(RobustScore(38, 40), 0.95);
  EXPECT_DOUBLE_EQ(1 - (40.0 - 38.0) / 40.0, 0.95);
  EXPECT_EQ(RobustScore(37, 37), 1.0);
  EXPECT_NEAR(100 * RobustScore(29.38, 39.70), 74.01, 0.005);
  EXPECT_THROW(RobustScore(10, 0), DataError);
}

TEST(RobustScoreTest, NormalizedDifferenceIdentity) {
  for (double orig : {0.5, 12.3, 39.7, 99.9}) {
    for (double pert : {0.0, 0.1, 11.0, 39.7, 100.0}) {
      const double lhs = (orig - pert) / orig;
      const double rhs = 1 - RobustScore(pert, orig);
      EXPECT_LE(std::abs(lhs - rhs), 1e-12 * std::max(1.0, std::abs(lhs)));
    }
  }
}

TEST(HarmonicMeanTest, Values) {
  EXPECT_NEAR(HarmonicMean(60, 80), 68.5714285714, 1e-9);
  EXPECT_EQ(HarmonicMean(0, 0), 0.0);
  EXPECT_EQ(HarmonicMean(0, 50), 0.0);
  EXPECT_EQ(HarmonicMean(42, 42), 42.0);
  EXPECT_LE(HarmonicMean(30, 90), 30.0 * 2);
  EXPECT_LE(HarmonicMean(30, 90), 90.0);
}

TEST(ConsisTest, DefinitionAndSymmetry) {
  const SentenceList a({"the cat sat on the mat .", "a quick brown fox ."});
  const SentenceList b({"the cat sat on a mat .", "a quick brown fox jumps ."});
  const BleuConfig config;
  const double ab = CorpusBleu(b, a, config).score;
  const double ba = CorpusBleu(a, b, config).score;
  EXPECT_NE(ab, ba);
  const double c = ConsisScore(a, b, config);
  EXPECT_DOUBLE_EQ(c, 2 * ab * ba / (ab + ba));
  EXPECT_EQ(c, ConsisScore(b, a, config));
  EXPECT_LE(c, std::max(ab, ba));
  EXPECT_GE(c, std::min(ab, ba));
  EXPECT_EQ(ConsisScore(a, a, config), 100.0);
  EXPECT_EQ(ConsisScore(SentenceList({"x y z w"}), SentenceList({"p q r s"}),
                        config),
            0.0);
  EXPECT_THROW(ConsisScore(a, SentenceList({"x"}), config), DataError);
}

TEST(PearsonTest, Values) {
  const std::vector<double> x = {1, 2, 3};
  EXPECT_NEAR(Pearson(x, std::vector<double>{2, 4, 6}), 1.0, 1e-15);
  EXPECT_NEAR(Pearson(x, std::vector<double>{3, 2, 1}), -1.0, 1e-15);
  // Direct formula: sxy = 4.7, sxx = 5, syy = 4.5.
  EXPECT_NEAR(Pearson(std::vector<double>{1, 2, 3, 4},
                      std::vector<double>{1.1, 1.9, 3.2, 3.8}),
              4.7 / std::sqrt(5.0 * 4.5), 1e-12);
  EXPECT_THROW(Pearson(x, std::vector<double>{1, 1, 1}), DataError);
  EXPECT_THROW(Pearson(std::vector<double>{1}, std::vector<double>{1}),
               DataError);
  EXPECT_THROW(Pearson(x, std::vector<double>{1, 2}), DataError);
}

TEST(PearsonTest, AffineInvariance) {
  const std::vector<double> x = {0.3, 1.7, 2.2, 5.0, 4.1};
  const std::vector<double> y = {1.0, 2.5, 2.0, 6.3, 3.9};
  std::vector<double> z;
  for (double v : x) z.push_back(3.5 * v - 11.0);
  EXPECT_NEAR(Pearson(z, y), Pearson(x, y), 1e-9);
}

TEST(BootstrapTest, ConstantMetricHasZeroStd) {
  const BootstrapEstimate e = Bootstrap(
      50, [](std::span<const size_t>) { return std::optional<double>(37.25); },
      200, 4);
  EXPECT_EQ(e.mean, 37.25);
  EXPECT_EQ(e.std, 0.0);
  EXPECT_EQ(e.resamples, 200);
}

TEST(BootstrapTest, DeterministicAcrossRunsAndJobs) {
  std::vector<double> values;
  for (int i = 0; i < 80; ++i) values.push_back(std::sin(i) * 10);
  const ResampleMetric metric = [&](std::span<const size_t> idx) {
    double s = 0;
    for (size_t i : idx) s += values[i];
    return std::optional<double>(s / static_cast<double>(idx.size()));
  };
  const BootstrapEstimate a = Bootstrap(values.size(), metric, 300, 17, 1);
  const BootstrapEstimate b = Bootstrap(values.size(), metric, 300, 17, 1);
  const BootstrapEstimate c = Bootstrap(values.size(), metric, 300, 17, 7);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.std, b.std);
  EXPECT_EQ(a.mean, c.mean);
  EXPECT_EQ(a.std, c.std);
  const BootstrapEstimate d = Bootstrap(values.size(), metric, 300, 18, 1);
  EXPECT_NE(a.mean, d.mean);
  EXPECT_GT(a.std, 0.0);
}

TEST(BootstrapTest, RedrawsUndefinedAndFailsEventually) {
  int calls = 0;
  std::mutex mu;
  const BootstrapEstimate e = Bootstrap(
      10,
      [&](std::span<const size_t>) -> std::optional<double> {
        std::lock_guard<std::mutex> lock(mu);
        return ++calls % 2 == 0 ? std::optional<double>(1.0) : std::nullopt;
      },
      20, 1);
  EXPECT_EQ(e.resamples, 20);
  EXPECT_EQ(e.redraws, 20);
  EXPECT_THROW(Bootstrap(
                   10,
                   [](std::span<const size_t>) -> std::optional<double> {
                     return std::nullopt;
                   },
                   20, 1),
               DataError);
  EXPECT_THROW(
      Bootstrap(10, [](std::span<const size_t>) { return std::optional(1.0); },
                1, 1),
      UsageError);
}

ParallelCorpus MakeCorpus(size_t n) {
  std::vector<std::string> src, ref, h1, h2;
  const std::vector<std::string> words = {"alpha", "beta", "gamma", "delta",
                                          "eps",   "zeta", "eta",   "theta"};
  for (size_t i = 0; i < n; ++i) {
    std::string r, a, b;
    for (size_t k = 0; k < 6 + i % 5; ++k) {
      const std::string& w = words[(i * 3 + k * k) % words.size()];
      r += w + " ";
      a += (k % 4 == 1 ? words[(i + k) % words.size()] : w) + " ";
      b += (k % 3 == 2 ? words[(i + 2 * k) % words.size()] : w) + " ";
    }
    src.push_back(r);
    ref.push_back(r);
    h1.push_back(a);
    h2.push_back(b);
  }
  ParallelCorpus corpus = Align(SentenceList(src), SentenceList(ref));
  corpus.SetHypotheses(SentenceList(h1), SentenceList(h2));
  return corpus;
}

TEST(PairedStatisticsTest, FullCorpusMatchesDirectScores) {
  const ParallelCorpus corpus = MakeCorpus(40);
  const BleuConfig config;
  const PairedStatistics stats(corpus, config, config);
  const double tq_o =
      CorpusBleu(*corpus.hyp_original, corpus.reference, config).score;
  const double tq_p =
      CorpusBleu(*corpus.hyp_perturbed, corpus.reference, config).score;
  EXPECT_DOUBLE_EQ(*stats.EvaluateAll(Metric::kTqOriginal), tq_o);
  EXPECT_DOUBLE_EQ(*stats.EvaluateAll(Metric::kTqPerturbed), tq_p);
  EXPECT_DOUBLE_EQ(*stats.EvaluateAll(Metric::kRobust), 100 * tq_p / tq_o);
  EXPECT_DOUBLE_EQ(
      *stats.EvaluateAll(Metric::kConsis),
      ConsisScore(*corpus.hyp_original, *corpus.hyp_perturbed, config));
}

TEST(PairedStatisticsTest, ResampledRobustUsesOneIndexSet) {
  const ParallelCorpus corpus = MakeCorpus(30);
  const BleuConfig config;
  const PairedStatistics stats(corpus, config, config);
  std::mutex mu;
  std::vector<std::vector<size_t>> seen;
  const auto est = Bootstrap(
      corpus.size(),
      [&](std::span<const size_t> idx) {
        {
          std::lock_guard<std::mutex> lock(mu);
          seen.emplace_back(idx.begin(), idx.end());
        }
        return stats.Evaluate(Metric::kRobust, idx);
      },
      50, 9, 3);
  ASSERT_EQ(seen.size(), 50u);
  // Recompute each resample's numerator and denominator from its own
  // index multiset.
  for (const auto& idx : seen) {
    std::vector<std::string> o, p, r;
    for (size_t i : idx) {
      o.push_back((*corpus.hyp_original)[i]);
      p.push_back((*corpus.hyp_perturbed)[i]);
      r.push_back(corpus.reference[i]);
    }
    const double num = CorpusBleu(SentenceList(p), SentenceList(r), config)
                           .score;
    const double den = CorpusBleu(SentenceList(o), SentenceList(r), config)
                           .score;
    EXPECT_NEAR(*stats.Evaluate(Metric::kRobust, idx), 100 * num / den, 1e-9);
  }
  EXPECT_GT(est.std, 0.0);
}

TEST(BootstrapMetricTest, MeanNearPointEstimate) {
  const ParallelCorpus corpus = MakeCorpus(100);
  const BleuConfig config;
  const PairedStatistics stats(corpus, config, config);
  for (Metric m : {Metric::kTqOriginal, Metric::kRobust, Metric::kConsis}) {
    const BootstrapEstimate e =
        BootstrapMetric(corpus, m, 1000, 5, config, config, 4);
    const double point = *stats.EvaluateAll(m);
    EXPECT_LE(std::abs(e.mean - point), 3 * e.std / std::sqrt(1000.0))
        << MetricName(m) << " mean " << e.mean << " point " << point
        << " std " << e.std;
  }
}

TEST(ComputeRobustnessTest, Report) {
  const ParallelCorpus corpus = MakeCorpus(20);
  RobustnessOptions options;
  options.bootstrap_resamples = 100;
  options.bootstrap_seed = 3;
  const RobustnessReport r = ComputeRobustness(corpus, {}, options);
  ASSERT_TRUE(r.robust);
  EXPECT_DOUBLE_EQ(*r.robust,
                   100 * r.tq_perturbed.score / r.tq_original.score);
  ASSERT_TRUE(r.bootstrap);
  EXPECT_EQ(r.bootstrap->resamples, 100);
  ASSERT_TRUE(r.bootstrap->robust);

  ParallelCorpus zero = Align(SentenceList({"a b c d"}), SentenceList({"a b c d"}));
  zero.SetHypotheses(SentenceList({"w x y z"}), SentenceList({"a b c d"}));
  const RobustnessReport u = ComputeRobustness(zero, {}, {});
  EXPECT_EQ(u.tq_original.score, 0.0);
  EXPECT_FALSE(u.robust);
}

TEST(ComputeRobustnessTest, IdenticalHypothesesGiveOne) {
  ParallelCorpus corpus = MakeCorpus(10);
  corpus.SetHypotheses(*corpus.hyp_original, *corpus.hyp_original);
  const RobustnessReport r = ComputeRobustness(corpus, {}, {});
  EXPECT_EQ(*r.robust, 100.0);
  EXPECT_EQ(r.consis, 100.0);
}

}  // namespace
}  // namespace mtrobust
