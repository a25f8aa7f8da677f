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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mtrobust/error.h"
#include "mtrobust/parallel.h"
#include "mtrobust/random.h"

namespace mtrobust {
namespace {

// Mean and sample std with the first value as shift, so that a constant
// series yields exactly (c, 0).
BootstrapEstimate Summarize(const std::vector<double>& values) {
  BootstrapEstimate est;
  est.resamples = static_cast<int>(values.size());
  const double shift = values.front();
  double sum = 0.0;
  for (double v : values) sum += v - shift;
  const double n = static_cast<double>(values.size());
  est.mean = shift + sum / n;
  double sq = 0.0;
  for (double v : values) sq += (v - est.mean) * (v - est.mean);
  est.std = std::sqrt(sq / (n - 1.0));
  return est;
}

BleuStats SumStats(const std::vector<BleuStats>& stats,
                   std::span<const size_t> indices, int max_order) {
  BleuStats total(max_order);
  for (size_t i : indices) total += stats[i];
  return total;
}

}  // namespace

double RobustScore(double tq_perturbed, double tq_original) {
  if (!(tq_original > 0.0)) {
    throw DataError("ROBUST is undefined when TQ(original) is 0");
  }
  if (tq_perturbed < 0.0) throw DataError("TQ(perturbed) must be >= 0");
  return tq_perturbed / tq_original;
}

double HarmonicMean(double a, double b) {
  const double sum = a + b;
  if (sum == 0.0) return 0.0;
  return 2.0 * a * b / sum;
}

double ConsisScore(const SentenceList& hyp_original,
                   const SentenceList& hyp_perturbed,
                   const BleuConfig& config) {
  const double a = CorpusBleu(hyp_perturbed, hyp_original, config).score;
  const double b = CorpusBleu(hyp_original, hyp_perturbed, config).score;
  return HarmonicMean(a, b);
}

double Pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw DataError("pearson: length mismatch (" + std::to_string(xs.size()) +
                    " vs " + std::to_string(ys.size()) + ")");
  }
  if (xs.size() < 2) throw DataError("pearson: need at least two points");
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw DataError("pearson: constant sequence (zero variance)");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

BootstrapEstimate Bootstrap(size_t corpus_size, const ResampleMetric& metric,
                            int resamples, uint64_t seed, int jobs) {
  if (resamples < 2) throw UsageError("bootstrap needs at least 2 resamples");
  if (corpus_size == 0) throw DataError("bootstrap over an empty corpus");
  const size_t b_count = static_cast<size_t>(resamples);
  const int max_redraws = 10 * resamples;
  std::vector<double> values(b_count, 0.0);
  std::vector<int> redraws(b_count, 0);
  std::vector<char> failed(b_count, 0);

  ParallelFor(b_count, jobs, [&](size_t b) {
    Rng rng(MixSeed(seed, b));
    std::vector<size_t> indices(corpus_size);
    for (;;) {
      for (size_t& idx : indices) idx = rng.UniformIndex(corpus_size);
      if (const auto value = metric(indices)) {
        values[b] = *value;
        return;
      }
      if (++redraws[b] > max_redraws) {
        failed[b] = 1;
        return;
      }
    }
  });

  const int total_redraws = std::accumulate(redraws.begin(), redraws.end(), 0);
  if (total_redraws > max_redraws ||
      std::any_of(failed.begin(), failed.end(), [](char f) { return f; })) {
    throw DataError("bootstrap: metric undefined on too many resamples (" +
                    std::to_string(total_redraws) + " redraws)");
  }
  BootstrapEstimate est = Summarize(values);
  est.redraws = total_redraws;
  return est;
}

std::string_view MetricName(Metric metric) {
  switch (metric) {
    case Metric::kTqOriginal: return "tq_original";
    case Metric::kTqPerturbed: return "tq_perturbed";
    case Metric::kRobust: return "robust";
    case Metric::kConsis: return "consis";
  }
  return "unknown";
}

PairedStatistics::PairedStatistics(const ParallelCorpus& corpus,
                                   const BleuConfig& tq_config,
                                   const BleuConfig& consis_config, int jobs)
    : tq_config_(tq_config), consis_config_(consis_config) {
  corpus.Validate();
  if (!corpus.hyp_original || !corpus.hyp_perturbed) {
    throw DataError("robustness metrics need both hypothesis sets");
  }
  const auto& orig = *corpus.hyp_original;
  const auto& pert = *corpus.hyp_perturbed;
  original_vs_ref_ = CorpusStats(orig, corpus.reference, tq_config, jobs);
  perturbed_vs_ref_ = CorpusStats(pert, corpus.reference, tq_config, jobs);
  perturbed_vs_original_ = CorpusStats(pert, orig, consis_config, jobs);
  original_vs_perturbed_ = CorpusStats(orig, pert, consis_config, jobs);
}

BleuScore PairedStatistics::Score(const std::vector<BleuStats>& stats,
                                  std::span<const size_t> indices,
                                  const BleuConfig& config) const {
  return ScoreFromStats(SumStats(stats, indices, config.max_order), config);
}

std::optional<double> PairedStatistics::Evaluate(
    Metric metric, std::span<const size_t> indices) const {
  switch (metric) {
    case Metric::kTqOriginal:
      return Score(original_vs_ref_, indices, tq_config_).score;
    case Metric::kTqPerturbed:
      return Score(perturbed_vs_ref_, indices, tq_config_).score;
    case Metric::kRobust: {
      const double orig = Score(original_vs_ref_, indices, tq_config_).score;
      if (!(orig > 0.0)) return std::nullopt;
      const double pert = Score(perturbed_vs_ref_, indices, tq_config_).score;
      return 100.0 * RobustScore(pert, orig);
    }
    case Metric::kConsis: {
      const double a =
          Score(perturbed_vs_original_, indices, consis_config_).score;
      const double b =
          Score(original_vs_perturbed_, indices, consis_config_).score;
      return HarmonicMean(a, b);
    }
  }
  return std::nullopt;
}

std::optional<double> PairedStatistics::EvaluateAll(Metric metric) const {
  std::vector<size_t> all(size());
  std::iota(all.begin(), all.end(), size_t{0});
  return Evaluate(metric, all);
}

BootstrapEstimate BootstrapMetric(const ParallelCorpus& corpus, Metric metric,
                                  int resamples, uint64_t seed,
                                  const BleuConfig& tq_config,
                                  const BleuConfig& consis_config, int jobs) {
  const PairedStatistics stats(corpus, tq_config, consis_config, jobs);
  return Bootstrap(
      stats.size(),
      [&](std::span<const size_t> idx) { return stats.Evaluate(metric, idx); },
      resamples, seed, jobs);
}

RobustnessReport ComputeRobustness(const ParallelCorpus& corpus,
                                   const PerturbationSpec& spec,
                                   const RobustnessOptions& options) {
  const PairedStatistics stats(corpus, options.tq_config,
                               options.consis_config, options.jobs);
  std::vector<size_t> all(stats.size());
  std::iota(all.begin(), all.end(), size_t{0});

  RobustnessReport report;
  report.spec = spec;
  report.tq_original =
      stats.Score(stats.original_vs_ref(), all, options.tq_config);
  report.tq_perturbed =
      stats.Score(stats.perturbed_vs_ref(), all, options.tq_config);
  if (report.tq_original.score > 0.0) {
    report.robust = 100.0 * RobustScore(report.tq_perturbed.score,
                                        report.tq_original.score);
  }
  report.consis = *stats.Evaluate(Metric::kConsis, all);

  if (options.bootstrap_resamples > 0) {
    const auto run = [&](Metric metric) {
      return Bootstrap(
          stats.size(),
          [&](std::span<const size_t> idx) {
            return stats.Evaluate(metric, idx);
          },
          options.bootstrap_resamples, options.bootstrap_seed, options.jobs);
    };
    BootstrapSummary summary;
    summary.resamples = options.bootstrap_resamples;
    summary.seed = options.bootstrap_seed;
    summary.tq_original = run(Metric::kTqOriginal);
    summary.tq_perturbed = run(Metric::kTqPerturbed);
    summary.consis = run(Metric::kConsis);
    if (report.robust) summary.robust = run(Metric::kRobust);
    report.bootstrap = summary;
  }
  return report;
}

}  // namespace mtrobust
