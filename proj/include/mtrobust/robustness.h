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

#ifndef MTROBUST_ROBUSTNESS_H_
#define MTROBUST_ROBUSTNESS_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mtrobust/bleu.h"
#include "mtrobust/corpus_io.h"
#include "mtrobust/perturbation.h"

namespace mtrobust {

// Relative translation quality under perturbation,
// tq_perturbed / tq_original. Values below 1 mean degradation. Throws
// DataError when tq_original is 0 (the ratio is undefined).
double RobustScore(double tq_perturbed, double tq_original);

// 2ab / (a + b), and 0 when a + b = 0.
double HarmonicMean(double a, double b);

// Reference-free consistency: harmonic mean of BLEU(perturbed | original)
// and BLEU(original | perturbed). Symmetric in its arguments.
double ConsisScore(const SentenceList& hyp_original,
                   const SentenceList& hyp_perturbed, const BleuConfig& config);

// Sample Pearson correlation. Throws DataError for fewer than two points,
// mismatched lengths, or a zero-variance input.
double Pearson(std::span<const double> xs, std::span<const double> ys);

struct BootstrapEstimate {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation, divisor B - 1
  int resamples = 0;
  int redraws = 0;   // resamples on which the metric was undefined
};

// A metric evaluated on a multiset of sentence indices. nullopt marks a
// resample on which the metric is undefined; it is redrawn.
using ResampleMetric =
    std::function<std::optional<double>(std::span<const size_t>)>;

// Paired bootstrap: every resample is one index multiset of size
// `corpus_size`, drawn from Rng(MixSeed(seed, b)), so the result depends
// only on the seed and not on `jobs`. Throws UsageError if resamples < 2 and
// DataError after 10 * resamples redraws in total.
BootstrapEstimate Bootstrap(size_t corpus_size, const ResampleMetric& metric,
                            int resamples, uint64_t seed, int jobs = 1);

enum class Metric { kTqOriginal, kTqPerturbed, kRobust, kConsis };
std::string_view MetricName(Metric metric);

// Per-sentence BLEU statistics for the three comparisons the metrics need,
// so that any resample is scored by summing statistics.
class PairedStatistics {
 public:
  // Requires hyp_original and hyp_perturbed to be set on `corpus`.
  PairedStatistics(const ParallelCorpus& corpus, const BleuConfig& tq_config,
                   const BleuConfig& consis_config, int jobs = 1);

  size_t size() const { return original_vs_ref_.size(); }

  // Metric value over `indices`; nullopt when undefined (ROBUST with
  // TQ(original) = 0). ROBUST is returned in percent.
  std::optional<double> Evaluate(Metric metric,
                                 std::span<const size_t> indices) const;
  std::optional<double> EvaluateAll(Metric metric) const;

  BleuScore Score(const std::vector<BleuStats>& stats,
                  std::span<const size_t> indices,
                  const BleuConfig& config) const;

  const std::vector<BleuStats>& original_vs_ref() const {
    return original_vs_ref_;
  }
  const std::vector<BleuStats>& perturbed_vs_ref() const {
    return perturbed_vs_ref_;
  }

 private:
  BleuConfig tq_config_;
  BleuConfig consis_config_;
  std::vector<BleuStats> original_vs_ref_;
  std::vector<BleuStats> perturbed_vs_ref_;
  std::vector<BleuStats> perturbed_vs_original_;
  std::vector<BleuStats> original_vs_perturbed_;
};

// Bootstrap of one metric over a corpus with both hypothesis sets.
BootstrapEstimate BootstrapMetric(const ParallelCorpus& corpus, Metric metric,
                                  int resamples, uint64_t seed,
                                  const BleuConfig& tq_config,
                                  const BleuConfig& consis_config,
                                  int jobs = 1);

struct BootstrapSummary {
  int resamples = 0;
  uint64_t seed = 0;
  std::optional<BootstrapEstimate> robust;  // nullopt when undefined
  BootstrapEstimate consis;
  BootstrapEstimate tq_original;
  BootstrapEstimate tq_perturbed;
};

struct RobustnessReport {
  BleuScore tq_original;
  BleuScore tq_perturbed;
  std::optional<double> robust;  // percent; nullopt when TQ(original) = 0
  double consis = 0.0;           // [0, 100]
  std::optional<BootstrapSummary> bootstrap;
  PerturbationSpec spec;
};

struct RobustnessOptions {
  BleuConfig tq_config;
  BleuConfig consis_config;
  int bootstrap_resamples = 0;  // 0 disables the bootstrap
  uint64_t bootstrap_seed = 0;
  int jobs = 1;
};

// Point estimates (and optional bootstrap) for a corpus carrying both
// hypothesis sets and a reference.
RobustnessReport ComputeRobustness(const ParallelCorpus& corpus,
                                   const PerturbationSpec& spec,
                                   const RobustnessOptions& options);

}  // namespace mtrobust

#endif  // MTROBUST_ROBUSTNESS_H_
