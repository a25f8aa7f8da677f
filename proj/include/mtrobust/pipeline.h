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

#ifndef MTROBUST_PIPELINE_H_
#define MTROBUST_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "mtrobust/bleu.h"
#include "mtrobust/corpus_io.h"
#include "mtrobust/perturbation.h"
#include "mtrobust/robustness.h"
#include "mtrobust/translator.h"

namespace mtrobust {

// Everything one evaluation produced, before anything is written.
struct EvaluationRun {
  ParallelCorpus corpus;
  PerturbationLog log;
  RobustnessReport report;
};

// Perturbs `source`, translates both sides and scores them. A degrading stub
// gets a lexicon built from the clean source.
EvaluationRun EvaluateInMemory(const SentenceList& source,
                               const SentenceList& reference,
                               const PerturbationSpec& spec,
                               const TranslatorSpec& translator,
                               const RobustnessOptions& options);

struct EvaluateConfig {
  std::filesystem::path source_path;
  std::filesystem::path reference_path;
  // Precomputed system outputs; used instead of a translator when set.
  std::optional<std::filesystem::path> hyp_original_path;
  std::optional<std::filesystem::path> hyp_perturbed_path;
  std::optional<std::filesystem::path> perturbed_source_path;
  std::optional<TranslatorSpec> translator;
  PerturbationSpec perturbation;
  RobustnessOptions options;
  // Empty: nothing is written.
  std::filesystem::path out_dir;

  void Validate() const;
};

// Writes perturbed_source.txt, hyp_original.txt, hyp_perturbed.txt,
// perturbation_log.tsv, report.json, report.txt and manifest.json into
// out_dir. Files already written are removed if a later step fails.
RobustnessReport RunEvaluate(const EvaluateConfig& config);

nlohmann::json ScoreToJson(const BleuScore& score);
nlohmann::json ReportToJson(const RobustnessReport& report);
std::string ReportToText(const RobustnessReport& report);

struct SweepConfig {
  PerturbationKind kind = PerturbationKind::kMisspelling;
  LanguageMode language_mode = LanguageMode::kDefault;
  std::vector<double> grid;
  uint64_t seed = 0;
  int replicates = 1;
  std::string group = "default";
  TranslatorSpec translator;
  std::filesystem::path source_path;
  std::filesystem::path reference_path;
  RobustnessOptions options;
  std::filesystem::path out_dir;

  // Grid non-empty, values in [0, 1], strictly increasing; replicates >= 1.
  void Validate() const;
};

struct SweepRow {
  std::string group;
  double noise_level = 0.0;
  int replicate = 0;
  uint64_t seed = 0;
  RobustnessReport report;
};

// Seed for one (level, replicate) cell. Mixes the level's value rather than
// its position, so inserting grid points leaves existing cells unchanged.
uint64_t LevelSeed(uint64_t master_seed, double noise_level, int replicate);

std::vector<SweepRow> RunSweep(const SweepConfig& config,
                               const SentenceList& source,
                               const SentenceList& reference);
// Loads the corpus and, with out_dir set, writes sweep.tsv,
// sweep_series.json, sweep_reports.json and manifest.json.
std::vector<SweepRow> RunSweep(const SweepConfig& config);

// Columns: group, noise_level, replicate, tq_orig, tq_pert, robust, consis.
std::string SweepToTsv(const std::vector<SweepRow>& rows);
nlohmann::json SweepSeriesJson(const std::vector<SweepRow>& rows);

struct CorrelationRow {
  std::string group;
  double robust = 0.0;
  double consis = 0.0;
  std::optional<double> noise_level;
};

struct GroupCorrelation {
  std::string group;
  size_t n = 0;
  std::optional<double> r;  // nullopt when undefined
  std::string error;
};

// Header-driven TSV: "robust" and "consis" columns are required, "group"
// (default "all") and "noise_level" are optional. Rows with NA values are
// skipped. Throws DataError on malformed input.
std::vector<CorrelationRow> ParseCorrelationTsv(std::string_view text);

// Pearson r(robust, consis) per group, in order of first appearance. A
// group with fewer than two rows or zero variance is flagged, not fatal.
std::vector<GroupCorrelation> RunCorrelate(
    const std::vector<CorrelationRow>& rows);
nlohmann::json CorrelationToJson(const std::vector<GroupCorrelation>& groups,
                                 const std::vector<CorrelationRow>& rows);

// 64-bit FNV-1a, used to fingerprint artifacts in manifests.
uint64_t Fingerprint(std::string_view data);

}  // namespace mtrobust

#endif  // MTROBUST_PIPELINE_H_
