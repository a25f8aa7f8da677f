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

#include "mtrobust/pipeline.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "mtrobust/error.h"
#include "mtrobust/parallel.h"
#include "mtrobust/utf8.h"

namespace mtrobust {
namespace {

using nlohmann::json;

std::string FormatNumber(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", value);
  return buf;
}

std::string Hex64(uint64_t value) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(value));
  return buf;
}

std::string Join(const SentenceList& list) {
  std::string out;
  for (const auto& line : list.lines) {
    out += line;
    out += '\n';
  }
  return out;
}

// Collects output files and writes them together. If any write fails, the
// files written so far are removed again.
class ArtifactWriter {
 public:
  explicit ArtifactWriter(std::filesystem::path dir) : dir_(std::move(dir)) {}

  void Add(std::string name, std::string content) {
    files_.emplace_back(std::move(name), std::move(content));
  }

  json Manifest() const {
    json artifacts = json::array();
    for (const auto& [name, content] : files_) {
      artifacts.push_back({{"name", name},
                           {"bytes", content.size()},
                           {"fnv1a64", Hex64(Fingerprint(content))}});
    }
    return artifacts;
  }

  void Commit() {
    std::vector<std::filesystem::path> written;
    try {
      std::filesystem::create_directories(dir_);
      for (const auto& [name, content] : files_) {
        const auto path = dir_ / name;
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write " + path.string());
        written.push_back(path);
        out << content;
        if (!out.flush()) throw DataError("write failed: " + path.string());
      }
    } catch (...) {
      std::error_code ignored;
      for (const auto& p : written) std::filesystem::remove(p, ignored);
      throw;
    }
  }

 private:
  std::filesystem::path dir_;
  std::vector<std::pair<std::string, std::string>> files_;
};

json SpecToJson(const PerturbationSpec& spec) {
  return {{"kind", std::string(KindName(spec.kind))},
          {"probability", spec.probability},
          {"language_mode", spec.language_mode == LanguageMode::kJapanese
                                ? "ja"
                                : "default"},
          {"master_seed", spec.master_seed}};
}

json BleuConfigToJson(const BleuConfig& config) {
  return {{"max_order", config.max_order},
          {"lowercase", config.lowercase},
          {"tokenizer",
           config.tokenizer == BleuTokenizer::k13a ? "13a" : "char"},
          {"smoothing",
           config.smoothing == Smoothing::kNone ? "none" : "epsilon"},
          {"epsilon", config.epsilon}};
}

json EstimateToJson(const BootstrapEstimate& est) {
  return {{"mean", est.mean},
          {"std", est.std},
          {"resamples", est.resamples},
          {"redraws", est.redraws}};
}

json OptionsToJson(const RobustnessOptions& options) {
  return {{"tq_bleu", BleuConfigToJson(options.tq_config)},
          {"consis_bleu", BleuConfigToJson(options.consis_config)},
          {"bootstrap_resamples", options.bootstrap_resamples},
          {"bootstrap_seed", options.bootstrap_seed}};
}

}  // namespace

uint64_t Fingerprint(std::string_view data) {
  uint64_t hash = 0xCBF29CE484222325ULL;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 0x100000001B3ULL;
  }
  return hash;
}

EvaluationRun EvaluateInMemory(const SentenceList& source,
                               const SentenceList& reference,
                               const PerturbationSpec& spec,
                               const TranslatorSpec& translator,
                               const RobustnessOptions& options) {
  spec.Validate();
  translator.Validate();
  if (translator.kind == TranslatorKind::kFile) {
    throw UsageError(
        "a file translator covers one side only; pass precomputed outputs "
        "as --hyp-orig and --hyp-pert");
  }
  EvaluationRun run;
  run.corpus = Align(source, reference);
  PerturbationResult perturbed = Perturb(source, spec, options.jobs);
  run.log = std::move(perturbed.log);
  run.corpus.SetPerturbedSource(perturbed.sentences);

  std::optional<StubLexicon> lexicon;
  if (translator.kind == TranslatorKind::kStub &&
      translator.stub->name == StubName::kDegrading) {
    lexicon.emplace(source);
  }
  const StubLexicon* lex = lexicon ? &*lexicon : nullptr;
  SentenceList hyp_original = Translate(source, translator, lex, options.jobs);
  SentenceList hyp_perturbed =
      Translate(perturbed.sentences, translator, lex, options.jobs);
  run.corpus.SetHypotheses(std::move(hyp_original), std::move(hyp_perturbed));
  run.report = ComputeRobustness(run.corpus, spec, options);
  return run;
}

void EvaluateConfig::Validate() const {
  perturbation.Validate();
  options.tq_config.Validate();
  options.consis_config.Validate();
  if (options.bootstrap_resamples == 1 || options.bootstrap_resamples < 0) {
    throw UsageError("--bootstrap must be 0 (off) or >= 2");
  }
  const bool precomputed = hyp_original_path || hyp_perturbed_path;
  if (precomputed && !(hyp_original_path && hyp_perturbed_path)) {
    throw UsageError("--hyp-orig and --hyp-pert must be given together");
  }
  if (precomputed == translator.has_value()) {
    throw UsageError(
        "give either --hyp-orig/--hyp-pert or --translator, not both");
  }
  if (translator) translator->Validate();
}

RobustnessReport RunEvaluate(const EvaluateConfig& config) {
  config.Validate();
  const SentenceList source = LoadLines(config.source_path);
  const SentenceList reference = LoadLines(config.reference_path);

  EvaluationRun run;
  if (config.translator) {
    run = EvaluateInMemory(source, reference, config.perturbation,
                           *config.translator, config.options);
  } else {
    run.corpus = Align(source, reference);
    if (config.perturbed_source_path) {
      run.corpus.SetPerturbedSource(LoadLines(*config.perturbed_source_path));
    }
    run.corpus.SetHypotheses(LoadLines(*config.hyp_original_path),
                             LoadLines(*config.hyp_perturbed_path));
    run.report =
        ComputeRobustness(run.corpus, config.perturbation, config.options);
  }

  if (!config.out_dir.empty()) {
    ArtifactWriter writer(config.out_dir);
    if (run.corpus.perturbed_source) {
      writer.Add("perturbed_source.txt", Join(*run.corpus.perturbed_source));
    }
    writer.Add("hyp_original.txt", Join(*run.corpus.hyp_original));
    writer.Add("hyp_perturbed.txt", Join(*run.corpus.hyp_perturbed));
    if (config.translator) {
      std::ostringstream log;
      log << "sentence_index\tunit_index\tstrategy\toriginal\tperturbed\n";
      for (const auto& r : run.log.records) {
        log << r.sentence_index << '\t' << r.unit_index << '\t'
            << StrategyName(r.strategy) << '\t' << r.original << '\t'
            << r.perturbed << '\n';
      }
      writer.Add("perturbation_log.tsv", log.str());
    }
    writer.Add("report.json", ReportToJson(run.report).dump(2) + "\n");
    writer.Add("report.txt", ReportToText(run.report));
    json manifest = {
        {"tool", "mtrobust"},
        {"version", MTROBUST_VERSION},
        {"command", "evaluate"},
        {"inputs",
         {{"source", config.source_path.string()},
          {"source_fnv1a64", Hex64(Fingerprint(Join(source)))},
          {"reference", config.reference_path.string()},
          {"reference_fnv1a64", Hex64(Fingerprint(Join(reference)))}}},
        {"perturbation", SpecToJson(config.perturbation)},
        {"translator", config.translator ? json(config.translator->ToString())
                                         : json(nullptr)},
        {"options", OptionsToJson(config.options)},
        {"artifacts", writer.Manifest()}};
    writer.Add("manifest.json", manifest.dump(2) + "\n");
    writer.Commit();
  }
  return run.report;
}

json ScoreToJson(const BleuScore& score) {
  json precisions = json::array();
  for (const auto& p : score.precisions) {
    precisions.push_back({{"matches", p.matches}, {"total", p.total}});
  }
  return {{"score", score.score},
          {"precisions", precisions},
          {"bp", score.brevity_penalty},
          {"hyp_len", score.hyp_length},
          {"ref_len", score.ref_length}};
}

json ReportToJson(const RobustnessReport& report) {
  json out = {{"tq_original", ScoreToJson(report.tq_original)},
              {"tq_perturbed", ScoreToJson(report.tq_perturbed)},
              {"robust", report.robust ? json(*report.robust) : json(nullptr)},
              {"consis", report.consis},
              {"perturbation", SpecToJson(report.spec)},
              {"bootstrap", nullptr}};
  if (report.bootstrap) {
    const auto& b = *report.bootstrap;
    out["bootstrap"] = {
        {"resamples", b.resamples},
        {"seed", b.seed},
        {"robust", b.robust ? EstimateToJson(*b.robust) : json(nullptr)},
        {"consis", EstimateToJson(b.consis)},
        {"tq_original", EstimateToJson(b.tq_original)},
        {"tq_perturbed", EstimateToJson(b.tq_perturbed)}};
  }
  return out;
}

std::string ReportToText(const RobustnessReport& report) {
  struct Line {
    const char* name;
    std::optional<double> value;
    const BootstrapEstimate* est;
  };
  const auto* b = report.bootstrap ? &*report.bootstrap : nullptr;
  const Line lines[] = {
      {"TQ(original)", report.tq_original.score, b ? &b->tq_original : nullptr},
      {"TQ(perturbed)", report.tq_perturbed.score,
       b ? &b->tq_perturbed : nullptr},
      {"ROBUST (%)", report.robust,
       b && b->robust ? &*b->robust : nullptr},
      {"CONSIS", report.consis, b ? &b->consis : nullptr},
  };
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%-14s %10s %12s %10s\n", "metric", "value",
                "boot_mean", "boot_std");
  out += buf;
  for (const auto& line : lines) {
    const std::string value =
        line.value ? FormatNumber(std::round(*line.value * 1e4) / 1e4) : "NA";
    std::string mean = "-", std = "-";
    if (line.est) {
      mean = FormatNumber(std::round(line.est->mean * 1e4) / 1e4);
      std = FormatNumber(std::round(line.est->std * 1e4) / 1e4);
    }
    std::snprintf(buf, sizeof(buf), "%-14s %10s %12s %10s\n", line.name,
                  value.c_str(), mean.c_str(), std.c_str());
    out += buf;
  }
  std::snprintf(buf, sizeof(buf), "perturbation: %s p=%s seed=%llu\n",
                std::string(KindName(report.spec.kind)).c_str(),
                FormatNumber(report.spec.probability).c_str(),
                static_cast<unsigned long long>(report.spec.master_seed));
  out += buf;
  return out;
}

void SweepConfig::Validate() const {
  if (grid.empty()) throw UsageError("sweep grid is empty");
  for (size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0 && grid[i] <= 1.0)) {
      throw UsageError("sweep grid values must be in [0, 1]");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw UsageError("sweep grid must be strictly increasing");
    }
  }
  if (replicates < 1) throw UsageError("replicates must be >= 1");
  if (language_mode == LanguageMode::kJapanese &&
      kind != PerturbationKind::kMisspelling) {
    throw UsageError("japanese mode only supports misspelling");
  }
  translator.Validate();
}

uint64_t LevelSeed(uint64_t master_seed, double noise_level, int replicate) {
  return MixSeed(MixSeed(master_seed, std::bit_cast<uint64_t>(noise_level)),
                 static_cast<uint64_t>(replicate));
}

std::vector<SweepRow> RunSweep(const SweepConfig& config,
                               const SentenceList& source,
                               const SentenceList& reference) {
  config.Validate();
  const size_t reps = static_cast<size_t>(config.replicates);
  std::vector<SweepRow> rows(config.grid.size() * reps);
  RobustnessOptions inner = config.options;
  inner.jobs = 1;
  // Cells are independent; each writes its own slot.
  ParallelFor(rows.size(), config.options.jobs, [&](size_t cell) {
    const size_t level = cell / reps;
    const int replicate = static_cast<int>(cell % reps);
    PerturbationSpec spec;
    spec.kind = config.kind;
    spec.language_mode = config.language_mode;
    spec.probability = config.grid[level];
    spec.master_seed = LevelSeed(config.seed, spec.probability, replicate);
    SweepRow& row = rows[cell];
    row.group = config.group;
    row.noise_level = spec.probability;
    row.replicate = replicate;
    row.seed = spec.master_seed;
    row.report =
        EvaluateInMemory(source, reference, spec, config.translator, inner)
            .report;
  });
  return rows;
}

std::vector<SweepRow> RunSweep(const SweepConfig& config) {
  config.Validate();
  const SentenceList source = LoadLines(config.source_path);
  const SentenceList reference = LoadLines(config.reference_path);
  std::vector<SweepRow> rows = RunSweep(config, source, reference);
  if (!config.out_dir.empty()) {
    ArtifactWriter writer(config.out_dir);
    writer.Add("sweep.tsv", SweepToTsv(rows));
    writer.Add("sweep_series.json", SweepSeriesJson(rows).dump(2) + "\n");
    json reports = json::array();
    for (const auto& row : rows) {
      reports.push_back({{"noise_level", row.noise_level},
                         {"replicate", row.replicate},
                         {"seed", row.seed},
                         {"report", ReportToJson(row.report)}});
    }
    writer.Add("sweep_reports.json", reports.dump(2) + "\n");
    json manifest = {
        {"tool", "mtrobust"},
        {"version", MTROBUST_VERSION},
        {"command", "sweep"},
        {"inputs",
         {{"source", config.source_path.string()},
          {"source_fnv1a64", Hex64(Fingerprint(Join(source)))},
          {"reference", config.reference_path.string()},
          {"reference_fnv1a64", Hex64(Fingerprint(Join(reference)))}}},
        {"kind", std::string(KindName(config.kind))},
        {"grid", config.grid},
        {"seed", config.seed},
        {"replicates", config.replicates},
        {"group", config.group},
        {"translator", config.translator.ToString()},
        {"options", OptionsToJson(config.options)},
        {"artifacts", writer.Manifest()}};
    writer.Add("manifest.json", manifest.dump(2) + "\n");
    writer.Commit();
  }
  return rows;
}

std::string SweepToTsv(const std::vector<SweepRow>& rows) {
  std::string out =
      "group\tnoise_level\treplicate\ttq_orig\ttq_pert\trobust\tconsis\n";
  for (const auto& row : rows) {
    out += row.group + '\t' + FormatNumber(row.noise_level) + '\t' +
           std::to_string(row.replicate) + '\t' +
           FormatNumber(row.report.tq_original.score) + '\t' +
           FormatNumber(row.report.tq_perturbed.score) + '\t' +
           (row.report.robust ? FormatNumber(*row.report.robust) : "NA") +
           '\t' + FormatNumber(row.report.consis) + '\n';
  }
  return out;
}

json SweepSeriesJson(const std::vector<SweepRow>& rows) {
  // Per-level means across replicates, plus every point.
  std::map<std::string, std::map<double, std::vector<const SweepRow*>>> by;
  for (const auto& row : rows) by[row.group][row.noise_level].push_back(&row);
  json series = json::array();
  for (const auto& [group, levels] : by) {
    json s = {{"group", group},
              {"noise_level", json::array()},
              {"robust_mean", json::array()},
              {"consis_mean", json::array()},
              {"points", json::array()}};
    for (const auto& [level, cells] : levels) {
      double robust = 0.0, consis = 0.0;
      size_t defined = 0;
      for (const SweepRow* row : cells) {
        if (row->report.robust) {
          robust += *row->report.robust;
          ++defined;
        }
        consis += row->report.consis;
        s["points"].push_back(
            {{"noise_level", level},
             {"replicate", row->replicate},
             {"robust", row->report.robust ? json(*row->report.robust)
                                           : json(nullptr)},
             {"consis", row->report.consis}});
      }
      s["noise_level"].push_back(level);
      s["robust_mean"].push_back(
          defined ? json(robust / static_cast<double>(defined))
                  : json(nullptr));
      s["consis_mean"].push_back(consis / static_cast<double>(cells.size()));
    }
    series.push_back(std::move(s));
  }
  return {{"series", series}};
}

std::vector<CorrelationRow> ParseCorrelationTsv(std::string_view text) {
  std::vector<CorrelationRow> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  std::vector<std::string> header;
  int robust_col = -1, consis_col = -1, group_col = -1, level_col = -1;
  size_t line_no = 0;
  const auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    size_t begin = 0;
    for (;;) {
      const size_t tab = s.find('\t', begin);
      cells.push_back(s.substr(begin, tab - begin));
      if (tab == std::string::npos) break;
      begin = tab + 1;
    }
    return cells;
  };
  const auto number = [&](const std::string& cell,
                          size_t at) -> std::optional<double> {
    if (cell == "NA" || cell == "nan" || cell.empty()) return std::nullopt;
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (end == cell.c_str() || *end != '\0') {
      throw DataError("correlate: bad number '" + cell + "' on line " +
                      std::to_string(at));
    }
    return v;
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line);
    const bool is_header =
        std::find(cells.begin(), cells.end(), "robust") != cells.end() &&
        std::find(cells.begin(), cells.end(), "consis") != cells.end();
    if (is_header) {
      header = cells;
      robust_col = consis_col = group_col = level_col = -1;
      for (size_t i = 0; i < cells.size(); ++i) {
        const int idx = static_cast<int>(i);
        if (cells[i] == "robust") robust_col = idx;
        if (cells[i] == "consis") consis_col = idx;
        if (cells[i] == "group") group_col = idx;
        if (cells[i] == "noise_level") level_col = idx;
      }
      continue;
    }
    if (header.empty()) {
      throw DataError("correlate: missing header with robust and consis");
    }
    if (cells.size() != header.size()) {
      throw DataError("correlate: line " + std::to_string(line_no) + " has " +
                      std::to_string(cells.size()) + " columns, expected " +
                      std::to_string(header.size()));
    }
    const auto robust = number(cells[static_cast<size_t>(robust_col)], line_no);
    const auto consis = number(cells[static_cast<size_t>(consis_col)], line_no);
    if (!robust || !consis) continue;
    CorrelationRow row;
    row.group = group_col >= 0 ? cells[static_cast<size_t>(group_col)] : "all";
    row.robust = *robust;
    row.consis = *consis;
    if (level_col >= 0) {
      row.noise_level = number(cells[static_cast<size_t>(level_col)], line_no);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<GroupCorrelation> RunCorrelate(
    const std::vector<CorrelationRow>& rows) {
  std::vector<std::string> order;
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>>
      data;
  for (const auto& row : rows) {
    auto [it, inserted] = data.try_emplace(row.group);
    if (inserted) order.push_back(row.group);
    it->second.first.push_back(row.robust);
    it->second.second.push_back(row.consis);
  }
  std::vector<GroupCorrelation> out;
  for (const auto& group : order) {
    const auto& [xs, ys] = data[group];
    GroupCorrelation g;
    g.group = group;
    g.n = xs.size();
    try {
      g.r = Pearson(xs, ys);
    } catch (const DataError& e) {
      g.error = e.what();
    }
    out.push_back(std::move(g));
  }
  return out;
}

json CorrelationToJson(const std::vector<GroupCorrelation>& groups,
                       const std::vector<CorrelationRow>& rows) {
  json g = json::array();
  for (const auto& group : groups) {
    g.push_back({{"group", group.group},
                 {"n", group.n},
                 {"r", group.r ? json(*group.r) : json(nullptr)},
                 {"error", group.error.empty() ? json(nullptr)
                                               : json(group.error)}});
  }
  json scatter = json::array();
  for (const auto& row : rows) {
    scatter.push_back(
        {{"group", row.group},
         {"robust", row.robust},
         {"consis", row.consis},
         {"noise_level",
          row.noise_level ? json(*row.noise_level) : json(nullptr)}});
  }
  return {{"groups", g}, {"scatter", scatter}};
}

}  // namespace mtrobust
