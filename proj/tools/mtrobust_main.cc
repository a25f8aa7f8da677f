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

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mtrobust/bleu.h"
#include "mtrobust/bpe.h"
#include "mtrobust/corpus_io.h"
#include "mtrobust/error.h"
#include "mtrobust/perturbation.h"
#include "mtrobust/pipeline.h"
#include "mtrobust/robustness.h"
#include "mtrobust/segment.h"
#include "mtrobust/translator.h"
#include "mtrobust/unigram.h"

namespace mtrobust {
namespace {

struct GlobalFlags {
  uint64_t seed = 0;
  int jobs = 1;
  std::string out_dir;
};

struct BleuFlags {
  bool lowercase = true;
  std::string tokenizer = "13a";
  std::string smoothing = "none";

  BleuConfig ToConfig() const {
    BleuConfig config;
    config.lowercase = lowercase;
    config.tokenizer = ParseTokenizer(tokenizer);
    if (smoothing == "none") {
      config.smoothing = Smoothing::kNone;
    } else if (smoothing == "epsilon") {
      config.smoothing = Smoothing::kEpsilon;
    } else {
      throw UsageError("unknown smoothing: " + smoothing);
    }
    config.Validate();
    return config;
  }
};

void AddBleuFlags(CLI::App* app, BleuFlags* flags) {
  app->add_flag("--lc,!--no-lc", flags->lowercase,
                "Lowercase before tokenizing (default on)");
  app->add_option("--tok", flags->tokenizer, "BLEU tokenizer: 13a or char")
      ->capture_default_str();
  app->add_option("--smooth", flags->smoothing,
                  "BLEU smoothing: none or epsilon")
      ->capture_default_str();
}

std::filesystem::path OutPath(const GlobalFlags& global,
                              const std::string& name) {
  return std::filesystem::path(global.out_dir) / name;
}

// Writes to `path` if set, else to stdout.
void Emit(const std::optional<std::filesystem::path>& path,
          const std::string& text) {
  if (!path) {
    std::cout << text;
    return;
  }
  if (path->has_parent_path()) {
    std::filesystem::create_directories(path->parent_path());
  }
  std::ofstream out(*path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text) || !out.flush()) {
    throw DataError("cannot write " + path->string());
  }
}

std::string JoinLines(const SentenceList& list) {
  std::string out;
  for (const auto& line : list.lines) out += line + '\n';
  return out;
}

std::vector<double> ParseGrid(const std::string& text) {
  std::vector<double> grid;
  std::stringstream in(text);
  std::string cell;
  while (std::getline(in, cell, ',')) {
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (cell.empty() || *end != '\0') {
      throw UsageError("bad grid value: '" + cell + "'");
    }
    grid.push_back(v);
  }
  return grid;
}

int Run(int argc, char** argv) {
  CLI::App app{"mtrobust: robustness evaluation for machine translation"};
  app.set_version_flag("--version", std::string(MTROBUST_VERSION));
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags global;
  app.add_option("--seed", global.seed, "Master random seed")
      ->capture_default_str();
  app.add_option("--jobs", global.jobs, "Worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--out-dir", global.out_dir, "Directory for output files");

  // perturb
  CLI::App* perturb = app.add_subcommand("perturb", "Inject synthetic noise");
  std::string p_kind = "misspell", p_lang = "default", p_in, p_out, p_log;
  double p_prob = 0.1;
  perturb->add_option("--kind", p_kind, "misspell or case")
      ->capture_default_str();
  perturb->add_option("--prob", p_prob, "Noise probability")
      ->capture_default_str();
  perturb->add_option("--lang", p_lang, "default or ja")->capture_default_str();
  perturb->add_option("--in", p_in, "Input sentences")->required();
  perturb->add_option("--out", p_out, "Output path (default: stdout)");
  perturb->add_option("--log", p_log, "Edit log TSV path");

  // score
  CLI::App* score = app.add_subcommand("score", "Corpus BLEU");
  std::string s_hyp, s_ref;
  BleuFlags s_bleu;
  score->add_option("--hyp", s_hyp, "Hypotheses")->required();
  score->add_option("--ref", s_ref, "References")->required();
  AddBleuFlags(score, &s_bleu);

  // evaluate
  CLI::App* evaluate =
      app.add_subcommand("evaluate", "ROBUST and CONSIS for one noise level");
  std::string e_src, e_ref, e_hyp_orig, e_hyp_pert, e_pert_src, e_translator;
  std::string e_kind = "misspell", e_lang = "default";
  double e_prob = 0.1;
  int e_bootstrap = 1000, e_timeout = 600;
  BleuFlags e_bleu;
  evaluate->add_option("--src", e_src, "Source sentences")->required();
  evaluate->add_option("--ref", e_ref, "References")->required();
  evaluate->add_option("--hyp-orig", e_hyp_orig,
                       "Precomputed translation of the source");
  evaluate->add_option("--hyp-pert", e_hyp_pert,
                       "Precomputed translation of the perturbed source");
  evaluate->add_option("--pert-src", e_pert_src,
                       "Perturbed source matching --hyp-pert");
  evaluate->add_option("--translator", e_translator,
                       "cmd:<command> | stub:identity | "
                       "stub:degrading,s=<x>,seed=<n>");
  evaluate->add_option("--timeout", e_timeout, "Translator timeout, seconds")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  evaluate->add_option("--kind", e_kind, "misspell or case")
      ->capture_default_str();
  evaluate->add_option("--prob", e_prob, "Noise probability")
      ->capture_default_str();
  evaluate->add_option("--lang", e_lang, "default or ja")
      ->capture_default_str();
  evaluate->add_option("--bootstrap", e_bootstrap,
                       "Bootstrap resamples (0 disables)")
      ->capture_default_str();
  AddBleuFlags(evaluate, &e_bleu);

  // sweep
  CLI::App* sweep = app.add_subcommand("sweep", "Evaluate over a noise grid");
  std::string w_src, w_ref, w_translator = "stub:identity", w_grid;
  std::string w_kind = "misspell", w_lang = "default", w_group = "default";
  int w_replicates = 1, w_bootstrap = 0, w_timeout = 600;
  BleuFlags w_bleu;
  sweep->add_option("--src", w_src, "Source sentences")->required();
  sweep->add_option("--ref", w_ref, "References")->required();
  sweep->add_option("--translator", w_translator, "Translator spec")
      ->capture_default_str();
  sweep->add_option("--timeout", w_timeout, "Translator timeout, seconds")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sweep->add_option("--grid", w_grid, "Comma-separated noise levels")
      ->required();
  sweep->add_option("--kind", w_kind, "misspell or case")
      ->capture_default_str();
  sweep->add_option("--lang", w_lang, "default or ja")->capture_default_str();
  sweep->add_option("--replicates", w_replicates, "Seeds per noise level")
      ->capture_default_str();
  sweep->add_option("--group", w_group, "Group label for the TSV")
      ->capture_default_str();
  sweep->add_option("--bootstrap", w_bootstrap,
                    "Bootstrap resamples per cell (0 disables)")
      ->capture_default_str();
  AddBleuFlags(sweep, &w_bleu);

  // correlate
  CLI::App* correlate =
      app.add_subcommand("correlate", "Pearson r(robust, consis) per group");
  std::vector<std::string> c_in;
  correlate->add_option("--in", c_in, "TSV files with robust/consis columns")
      ->required();

  // train-subword
  CLI::App* train =
      app.add_subcommand("train-subword", "Train a BPE or unigram model");
  std::string t_type = "bpe", t_in, t_model, t_marker(kDefaultMarker);
  size_t t_size = 8000;
  uint64_t t_min_freq = 1;
  UnigramTrainerConfig t_unigram;
  train->add_option("--model-type", t_type, "bpe or unigram")
      ->capture_default_str();
  train->add_option("--in", t_in, "Training text")->required();
  train->add_option("--model", t_model, "Output model path")->required();
  train->add_option("--size", t_size,
                    "Merge count (bpe) or vocabulary size (unigram)")
      ->capture_default_str();
  train->add_option("--min-frequency", t_min_freq,
                    "BPE: stop when the best pair is rarer")
      ->capture_default_str();
  train->add_option("--marker", t_marker, "BPE continuation marker")
      ->capture_default_str();
  train->add_option("--max-piece-len", t_unigram.seed_max_piece_len,
                    "Unigram: longest seed piece")
      ->capture_default_str();
  train->add_option("--em-iterations", t_unigram.em_iterations,
                    "Unigram: EM steps per pruning round")
      ->capture_default_str();
  train->add_option("--prune-fraction", t_unigram.prune_fraction,
                    "Unigram: fraction removed per round")
      ->capture_default_str();

  // segment
  CLI::App* segment = app.add_subcommand("segment", "Apply a subword model");
  std::string g_type = "bpe", g_model, g_in, g_out, g_marker(kDefaultMarker);
  std::optional<double> g_dropout, g_alpha;
  bool g_detok = false;
  segment->add_option("--model-type", g_type, "bpe or unigram")
      ->capture_default_str();
  segment->add_option("--model", g_model, "Model file");
  segment->add_option("--in", g_in, "Input sentences")->required();
  segment->add_option("--out", g_out, "Output path (default: stdout)");
  segment->add_option("--dropout", g_dropout,
                      "BPE-dropout probability (enables sampling)");
  segment->add_option("--alpha", g_alpha,
                      "Unigram sampling alpha (enables sampling)");
  segment->add_option("--marker", g_marker,
                      "Unigram continuation marker; detokenize marker")
      ->capture_default_str();
  segment->add_flag("--detokenize", g_detok,
                    "Remove markers instead of segmenting");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  const auto out_or_default =
      [&](const std::string& flag,
          const char* name) -> std::optional<std::filesystem::path> {
    if (!flag.empty()) return std::filesystem::path(flag);
    if (!global.out_dir.empty()) return OutPath(global, name);
    return std::nullopt;
  };

  if (*perturb) {
    PerturbationSpec spec;
    spec.kind = ParseKind(p_kind);
    spec.language_mode = ParseLanguageMode(p_lang);
    spec.probability = p_prob;
    spec.master_seed = global.seed;
    spec.Validate();
    const SentenceList input = LoadLines(p_in);
    const PerturbationResult result = Perturb(input, spec, global.jobs);
    Emit(out_or_default(p_out, "perturbed_source.txt"),
         JoinLines(result.sentences));
    const auto log_path = out_or_default(p_log, "perturbation_log.tsv");
    if (log_path) {
      if (log_path->has_parent_path()) {
        std::filesystem::create_directories(log_path->parent_path());
      }
      result.log.WriteTsv(*log_path);
    }
    std::cerr << "selected " << result.units_selected << " of "
              << result.units_total << " units\n";
    return 0;
  }

  if (*score) {
    const BleuConfig config = s_bleu.ToConfig();
    const SentenceList hyp = LoadLines(s_hyp);
    const SentenceList ref = LoadLines(s_ref);
    const BleuScore result = CorpusBleu(hyp, ref, config);
    const std::string text = ScoreToJson(result).dump(2) + "\n";
    std::cout << text;
    if (!global.out_dir.empty()) Emit(OutPath(global, "score.json"), text);
    return 0;
  }

  if (*evaluate) {
    EvaluateConfig config;
    config.source_path = e_src;
    config.reference_path = e_ref;
    if (!e_hyp_orig.empty()) config.hyp_original_path = e_hyp_orig;
    if (!e_hyp_pert.empty()) config.hyp_perturbed_path = e_hyp_pert;
    if (!e_pert_src.empty()) config.perturbed_source_path = e_pert_src;
    if (!e_translator.empty()) {
      config.translator = TranslatorSpec::Parse(e_translator);
      config.translator->timeout = std::chrono::seconds(e_timeout);
    }
    config.perturbation.kind = ParseKind(e_kind);
    config.perturbation.language_mode = ParseLanguageMode(e_lang);
    config.perturbation.probability = e_prob;
    config.perturbation.master_seed = global.seed;
    config.options.tq_config = e_bleu.ToConfig();
    config.options.consis_config = config.options.tq_config;
    config.options.bootstrap_resamples = e_bootstrap;
    config.options.bootstrap_seed = global.seed;
    config.options.jobs = global.jobs;
    config.out_dir = global.out_dir;
    const RobustnessReport report = RunEvaluate(config);
    std::cout << ReportToJson(report).dump(2) << "\n";
    return 0;
  }

  if (*sweep) {
    SweepConfig config;
    config.kind = ParseKind(w_kind);
    config.language_mode = ParseLanguageMode(w_lang);
    config.grid = ParseGrid(w_grid);
    config.seed = global.seed;
    config.replicates = w_replicates;
    config.group = w_group;
    config.translator = TranslatorSpec::Parse(w_translator);
    config.translator.timeout = std::chrono::seconds(w_timeout);
    config.source_path = w_src;
    config.reference_path = w_ref;
    config.options.tq_config = w_bleu.ToConfig();
    config.options.consis_config = config.options.tq_config;
    config.options.bootstrap_resamples = w_bootstrap;
    config.options.bootstrap_seed = global.seed;
    config.options.jobs = global.jobs;
    config.out_dir = global.out_dir;
    std::cout << SweepToTsv(RunSweep(config));
    return 0;
  }

  if (*correlate) {
    std::vector<CorrelationRow> rows;
    for (const auto& path : c_in) {
      std::ifstream in(path, std::ios::binary);
      if (!in) throw DataError("cannot open " + path);
      const std::string text((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
      auto parsed = ParseCorrelationTsv(text);
      rows.insert(rows.end(), parsed.begin(), parsed.end());
    }
    const auto groups = RunCorrelate(rows);
    const std::string text = CorrelationToJson(groups, rows).dump(2) + "\n";
    std::cout << text;
    if (!global.out_dir.empty()) {
      Emit(OutPath(global, "correlation.json"), text);
    }
    for (const auto& g : groups) {
      if (!g.r) std::cerr << "group " << g.group << ": " << g.error << "\n";
    }
    return 0;
  }

  if (*train) {
    const WordFrequencies words = CountWords(LoadLines(t_in));
    if (t_type == "bpe") {
      BpeTrainOptions options;
      options.min_frequency = t_min_freq;
      const MergeTable table = BpeTrain(words, t_size, options, t_marker);
      table.Save(t_model);
      std::cerr << "learned " << table.size() << " merges\n";
    } else if (t_type == "unigram") {
      const UnigramVocab vocab = UnigramTrain(words, t_size, t_unigram);
      vocab.Save(t_model);
      std::cerr << "vocabulary size " << vocab.size() << "\n";
    } else {
      throw UsageError("unknown --model-type: " + t_type);
    }
    return 0;
  }

  if (*segment) {
    const SentenceList input = LoadLines(g_in);
    SentenceList output;
    if (g_detok) {
      output = DetokenizeCorpus(input, g_marker);
    } else {
      if (g_model.empty()) throw UsageError("--model is required");
      SegmentOptions options;
      options.seed = global.seed;
      options.jobs = global.jobs;
      options.marker = g_marker;
      std::optional<SubwordModel> model;
      if (g_type == "bpe") {
        if (g_alpha) throw UsageError("--alpha applies to unigram models");
        model.emplace(MergeTable::Load(g_model));
        if (g_dropout) {
          options.mode = SegmentMode::kSample;
          options.parameter = *g_dropout;
        }
      } else if (g_type == "unigram") {
        if (g_dropout) throw UsageError("--dropout applies to bpe models");
        model.emplace(UnigramVocab::Load(g_model));
        if (g_alpha) {
          options.mode = SegmentMode::kSample;
          options.parameter = *g_alpha;
        }
      } else {
        throw UsageError("unknown --model-type: " + g_type);
      }
      output = SegmentCorpus(input, *model, options);
    }
    Emit(out_or_default(g_out, "segmented.txt"), JoinLines(output));
    return 0;
  }
  return 1;
}

}  // namespace
}  // namespace mtrobust

int main(int argc, char** argv) {
  try {
    return mtrobust::Run(argc, argv);
  } catch (const mtrobust::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const mtrobust::TranslatorError& e) {
    std::cerr << "translator error: " << e.what() << "\n";
    return 3;
  } catch (const mtrobust::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
