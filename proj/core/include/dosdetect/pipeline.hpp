#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "dosdetect/classifier.hpp"
#include "dosdetect/corpus.hpp"
#include "dosdetect/detector.hpp"
#include "dosdetect/eval.hpp"
#include "dosdetect/severity.hpp"

namespace dosdetect {

/// Everything the CLI can configure. All fields have usable defaults except
/// the corpus paths.
struct PipelineConfig {
  std::filesystem::path baseline_path;
  std::filesystem::path event_path;
  std::filesystem::path out_dir = "out";

  std::optional<std::filesystem::path> stopwords_path;
  bool keep_urls = true;

  DetectorSettings detector;
  /// Reuse saved models instead of training.
  std::optional<std::filesystem::path> event_model_path;
  std::optional<std::filesystem::path> baseline_model_path;

  /// Attack labeling rule; at most one may be set.
  std::optional<std::size_t> top_x;
  std::optional<double> score_threshold;

  bool use_tree = false;
  std::optional<std::filesystem::path> tree_path;

  double severity_beta = 0.5;
  std::optional<std::size_t> n_user;

  /// Evaluation grid; unset means 1..min(max_x, corpus size). An explicit
  /// empty grid is an error.
  std::optional<std::vector<std::size_t>> xs;
  std::size_t max_x = 100;
  std::vector<double> scales = {5, 6, 7, 8, 9, 10, 11, 12, 13, 14};
  /// Labeled corpus of another entity for the sweep's tree runs.
  std::optional<std::filesystem::path> tree_training_path;

  /// Throws Error for contradictory settings.
  void validate() const;
  TokenizerConfig tokenizer() const;
};

struct DetectSummary {
  Detection detection;
  std::vector<RankedTweet> filtered;  // empty unless use_tree
  bool labeling_applied = false;
  std::size_t n_attack = 0;
  std::optional<SeverityReport> severity;
};

/// Loads both windows, trains (or loads) the models, ranks topics and tweets,
/// applies the optional tree and labeling rule and computes severity. Writes
/// event_model.json, baseline_model.json, topics.csv, ranked.csv,
/// filtered.csv (with a tree) and severity.txt into out_dir.
/// Failures are reported as StageError.
DetectSummary run_detect(const PipelineConfig& config);

/// Detection on a labeled event corpus, then curve.csv and det.csv for the
/// configured grid (after the tree filter when use_tree is set).
PrecisionRecallCurve run_eval(const PipelineConfig& config);

/// parameter_sweep over config.scales, written to sweep.csv.
std::vector<SweepResult> run_sweep(const PipelineConfig& config);

}  // namespace dosdetect
