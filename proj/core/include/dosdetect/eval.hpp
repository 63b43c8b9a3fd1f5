#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "dosdetect/classifier.hpp"
#include "dosdetect/corpus.hpp"
#include "dosdetect/detector.hpp"
#include "dosdetect/scoring.hpp"

namespace dosdetect {

/// Precision and recall when the first x ranked tweets are labeled Attack.
struct EvalPoint {
  std::size_t x = 0;
  std::size_t labeled = 0;  // min(x, ranking length)
  std::size_t true_positives = 0;
  double precision = 0.0;  // true_positives / labeled, 0 when nothing is labeled
  double recall = 0.0;     // true_positives / gold attacks

  friend bool operator==(const EvalPoint&, const EvalPoint&) = default;
};

struct PrecisionRecallCurve {
  std::vector<EvalPoint> points;
  bool no_gold_attacks = false;  // recall reported as 0 throughout
};

struct CurveOptions {
  /// Recall denominator. Defaults to the gold attacks in the ranking itself;
  /// set it when the ranking was filtered. When set, x may exceed the ranking
  /// length (everything is labeled).
  std::optional<std::size_t> total_gold_attacks;
};

/// Throws Error when a tweet lacks a gold label, an x is 0, xs is not
/// strictly increasing, or (without total_gold_attacks) an x exceeds the
/// ranking length.
PrecisionRecallCurve precision_recall_curve(std::span<const RankedTweet> ranked, std::span<const std::size_t> xs,
                                            const CurveOptions& options = {});

struct DetPoint {
  std::size_t x = 0;
  double missed_detection_rate = 0.0;  // 1 - recall
  double false_alarm_rate = 0.0;       // 1 - precision
};

std::vector<DetPoint> det_points(std::span<const EvalPoint> curve);

struct SynthSpec {
  std::size_t n_background = 500;
  std::size_t n_attack = 500;
  std::size_t background_vocab_size = 200;
  std::size_t attack_vocab_size = 30;
  std::size_t tokens_per_doc = 12;
  double overlap_fraction = 0.3;
  std::uint64_t seed = 7;

  /// Throws Error unless sizes are positive (n_attack may be 0) and
  /// overlap_fraction lies in [0, 1].
  void validate() const;
};

struct SyntheticCorpora {
  Corpus baseline;
  Corpus event;
};

/// Background words are "bg<seed>w<i>" so each seed is a separate entity;
/// attack words "atk<i>" are shared across entities. Both vocabularies are
/// Zipf-distributed. The baseline holds n_background background documents;
/// the event window holds n_background background documents (NonAttack) and
/// n_attack attack documents (Attack) in shuffled order. Each attack-document
/// token is a background word with probability overlap_fraction.
SyntheticCorpora generate_synthetic(const SynthSpec& spec);

struct SweepResult {
  double topic_count_scale = 0.0;
  bool use_tree = false;
  PrecisionRecallCurve curve;
};

struct SweepConfig {
  std::vector<double> scales;
  std::vector<std::size_t> xs;
  bool with_and_without_tree = false;
  /// Required when with_and_without_tree is set; should come from another
  /// entity than the evaluated corpus.
  std::optional<Corpus> tree_training;
  std::size_t min_leaf = 4;
  DetectorSettings settings;  // topic_count_scale is overridden per cell
};

/// One detection per scale (seeded from the base seed and the scale), each
/// evaluated without and, if requested, with the tree filter. Results are
/// ordered by scale, tree off before tree on.
std::vector<SweepResult> parameter_sweep(const Corpus& baseline, const Corpus& event, const SweepConfig& config);

/// Evaluates a ranking with an optional classifier filter. Recall is always
/// relative to the unfiltered gold attack count.
PrecisionRecallCurve evaluate_ranking(std::span<const RankedTweet> ranked, std::span<const std::size_t> xs,
                                      const TweetClassifier* filter);

/// x,precision,recall
void write_curve(const std::filesystem::path& path, const PrecisionRecallCurve& curve);
/// x,missed_detection_rate,false_alarm_rate
void write_det(const std::filesystem::path& path, std::span<const DetPoint> points);
/// scale,tree,x,precision,recall
void write_sweep(const std::filesystem::path& path, std::span<const SweepResult> results);

}  // namespace dosdetect
