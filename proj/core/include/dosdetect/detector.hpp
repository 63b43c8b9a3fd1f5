#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dosdetect/corpus.hpp"
#include "dosdetect/divergence.hpp"
#include "dosdetect/lda.hpp"
#include "dosdetect/scoring.hpp"

namespace dosdetect {

/// Knobs for one event-vs-baseline detection run. Every field has a default.
struct DetectorSettings {
  double topic_count_scale = 10.0;
  double log_base = 10.0;
  std::optional<double> dirichlet_alpha;  // default 50 / num_topics
  double dirichlet_beta = 0.01;
  std::size_t lda_iterations = 1000;
  std::size_t inference_iterations = 100;
  double epsilon = 1e-12;
  std::uint64_t seed = 0;
  std::size_t threads = 0;  // 0: hardware concurrency

  /// Hyperparameters for a window of `num_docs` tweets. `stream` separates the
  /// seeds of the two windows.
  LdaHyperparams hyperparams_for(std::size_t num_docs, std::uint64_t stream) const;
};

/// Seed streams, so the two windows and inference never share a sequence.
inline constexpr std::uint64_t kEventStream = 1;
inline constexpr std::uint64_t kBaselineStream = 2;
inline constexpr std::uint64_t kInferenceStream = 3;

struct Detection {
  LdaModel event_model;
  LdaModel baseline_model;
  std::vector<TopicScore> topic_scores;
  std::vector<RankedTweet> ranked;
};

/// Trains both window models (concurrently), ranks the event topics by
/// novelty and ranks the event tweets. Deterministic for fixed settings.
Detection detect(const Corpus& baseline, const Corpus& event, const DetectorSettings& settings);

/// Ranking half of detect() for already trained models.
Detection detect_with_models(LdaModel event_model, LdaModel baseline_model, const Corpus& event,
                             const DetectorSettings& settings);

}  // namespace dosdetect
