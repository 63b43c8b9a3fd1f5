#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "dosdetect/lda.hpp"

namespace dosdetect {

/// Natural-log KL divergence sum_i x_i ln(x_i / y_i) with 0 ln(0/y) = 0.
/// Throws Error on a length mismatch. y must be strictly positive wherever x
/// is not zero.
double kl_divergence(std::span<const double> x, std::span<const double> y);

/// D(p, q) + D(q, p).
double symmetric_kl(std::span<const double> p, std::span<const double> q);

/// Topics of two models re-expressed over one shared vocabulary.
struct AlignedTopics {
  Vocabulary vocab;  // model A's tokens first, then B's unseen ones
  std::vector<Distribution> topics_a;
  std::vector<Distribution> topics_b;
};

/// Re-expresses both models' topics over the union vocabulary. Tokens a model
/// never saw get probability `epsilon`; rows that gained entries are then
/// renormalized. Rows that gained nothing are copied unchanged.
AlignedTopics align_vocabularies(const LdaModel& model_a, const LdaModel& model_b, double epsilon);

struct TopicScore {
  std::size_t topic_index = 0;             // topic of the event-window model
  double skl = 0.0;                        // min symmetric KL to any baseline topic
  std::size_t matched_baseline_index = 0;  // the baseline topic achieving the min

  friend bool operator==(const TopicScore&, const TopicScore&) = default;
};

/// Novelty of already-aligned topics: for each topic of A, the minimum
/// symmetric KL over all topics of B (first minimum wins). Sorted by skl
/// descending; equal skl keeps the lower topic index first.
std::vector<TopicScore> rank_aligned_topics(std::span<const Distribution> topics_a,
                                            std::span<const Distribution> topics_b);

/// Aligns the vocabularies of the event model `model_a` and baseline model
/// `model_b`, then ranks A's topics by novelty.
std::vector<TopicScore> rank_attack_topics(const LdaModel& model_a, const LdaModel& model_b,
                                           double epsilon = 1e-12);

/// Writes topic_index,skl,matched_baseline_index,top_words with the ten
/// heaviest words of each event topic separated by spaces.
void write_topic_table(const std::filesystem::path& path, std::span<const TopicScore> scores,
                       const LdaModel& model_a);

}  // namespace dosdetect
