#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "dosdetect/corpus.hpp"
#include "dosdetect/divergence.hpp"
#include "dosdetect/lda.hpp"

namespace dosdetect {

struct RankedTweet {
  Tweet tweet;
  double score = 0.0;
  std::size_t rank = 0;  // 1-based
  Distribution topic_mix;
};

/// skl values laid out by topic_index. Throws Error unless the indices are
/// exactly 0..n-1.
std::vector<double> skl_by_topic(std::span<const TopicScore> topic_scores);

/// Dot product of a tweet's topic mixture with the per-topic skl values.
/// Throws Error on a length mismatch.
double tweet_score(std::span<const double> topic_mix, std::span<const TopicScore> topic_scores);

struct RankOptions {
  std::size_t inference_iterations = 100;
  std::uint64_t seed = 0;
  /// Worker threads for per-tweet inference; 0 uses hardware concurrency.
  /// Output does not depend on this value.
  std::size_t threads = 1;
};

/// Inference seed for one tweet: derived from the base seed and the token
/// sequence, so equal texts score equally wherever they sit in the corpus.
std::uint64_t tweet_seed(std::uint64_t base_seed, std::span<const std::string> tokens);

/// Infers each tweet's topic mixture under `model_a` (seeded by tweet_seed)
/// and sorts by score descending. Equal scores keep corpus order.
std::vector<RankedTweet> rank_tweets(const Corpus& corpus, const LdaModel& model_a,
                                     std::span<const TopicScore> topic_scores,
                                     const RankOptions& options = {});

/// Ids of the first x ranked tweets. Throws Error when x exceeds the list.
std::vector<std::string> label_top_x(std::span<const RankedTweet> ranked, std::size_t x);

/// Number of leading ranked tweets whose score is strictly above `threshold`.
std::size_t count_above_threshold(std::span<const RankedTweet> ranked, double threshold);

/// Writes rank,score,id,text.
void write_ranked(const std::filesystem::path& path, std::span<const RankedTweet> ranked);

}  // namespace dosdetect
