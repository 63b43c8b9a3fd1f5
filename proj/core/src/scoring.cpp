#include "dosdetect/scoring.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <thread>

#include "dosdetect/csv.hpp"
#include "dosdetect/error.hpp"
#include "dosdetect/random.hpp"

namespace dosdetect {

std::vector<double> skl_by_topic(std::span<const TopicScore> topic_scores) {
  std::vector<double> skl(topic_scores.size(), 0.0);
  std::vector<bool> seen(topic_scores.size(), false);
  for (const TopicScore& s : topic_scores) {
    if (s.topic_index >= skl.size() || seen[s.topic_index]) {
      throw Error("topic scores must cover topic indices 0.." + std::to_string(skl.size() - 1) +
                  " exactly once");
    }
    seen[s.topic_index] = true;
    skl[s.topic_index] = s.skl;
  }
  return skl;
}

std::uint64_t tweet_seed(std::uint64_t base_seed, std::span<const std::string> tokens) {
  // FNV-1a over the tokens with a unit separator between them.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](unsigned char c) {
    h ^= c;
    h *= 0x100000001b3ULL;
  };
  for (const std::string& token : tokens) {
    for (char c : token) feed(static_cast<unsigned char>(c));
    feed(0x1f);
  }
  return mix_seed(base_seed, h);
}

namespace {

double dot(std::span<const double> mix, std::span<const double> skl) {
  if (mix.size() != skl.size()) {
    throw Error("tweet_score: topic mixture has " + std::to_string(mix.size()) + " entries but " +
                std::to_string(skl.size()) + " topic scores were given");
  }
  double score = 0.0;
  for (std::size_t j = 0; j < mix.size(); ++j) score += mix[j] * skl[j];
  return score;
}

}  // namespace

double tweet_score(std::span<const double> topic_mix, std::span<const TopicScore> topic_scores) {
  const std::vector<double> skl = skl_by_topic(topic_scores);
  return dot(topic_mix, skl);
}

std::vector<RankedTweet> rank_tweets(const Corpus& corpus, const LdaModel& model_a,
                                     std::span<const TopicScore> topic_scores, const RankOptions& options) {
  const std::vector<double> skl = skl_by_topic(topic_scores);
  if (skl.size() != model_a.num_topics()) {
    throw Error("rank_tweets: " + std::to_string(skl.size()) + " topic scores for a model with " +
                std::to_string(model_a.num_topics()) + " topics");
  }

  std::vector<RankedTweet> ranked(corpus.size());
  auto score_one = [&](std::size_t i) {
    RankedTweet& r = ranked[i];
    r.tweet = corpus.tweets[i];
    r.topic_mix = infer_doc_topics(model_a, r.tweet.tokens, options.inference_iterations,
                                   tweet_seed(options.seed, r.tweet.tokens));
    r.score = dot(r.topic_mix, skl);
  };

  std::size_t threads = options.threads == 0 ? std::thread::hardware_concurrency() : options.threads;
  threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(corpus.size(), 1));
  if (threads == 1) {
    for (std::size_t i = 0; i < corpus.size(); ++i) score_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < corpus.size(); i = next++) score_one(i);
      });
    }
  }

  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const RankedTweet& a, const RankedTweet& b) { return a.score > b.score; });
  for (std::size_t i = 0; i < ranked.size(); ++i) ranked[i].rank = i + 1;
  return ranked;
}

std::vector<std::string> label_top_x(std::span<const RankedTweet> ranked, std::size_t x) {
  if (x > ranked.size()) {
    throw Error("cannot label the top " + std::to_string(x) + " of " + std::to_string(ranked.size()) +
                " ranked tweets");
  }
  std::vector<std::string> ids;
  ids.reserve(x);
  for (std::size_t i = 0; i < x; ++i) ids.push_back(ranked[i].tweet.id);
  return ids;
}

std::size_t count_above_threshold(std::span<const RankedTweet> ranked, double threshold) {
  std::size_t n = 0;
  while (n < ranked.size() && ranked[n].score > threshold) ++n;
  return n;
}

void write_ranked(const std::filesystem::path& path, std::span<const RankedTweet> ranked) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write ranking " + path.string());
  csv::write_row(out, "rank", "score", "id", "text");
  for (const RankedTweet& r : ranked) csv::write_row(out, r.rank, r.score, r.tweet.id, r.tweet.raw_text);
}

}  // namespace dosdetect
