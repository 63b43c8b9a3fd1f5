#include "dosdetect/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "dosdetect/csv.hpp"
#include "dosdetect/error.hpp"

namespace dosdetect {

double kl_divergence(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error("kl_divergence: length mismatch (" + std::to_string(x.size()) + " vs " +
                std::to_string(y.size()) + ")");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 0.0) sum += x[i] * std::log(x[i] / y[i]);
  }
  // Rounding can leave a tiny negative value for near-identical inputs.
  return std::max(sum, 0.0);
}

double symmetric_kl(std::span<const double> p, std::span<const double> q) {
  return kl_divergence(p, q) + kl_divergence(q, p);
}

AlignedTopics align_vocabularies(const LdaModel& model_a, const LdaModel& model_b, double epsilon) {
  if (!(epsilon > 0.0)) throw Error("align_vocabularies: epsilon must be positive");

  AlignedTopics out;
  out.vocab = model_a.vocab();
  for (const std::string& token : model_b.vocab().tokens()) out.vocab.add(token);
  const std::size_t size = out.vocab.size();

  auto reexpress = [&](const LdaModel& model) {
    std::vector<std::size_t> position(model.vocab().size());
    for (TokenId id = 0; id < model.vocab().size(); ++id) {
      position[id] = *out.vocab.find(model.vocab().token(id));
    }
    const bool gained = model.vocab().size() < size;
    std::vector<Distribution> rows;
    rows.reserve(model.num_topics());
    for (const Distribution& src : model.topic_word()) {
      Distribution row(size, gained ? epsilon : 0.0);
      for (TokenId id = 0; id < src.size(); ++id) row[position[id]] = src[id];
      if (gained) {
        double total = 0.0;
        for (double p : row) total += p;
        for (double& p : row) p /= total;
      }
      rows.push_back(std::move(row));
    }
    return rows;
  };

  out.topics_a = reexpress(model_a);
  out.topics_b = reexpress(model_b);
  return out;
}

std::vector<TopicScore> rank_aligned_topics(std::span<const Distribution> topics_a,
                                            std::span<const Distribution> topics_b) {
  if (topics_b.empty()) throw Error("rank_attack_topics: baseline model has no topics");
  std::vector<TopicScore> scores;
  scores.reserve(topics_a.size());
  for (std::size_t j = 0; j < topics_a.size(); ++j) {
    TopicScore best{j, std::numeric_limits<double>::infinity(), 0};
    for (std::size_t m = 0; m < topics_b.size(); ++m) {
      const double skl = symmetric_kl(topics_a[j], topics_b[m]);
      if (skl < best.skl) {
        best.skl = skl;
        best.matched_baseline_index = m;
      }
    }
    scores.push_back(best);
  }
  std::stable_sort(scores.begin(), scores.end(),
                   [](const TopicScore& a, const TopicScore& b) { return a.skl > b.skl; });
  return scores;
}

std::vector<TopicScore> rank_attack_topics(const LdaModel& model_a, const LdaModel& model_b,
                                           double epsilon) {
  const AlignedTopics aligned = align_vocabularies(model_a, model_b, epsilon);
  return rank_aligned_topics(aligned.topics_a, aligned.topics_b);
}

void write_topic_table(const std::filesystem::path& path, std::span<const TopicScore> scores,
                       const LdaModel& model_a) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write topic table " + path.string());
  csv::write_row(out, "topic_index", "skl", "matched_baseline_index", "top_words");
  for (const TopicScore& s : scores) {
    std::string words;
    for (const auto& [token, weight] : model_a.top_words(s.topic_index, 10)) {
      if (!words.empty()) words += ' ';
      words += token;
    }
    csv::write_row(out, s.topic_index, s.skl, s.matched_baseline_index, words);
  }
}

}  // namespace dosdetect
