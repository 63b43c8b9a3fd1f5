#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dosdetect/corpus.hpp"
#include "dosdetect/vocabulary.hpp"

namespace dosdetect {

/// A probability vector: over a vocabulary (one topic) or over topics (one
/// document).
using Distribution = std::vector<double>;

/// True when all entries are >= 0 and they sum to 1 within `tolerance`.
bool is_distribution(std::span<const double> probs, double tolerance = 1e-9);

/// Topic count from corpus size: max(2, floor(scale * log_base(num_docs))).
/// Throws Error for num_docs == 0, scale <= 0 or log_base <= 1.
std::size_t num_topics(std::size_t num_docs, double topic_count_scale, double log_base = 10.0);

struct LdaHyperparams {
  double dirichlet_alpha = 0.0;  // per-document topic prior
  double dirichlet_beta = 0.01;  // per-topic word prior
  std::size_t num_topics = 2;
  std::size_t iterations = 1000;
  std::uint64_t seed = 0;

  /// alpha = 50 / num_topics, beta = 0.01, 1000 iterations.
  static LdaHyperparams defaults(std::size_t num_topics, std::uint64_t seed = 0);

  /// Throws Error when alpha or beta is not positive, num_topics < 2 or
  /// iterations == 0.
  void validate() const;

  friend bool operator==(const LdaHyperparams&, const LdaHyperparams&) = default;
};

/// A trained topic model for one time window. Immutable once built.
class LdaModel {
 public:
  /// Checks shapes and that every row is a distribution; topic rows must be
  /// strictly positive.
  LdaModel(Vocabulary vocab, LdaHyperparams hyper, std::vector<Distribution> topic_word,
           std::vector<Distribution> doc_topic);

  const Vocabulary& vocab() const noexcept { return vocab_; }
  const LdaHyperparams& hyper() const noexcept { return hyper_; }
  std::size_t num_topics() const noexcept { return topic_word_.size(); }
  /// num_topics() rows over vocab().
  const std::vector<Distribution>& topic_word() const noexcept { return topic_word_; }
  /// One row per training document, over topics.
  const std::vector<Distribution>& doc_topic() const noexcept { return doc_topic_; }

  /// The `n` heaviest words of `topic`, by weight then id.
  std::vector<std::pair<std::string, double>> top_words(std::size_t topic, std::size_t n) const;

  std::string to_json() const;
  static LdaModel from_json(const std::string& text);
  void save(const std::filesystem::path& path) const;
  static LdaModel load(const std::filesystem::path& path);

 private:
  Vocabulary vocab_;
  LdaHyperparams hyper_;
  std::vector<Distribution> topic_word_;
  std::vector<Distribution> doc_topic_;
};

/// Collapsed Gibbs sampling over the corpus with a sequential token scan.
/// Topic-word and document-topic rows come from the final sweep's counts with
/// additive beta and alpha smoothing. Deterministic for a given seed.
/// Throws Error for an empty corpus or one without any token.
LdaModel train(const Corpus& corpus, const LdaHyperparams& hyper);

/// Topic mixture of a held-out document. Topic-word rows stay fixed while the
/// document's assignments are resampled; counts from the second half of the
/// iterations are averaged and alpha-smoothed. Unknown tokens are skipped; a
/// document with no known token gets the uniform distribution.
Distribution infer_doc_topics(const LdaModel& model, std::span<const std::string> tokens,
                              std::size_t inference_iterations, std::uint64_t seed);

}  // namespace dosdetect
