#include "dosdetect/lda.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dosdetect/error.hpp"
#include "dosdetect/random.hpp"

namespace dosdetect {
namespace {

constexpr const char* kModelFormat = "dosdetect-lda";
constexpr int kModelVersion = 1;

}  // namespace

bool is_distribution(std::span<const double> probs, double tolerance) {
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) return false;
    sum += p;
  }
  return std::abs(sum - 1.0) <= tolerance;
}

std::size_t num_topics(std::size_t num_docs, double topic_count_scale, double log_base) {
  if (num_docs == 0) throw Error("num_topics: corpus has no documents");
  if (!(topic_count_scale > 0.0)) throw Error("num_topics: topic count scale must be positive");
  if (!(log_base > 1.0)) throw Error("num_topics: log base must be greater than 1");
  const double n = static_cast<double>(num_docs);
  // Dedicated routines keep exact powers of the base exact (log(1000)/log(10) < 3).
  double log_n = 0.0;
  if (log_base == 10.0) {
    log_n = std::log10(n);
  } else if (log_base == 2.0) {
    log_n = std::log2(n);
  } else {
    log_n = std::log(n) / std::log(log_base);
  }
  const double raw = std::floor(topic_count_scale * log_n);
  return std::max<std::size_t>(2, static_cast<std::size_t>(raw));
}

LdaHyperparams LdaHyperparams::defaults(std::size_t num_topics, std::uint64_t seed) {
  LdaHyperparams h;
  h.num_topics = num_topics;
  h.dirichlet_alpha = 50.0 / static_cast<double>(std::max<std::size_t>(num_topics, 1));
  h.seed = seed;
  return h;
}

void LdaHyperparams::validate() const {
  if (!(dirichlet_alpha > 0.0)) throw Error("dirichlet_alpha must be positive");
  if (!(dirichlet_beta > 0.0)) throw Error("dirichlet_beta must be positive");
  if (num_topics < 2) throw Error("num_topics must be at least 2");
  if (iterations == 0) throw Error("iterations must be at least 1");
}

LdaModel::LdaModel(Vocabulary vocab, LdaHyperparams hyper, std::vector<Distribution> topic_word,
                   std::vector<Distribution> doc_topic)
    : vocab_(std::move(vocab)),
      hyper_(hyper),
      topic_word_(std::move(topic_word)),
      doc_topic_(std::move(doc_topic)) {
  hyper_.validate();
  if (topic_word_.size() != hyper_.num_topics) throw Error("topic_word row count != num_topics");
  for (const Distribution& row : topic_word_) {
    if (row.size() != vocab_.size()) throw Error("topic_word row length != vocabulary size");
    if (!is_distribution(row)) throw Error("topic_word row is not a distribution");
    if (std::any_of(row.begin(), row.end(), [](double p) { return p <= 0.0; })) {
      throw Error("topic_word row has a non-positive entry");
    }
  }
  for (const Distribution& row : doc_topic_) {
    if (row.size() != hyper_.num_topics) throw Error("doc_topic row length != num_topics");
    if (!is_distribution(row)) throw Error("doc_topic row is not a distribution");
  }
}

std::vector<std::pair<std::string, double>> LdaModel::top_words(std::size_t topic, std::size_t n) const {
  const Distribution& row = topic_word_.at(topic);
  std::vector<TokenId> ids(row.size());
  std::iota(ids.begin(), ids.end(), TokenId{0});
  n = std::min(n, ids.size());
  std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n), ids.end(),
                    [&](TokenId a, TokenId b) { return row[a] > row[b] || (row[a] == row[b] && a < b); });
  std::vector<std::pair<std::string, double>> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.emplace_back(vocab_.token(ids[i]), row[ids[i]]);
  return out;
}

std::string LdaModel::to_json() const {
  nlohmann::json doc;
  doc["format"] = kModelFormat;
  doc["version"] = kModelVersion;
  doc["hyper"] = {
      {"dirichlet_alpha", hyper_.dirichlet_alpha},
      {"dirichlet_beta", hyper_.dirichlet_beta},
      {"num_topics", hyper_.num_topics},
      {"iterations", hyper_.iterations},
      {"seed", hyper_.seed},
  };
  doc["vocab"] = vocab_.tokens();
  doc["topic_word"] = topic_word_;
  doc["doc_topic"] = doc_topic_;
  return doc.dump();
}

LdaModel LdaModel::from_json(const std::string& text) {
  try {
    const nlohmann::json doc = nlohmann::json::parse(text);
    if (doc.at("format").get<std::string>() != kModelFormat) throw Error("not an LDA model document");
    if (doc.at("version").get<int>() != kModelVersion) {
      throw Error("unsupported LDA model version " + doc.at("version").dump());
    }
    const nlohmann::json& h = doc.at("hyper");
    LdaHyperparams hyper;
    hyper.dirichlet_alpha = h.at("dirichlet_alpha").get<double>();
    hyper.dirichlet_beta = h.at("dirichlet_beta").get<double>();
    hyper.num_topics = h.at("num_topics").get<std::size_t>();
    hyper.iterations = h.at("iterations").get<std::size_t>();
    hyper.seed = h.at("seed").get<std::uint64_t>();
    const auto tokens = doc.at("vocab").get<std::vector<std::string>>();
    return LdaModel(Vocabulary::from_tokens(tokens), hyper,
                    doc.at("topic_word").get<std::vector<Distribution>>(),
                    doc.at("doc_topic").get<std::vector<Distribution>>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("invalid LDA model document: ") + e.what());
  }
}

void LdaModel::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write model file " + path.string());
  out << to_json() << '\n';
}

LdaModel LdaModel::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open model file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

LdaModel train(const Corpus& corpus, const LdaHyperparams& hyper) {
  hyper.validate();
  if (corpus.empty()) throw Error("cannot train on an empty corpus");

  Vocabulary vocab = Vocabulary::from_corpus(corpus);
  if (vocab.empty()) throw Error("no trainable tokens");

  const std::size_t num_docs = corpus.size();
  const std::size_t K = hyper.num_topics;
  const std::size_t V = vocab.size();
  const double alpha = hyper.dirichlet_alpha;
  const double beta = hyper.dirichlet_beta;
  const double v_beta = static_cast<double>(V) * beta;

  std::vector<std::vector<std::uint32_t>> words(num_docs);
  for (std::size_t d = 0; d < num_docs; ++d) {
    for (const std::string& token : corpus.tweets[d].tokens) {
      words[d].push_back(static_cast<std::uint32_t>(*vocab.find(token)));
    }
  }

  // word_topic is word-major so the inner sampling loop reads one stripe.
  std::vector<std::uint32_t> word_topic(V * K, 0);
  std::vector<std::uint32_t> topic_total(K, 0);
  std::vector<std::uint32_t> doc_topic(num_docs * K, 0);
  std::vector<std::vector<std::uint32_t>> assignment(num_docs);

  Rng rng(hyper.seed);
  for (std::size_t d = 0; d < num_docs; ++d) {
    assignment[d].resize(words[d].size());
    for (std::size_t i = 0; i < words[d].size(); ++i) {
      const auto k = static_cast<std::uint32_t>(uniform_index(rng, K));
      assignment[d][i] = k;
      ++word_topic[words[d][i] * K + k];
      ++topic_total[k];
      ++doc_topic[d * K + k];
    }
  }

  std::vector<double> cumulative(K);
  for (std::size_t iter = 0; iter < hyper.iterations; ++iter) {
    for (std::size_t d = 0; d < num_docs; ++d) {
      std::uint32_t* dt = &doc_topic[d * K];
      for (std::size_t i = 0; i < words[d].size(); ++i) {
        const std::uint32_t w = words[d][i];
        std::uint32_t* wt = &word_topic[w * K];
        const std::uint32_t old = assignment[d][i];
        --wt[old];
        --topic_total[old];
        --dt[old];

        double acc = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
          acc += (dt[k] + alpha) * (wt[k] + beta) / (topic_total[k] + v_beta);
          cumulative[k] = acc;
        }
        const auto k = static_cast<std::uint32_t>(sample_discrete(rng, cumulative));

        assignment[d][i] = k;
        ++wt[k];
        ++topic_total[k];
        ++dt[k];
      }
    }
  }

  std::vector<Distribution> phi(K, Distribution(V));
  for (std::size_t k = 0; k < K; ++k) {
    const double denom = topic_total[k] + v_beta;
    for (std::size_t w = 0; w < V; ++w) phi[k][w] = (word_topic[w * K + k] + beta) / denom;
  }
  std::vector<Distribution> theta(num_docs, Distribution(K));
  const double k_alpha = static_cast<double>(K) * alpha;
  for (std::size_t d = 0; d < num_docs; ++d) {
    const double denom = static_cast<double>(words[d].size()) + k_alpha;
    for (std::size_t k = 0; k < K; ++k) theta[d][k] = (doc_topic[d * K + k] + alpha) / denom;
  }

  return LdaModel(std::move(vocab), hyper, std::move(phi), std::move(theta));
}

Distribution infer_doc_topics(const LdaModel& model, std::span<const std::string> tokens,
                              std::size_t inference_iterations, std::uint64_t seed) {
  const std::size_t K = model.num_topics();
  if (inference_iterations == 0) throw Error("inference_iterations must be at least 1");

  std::vector<TokenId> known;
  known.reserve(tokens.size());
  for (const std::string& token : tokens) {
    if (auto id = model.vocab().find(token)) known.push_back(*id);
  }
  if (known.empty()) return Distribution(K, 1.0 / static_cast<double>(K));

  const auto& phi = model.topic_word();
  const double alpha = model.hyper().dirichlet_alpha;

  Rng rng(seed);
  std::vector<std::uint32_t> counts(K, 0);
  std::vector<std::uint32_t> assignment(known.size());
  for (std::size_t i = 0; i < known.size(); ++i) {
    assignment[i] = static_cast<std::uint32_t>(uniform_index(rng, K));
    ++counts[assignment[i]];
  }

  const std::size_t burn_in = inference_iterations / 2;
  std::vector<double> accumulated(K, 0.0);
  std::vector<double> cumulative(K);
  for (std::size_t iter = 0; iter < inference_iterations; ++iter) {
    for (std::size_t i = 0; i < known.size(); ++i) {
      --counts[assignment[i]];
      double acc = 0.0;
      for (std::size_t k = 0; k < K; ++k) {
        acc += phi[k][known[i]] * (counts[k] + alpha);
        cumulative[k] = acc;
      }
      const auto k = static_cast<std::uint32_t>(sample_discrete(rng, cumulative));
      assignment[i] = k;
      ++counts[k];
    }
    if (iter >= burn_in) {
      for (std::size_t k = 0; k < K; ++k) accumulated[k] += counts[k];
    }
  }

  const double samples = static_cast<double>(inference_iterations - burn_in);
  const double denom = static_cast<double>(known.size()) + static_cast<double>(K) * alpha;
  Distribution theta(K);
  for (std::size_t k = 0; k < K; ++k) theta[k] = (accumulated[k] / samples + alpha) / denom;
  return theta;
}

}  // namespace dosdetect
