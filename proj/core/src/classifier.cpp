#include "dosdetect/classifier.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <optional>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dosdetect/error.hpp"

namespace dosdetect {
namespace {

constexpr const char* kTreeFormat = "dosdetect-cart";
constexpr int kTreeVersion = 1;
// Impurity decreases below this are rounding noise, not a real gain.
constexpr double kMinGain = 1e-12;

struct Split {
  TokenId feature = 0;
  std::uint32_t threshold = 0;
  double impurity = 0.0;
};

class CartBuilder {
 public:
  CartBuilder(std::span<const LabeledSample> samples, std::size_t min_leaf)
      : samples_(samples), min_leaf_(min_leaf) {}

  std::vector<DecisionTree::Node> build() {
    std::vector<std::size_t> all(samples_.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    grow(all);
    return std::move(nodes_);
  }

 private:
  std::size_t grow(const std::vector<std::size_t>& members) {
    const std::size_t index = nodes_.size();
    nodes_.emplace_back();

    DecisionTree::Node node;
    for (std::size_t i : members) {
      (samples_[i].label == Label::Attack ? node.attack_count : node.non_attack_count)++;
    }
    node.prediction = node.attack_count > node.non_attack_count ? Label::Attack : Label::NonAttack;

    const std::optional<Split> split = best_split(members, node.attack_count, node.non_attack_count);
    if (split) {
      std::vector<std::size_t> left;
      std::vector<std::size_t> right;
      for (std::size_t i : members) {
        (count_of(i, split->feature) <= split->threshold ? left : right).push_back(i);
      }
      node.leaf = false;
      node.feature = split->feature;
      node.threshold = split->threshold;
      node.left = grow(left);
      node.right = grow(right);
    }
    nodes_[index] = node;
    return index;
  }

  std::uint32_t count_of(std::size_t sample, TokenId feature) const {
    const BowVector& f = samples_[sample].features;
    const auto it = f.find(feature);
    return it == f.end() ? 0 : it->second;
  }

  std::optional<Split> best_split(const std::vector<std::size_t>& members, std::size_t attack,
                                  std::size_t non_attack) const {
    const std::size_t n = members.size();
    if (attack == 0 || non_attack == 0 || n < 2 * min_leaf_) return std::nullopt;
    const double parent = gini(attack, non_attack);

    // Non-zero (count, is_attack) observations per feature; absent means 0.
    std::map<TokenId, std::vector<std::pair<std::uint32_t, bool>>> observed;
    for (std::size_t i : members) {
      const bool is_attack = samples_[i].label == Label::Attack;
      for (const auto& [feature, count] : samples_[i].features) observed[feature].emplace_back(count, is_attack);
    }

    std::optional<Split> best;
    for (auto& [feature, values] : observed) {
      std::sort(values.begin(), values.end());
      // Start with the zero-count members on the left.
      std::size_t left_n = n - values.size();
      std::size_t left_attack = attack;
      for (const auto& v : values) left_attack -= v.second ? 1 : 0;
      std::uint32_t left_max = 0;

      std::size_t pos = 0;
      while (pos < values.size()) {
        const std::uint32_t next = values[pos].first;
        if (left_n > 0 && next > left_max) {
          consider(best, feature, left_max + (next - left_max) / 2, n, left_n, left_attack, attack, parent);
        }
        while (pos < values.size() && values[pos].first == next) {
          ++left_n;
          left_attack += values[pos].second ? 1 : 0;
          ++pos;
        }
        left_max = next;
      }
    }
    return best;
  }

  void consider(std::optional<Split>& best, TokenId feature, std::uint32_t threshold, std::size_t n,
                std::size_t left_n, std::size_t left_attack, std::size_t attack, double parent) const {
    const std::size_t right_n = n - left_n;
    if (left_n < min_leaf_ || right_n < min_leaf_) return;
    const std::size_t right_attack = attack - left_attack;
    const double weighted = (static_cast<double>(left_n) * gini(left_attack, left_n - left_attack) +
                             static_cast<double>(right_n) * gini(right_attack, right_n - right_attack)) /
                            static_cast<double>(n);
    if (parent - weighted <= kMinGain) return;
    if (!best || weighted < best->impurity) best = Split{feature, threshold, weighted};
  }

  std::span<const LabeledSample> samples_;
  std::size_t min_leaf_;
  std::vector<DecisionTree::Node> nodes_;
};

nlohmann::json node_to_json(const DecisionTree::Node& n) {
  nlohmann::json j = {
      {"leaf", n.leaf},
      {"prediction", std::string(to_string(n.prediction))},
      {"attack", n.attack_count},
      {"non_attack", n.non_attack_count},
  };
  if (!n.leaf) {
    j["feature"] = n.feature;
    j["threshold"] = n.threshold;
    j["left"] = n.left;
    j["right"] = n.right;
  }
  return j;
}

DecisionTree::Node node_from_json(const nlohmann::json& j) {
  DecisionTree::Node n;
  n.leaf = j.at("leaf").get<bool>();
  const auto label = parse_label(j.at("prediction").get<std::string>());
  if (!label || *label == Label::Unlabeled) throw Error("tree node has an invalid prediction");
  n.prediction = *label;
  n.attack_count = j.at("attack").get<std::size_t>();
  n.non_attack_count = j.at("non_attack").get<std::size_t>();
  if (!n.leaf) {
    n.feature = j.at("feature").get<TokenId>();
    n.threshold = j.at("threshold").get<std::uint32_t>();
    n.left = j.at("left").get<std::size_t>();
    n.right = j.at("right").get<std::size_t>();
  }
  return n;
}

}  // namespace

BowVector featurize(const Tweet& tweet, const Vocabulary& vocab) {
  BowVector vec;
  for (const std::string& token : tweet.tokens) {
    if (auto id = vocab.find(token)) ++vec[*id];
  }
  return vec;
}

double gini(std::size_t attack, std::size_t non_attack) {
  const double n = static_cast<double>(attack + non_attack);
  if (n == 0.0) return 0.0;
  const double p = static_cast<double>(attack) / n;
  const double q = static_cast<double>(non_attack) / n;
  return 1.0 - p * p - q * q;
}

DecisionTree::DecisionTree(std::vector<Node> nodes, std::size_t min_leaf)
    : nodes_(std::move(nodes)), min_leaf_(min_leaf) {
  if (nodes_.empty()) throw Error("decision tree has no nodes");
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    if (n.leaf) continue;
    // Children are always stored after their parent, which rules out cycles.
    if (n.left <= i || n.right <= i || n.left >= nodes_.size() || n.right >= nodes_.size()) {
      throw Error("decision tree node " + std::to_string(i) + " has invalid children");
    }
  }
}

Label DecisionTree::predict(const BowVector& features) const {
  if (nodes_.empty()) throw Error("predict on an untrained decision tree");
  std::size_t i = 0;
  while (!nodes_[i].leaf) {
    const auto it = features.find(nodes_[i].feature);
    const std::uint32_t count = it == features.end() ? 0 : it->second;
    i = count <= nodes_[i].threshold ? nodes_[i].left : nodes_[i].right;
  }
  return nodes_[i].prediction;
}

std::size_t DecisionTree::leaf_count() const {
  return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.leaf; }));
}

DecisionTree train_cart(std::span<const LabeledSample> samples, std::size_t min_leaf) {
  if (samples.empty()) throw Error("train_cart: no training samples");
  if (min_leaf == 0) throw Error("train_cart: min_leaf must be at least 1");
  for (const LabeledSample& s : samples) {
    if (s.label == Label::Unlabeled) throw Error("train_cart: unlabeled training sample");
  }
  return DecisionTree(CartBuilder(samples, min_leaf).build(), min_leaf);
}

std::string TweetClassifier::to_json() const {
  nlohmann::json doc;
  doc["format"] = kTreeFormat;
  doc["version"] = kTreeVersion;
  doc["min_leaf"] = tree.min_leaf();
  doc["vocab"] = vocab.tokens();
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& n : tree.nodes()) nodes.push_back(node_to_json(n));
  doc["nodes"] = std::move(nodes);
  return doc.dump();
}

TweetClassifier TweetClassifier::from_json(const std::string& text) {
  try {
    const nlohmann::json doc = nlohmann::json::parse(text);
    if (doc.at("format").get<std::string>() != kTreeFormat) throw Error("not a decision tree document");
    if (doc.at("version").get<int>() != kTreeVersion) {
      throw Error("unsupported decision tree version " + doc.at("version").dump());
    }
    TweetClassifier c;
    c.vocab = Vocabulary::from_tokens(doc.at("vocab").get<std::vector<std::string>>());
    std::vector<DecisionTree::Node> nodes;
    for (const auto& j : doc.at("nodes")) {
      nodes.push_back(node_from_json(j));
      if (!nodes.back().leaf && nodes.back().feature >= c.vocab.size()) {
        throw Error("decision tree feature id out of vocabulary range");
      }
    }
    c.tree = DecisionTree(std::move(nodes), doc.at("min_leaf").get<std::size_t>());
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("invalid decision tree document: ") + e.what());
  }
}

void TweetClassifier::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write tree file " + path.string());
  out << to_json() << '\n';
}

TweetClassifier TweetClassifier::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open tree file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

TweetClassifier train_classifier(const Corpus& corpus, std::size_t min_leaf) {
  TweetClassifier c;
  c.vocab = Vocabulary::from_corpus(corpus);
  std::vector<LabeledSample> samples;
  samples.reserve(corpus.size());
  for (const Tweet& t : corpus.tweets) {
    if (t.label == Label::Unlabeled) throw Error("tree training corpus contains unlabeled tweet " + t.id);
    samples.push_back({featurize(t, c.vocab), t.label});
  }
  c.tree = train_cart(samples, min_leaf);
  return c;
}

std::vector<RankedTweet> filter_ranked(std::span<const RankedTweet> ranked, const DecisionTree& tree,
                                       const Vocabulary& vocab) {
  std::vector<RankedTweet> kept;
  for (const RankedTweet& r : ranked) {
    if (tree.predict(featurize(r.tweet, vocab)) == Label::Attack) kept.push_back(r);
  }
  return kept;
}

}  // namespace dosdetect
