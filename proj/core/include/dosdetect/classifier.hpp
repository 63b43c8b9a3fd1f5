#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dosdetect/corpus.hpp"
#include "dosdetect/scoring.hpp"
#include "dosdetect/vocabulary.hpp"

namespace dosdetect {

/// Sparse token counts; only ids with a count of at least one are stored.
using BowVector = std::map<TokenId, std::uint32_t>;

/// Counts the tweet's in-vocabulary tokens.
BowVector featurize(const Tweet& tweet, const Vocabulary& vocab);

struct LabeledSample {
  BowVector features;
  Label label = Label::NonAttack;
};

/// Binary CART tree. Internal nodes send `count <= threshold` left.
class DecisionTree {
 public:
  struct Node {
    bool leaf = true;
    // internal nodes
    TokenId feature = 0;
    std::uint32_t threshold = 0;
    std::size_t left = 0;
    std::size_t right = 0;
    // every node
    Label prediction = Label::NonAttack;
    std::size_t attack_count = 0;
    std::size_t non_attack_count = 0;

    std::size_t samples() const noexcept { return attack_count + non_attack_count; }
    friend bool operator==(const Node&, const Node&) = default;
  };

  DecisionTree() = default;
  /// Node 0 is the root. Validates child indices.
  explicit DecisionTree(std::vector<Node> nodes, std::size_t min_leaf);

  Label predict(const BowVector& features) const;

  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  std::size_t min_leaf() const noexcept { return min_leaf_; }
  std::size_t leaf_count() const;

  friend bool operator==(const DecisionTree&, const DecisionTree&) = default;

 private:
  std::vector<Node> nodes_;
  std::size_t min_leaf_ = 4;
};

/// Gini impurity 1 - p_attack^2 - p_non_attack^2.
double gini(std::size_t attack, std::size_t non_attack);

/// Greedy CART with Gini impurity. Candidate splits are enumerated by feature
/// id, then by threshold; the first strictly best split wins. A node becomes
/// a leaf when it is pure or when no split leaves at least `min_leaf` samples
/// on both sides with a positive impurity decrease. Leaves predict the
/// majority label; ties go to NonAttack.
/// Throws Error for an empty sample list, an Unlabeled sample or min_leaf 0.
DecisionTree train_cart(std::span<const LabeledSample> samples, std::size_t min_leaf = 4);

/// A tree together with the vocabulary its features index into.
struct TweetClassifier {
  Vocabulary vocab;
  DecisionTree tree;

  Label predict(const Tweet& tweet) const { return tree.predict(featurize(tweet, vocab)); }

  std::string to_json() const;
  static TweetClassifier from_json(const std::string& text);
  void save(const std::filesystem::path& path) const;
  static TweetClassifier load(const std::filesystem::path& path);
};

/// Builds the vocabulary from `corpus` and trains on its gold labels.
/// Throws Error when a tweet is unlabeled.
TweetClassifier train_classifier(const Corpus& corpus, std::size_t min_leaf = 4);

/// Keeps the ranked tweets predicted Attack, preserving order and ranks.
std::vector<RankedTweet> filter_ranked(std::span<const RankedTweet> ranked, const DecisionTree& tree,
                                       const Vocabulary& vocab);

}  // namespace dosdetect
