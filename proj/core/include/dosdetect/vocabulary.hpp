#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dosdetect/corpus.hpp"

namespace dosdetect {

using TokenId = std::size_t;

/// Dense bijection between token strings and ids 0..size()-1, in insertion
/// order.
class Vocabulary {
 public:
  Vocabulary() = default;

  /// Builds from tokens in first-occurrence order.
  static Vocabulary from_corpus(const Corpus& corpus);
  static Vocabulary from_tokens(std::span<const std::string> tokens);

  /// Returns the id of `token`, inserting it if new.
  TokenId add(std::string_view token);
  std::optional<TokenId> find(std::string_view token) const;
  const std::string& token(TokenId id) const { return tokens_.at(id); }
  std::size_t size() const noexcept { return tokens_.size(); }
  bool empty() const noexcept { return tokens_.empty(); }
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.tokens_ == b.tokens_; }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept { return std::hash<std::string_view>{}(s); }
  };
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TokenId, Hash, std::equal_to<>> ids_;
};

}  // namespace dosdetect
