#include "dosdetect/vocabulary.hpp"

#include "dosdetect/error.hpp"

namespace dosdetect {

Vocabulary Vocabulary::from_corpus(const Corpus& corpus) {
  Vocabulary vocab;
  for (const Tweet& tweet : corpus.tweets) {
    for (const std::string& token : tweet.tokens) vocab.add(token);
  }
  return vocab;
}

Vocabulary Vocabulary::from_tokens(std::span<const std::string> tokens) {
  Vocabulary vocab;
  for (const std::string& token : tokens) {
    const std::size_t before = vocab.size();
    vocab.add(token);
    if (vocab.size() == before) throw Error("duplicate vocabulary entry \"" + token + "\"");
  }
  return vocab;
}

TokenId Vocabulary::add(std::string_view token) {
  if (auto it = ids_.find(token); it != ids_.end()) return it->second;
  const TokenId id = tokens_.size();
  tokens_.emplace_back(token);
  ids_.emplace(tokens_.back(), id);
  return id;
}

std::optional<TokenId> Vocabulary::find(std::string_view token) const {
  if (auto it = ids_.find(token); it != ids_.end()) return it->second;
  return std::nullopt;
}

}  // namespace dosdetect
