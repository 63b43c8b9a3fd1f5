#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace dosdetect {

enum class Label { Attack, NonAttack, Unlabeled };

/// "attack" / "non_attack" / "unlabeled".
std::string_view to_string(Label label);

/// Parses the file-format spelling of a label; nullopt for anything else.
std::optional<Label> parse_label(std::string_view text);

struct Tweet {
  std::string id;
  std::string raw_text;
  std::vector<std::string> tokens;
  Label label = Label::Unlabeled;
};

enum class WindowTag { Baseline, Event };

struct Corpus {
  std::vector<Tweet> tweets;
  WindowTag window_tag = WindowTag::Event;

  std::size_t size() const noexcept { return tweets.size(); }
  bool empty() const noexcept { return tweets.empty(); }
  /// True when every tweet carries Attack or NonAttack.
  bool fully_labeled() const;
};

struct TokenizerConfig {
  std::set<std::string> stopwords;
  bool keep_urls = true;
  bool strip_punctuation = true;

  /// Built-in English stopword list, URLs kept, punctuation stripped.
  static TokenizerConfig english();
};

/// The built-in English stopword list.
const std::set<std::string>& default_stopwords();

/// Reads one stopword per line (UTF-8). Entries are lowercased; blank lines
/// are ignored.
std::set<std::string> load_stopwords(const std::filesystem::path& path);

/// Tokenizes one message.
///
/// The text is NFC-normalized and lowercased, then split on Unicode
/// whitespace. A chunk starting with "http://" or "https://" is kept verbatim
/// when cfg.keep_urls is set. Other chunks lose leading and trailing
/// characters that are not letters, digits, '#' or '@' (when
/// cfg.strip_punctuation is set); internal punctuation such as the apostrophe
/// in "america's" survives. Empty chunks and stopwords are dropped.
std::vector<std::string> preprocess(std::string_view raw_text, const TokenizerConfig& cfg);

/// Parses one JSON-lines record into a tweet. `line_number` is 1-based and
/// used for the default id and for error messages.
Tweet parse_record(std::string_view line, std::size_t line_number, const TokenizerConfig& cfg);

/// Loads a JSON-lines corpus: one object per line with required "text" and
/// optional "id" and "label". Blank lines are skipped. Throws Error naming the
/// line of the first malformed record, or "empty corpus" when no record exists.
Corpus load_corpus(const std::filesystem::path& path, WindowTag window_tag,
                   const TokenizerConfig& cfg = TokenizerConfig::english());

/// Writes a corpus in the format read by load_corpus.
void save_corpus(const Corpus& corpus, const std::filesystem::path& path);

}  // namespace dosdetect
