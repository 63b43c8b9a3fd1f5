#include "dosdetect/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>
#include <unicode/normalizer2.h>
#include <unicode/locid.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include "dosdetect/error.hpp"

namespace dosdetect {
namespace {

using icu::UnicodeString;

const icu::Normalizer2& nfc() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* norm = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || norm == nullptr) {
    throw Error("ICU NFC normalizer unavailable");
  }
  return *norm;
}

UnicodeString normalize_lower(std::string_view text) {
  UnicodeString s = UnicodeString::fromUTF8(icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  const icu::Normalizer2& norm = nfc();
  UErrorCode status = U_ZERO_ERROR;
  s = norm.normalize(s, status);
  s.toLower(icu::Locale::getRoot());
  // Lowercasing can produce decomposed sequences (e.g. U+0130).
  s = norm.normalize(s, status);
  if (U_FAILURE(status)) throw Error("unicode normalization failed");
  return s;
}

bool keep_at_edge(UChar32 c) {
  return u_isalnum(c) || c == '#' || c == '@';
}

bool is_url(const UnicodeString& chunk) {
  return chunk.startsWith(UnicodeString(u"http://")) || chunk.startsWith(UnicodeString(u"https://"));
}

UnicodeString strip_edges(const UnicodeString& chunk) {
  int32_t begin = 0;
  int32_t end = chunk.length();
  while (begin < end) {
    const UChar32 c = chunk.char32At(begin);
    if (keep_at_edge(c)) break;
    begin = chunk.moveIndex32(begin, 1);
  }
  while (end > begin) {
    const int32_t prev = chunk.moveIndex32(end, -1);
    if (keep_at_edge(chunk.char32At(prev))) break;
    end = prev;
  }
  return UnicodeString(chunk, begin, end - begin);
}

std::string to_utf8(const UnicodeString& s) {
  std::string out;
  s.toUTF8String(out);
  return out;
}

const char* const kEnglishStopwords[] = {
    "a", "about", "above", "after", "again", "against", "all", "am", "an", "and", "any", "are",
    "aren't", "as", "at", "be", "because", "been", "before", "being", "below", "between", "both",
    "but", "by", "can't", "cannot", "could", "couldn't", "did", "didn't", "do", "does", "doesn't",
    "doing", "don't", "down", "during", "each", "few", "for", "from", "further", "had", "hadn't",
    "has", "hasn't", "have", "haven't", "having", "he", "he'd", "he'll", "he's", "her", "here",
    "here's", "hers", "herself", "him", "himself", "his", "how", "how's", "i", "i'd", "i'll", "i'm",
    "i've", "if", "in", "into", "is", "isn't", "it", "it's", "its", "itself", "let's", "me", "more",
    "most", "mustn't", "my", "myself", "no", "nor", "not", "of", "off", "on", "once", "only", "or",
    "other", "ought", "our", "ours", "ourselves", "out", "over", "own", "same", "shan't", "she",
    "she'd", "she'll", "she's", "should", "shouldn't", "so", "some", "such", "than", "that",
    "that's", "the", "their", "theirs", "them", "themselves", "then", "there", "there's", "these",
    "they", "they'd", "they'll", "they're", "they've", "this", "those", "through", "to", "too",
    "under", "until", "up", "very", "was", "wasn't", "we", "we'd", "we'll", "we're", "we've", "were",
    "weren't", "what", "what's", "when", "when's", "where", "where's", "which", "while", "who",
    "who's", "whom", "why", "why's", "with", "won't", "would", "wouldn't", "you", "you'd", "you'll",
    "you're", "you've", "your", "yours", "yourself", "yourselves",
};

}  // namespace

std::string_view to_string(Label label) {
  switch (label) {
    case Label::Attack:
      return "attack";
    case Label::NonAttack:
      return "non_attack";
    case Label::Unlabeled:
      return "unlabeled";
  }
  return "unlabeled";
}

std::optional<Label> parse_label(std::string_view text) {
  if (text == "attack") return Label::Attack;
  if (text == "non_attack") return Label::NonAttack;
  if (text == "unlabeled") return Label::Unlabeled;
  return std::nullopt;
}

bool Corpus::fully_labeled() const {
  return std::all_of(tweets.begin(), tweets.end(),
                     [](const Tweet& t) { return t.label != Label::Unlabeled; });
}

const std::set<std::string>& default_stopwords() {
  static const std::set<std::string> words(std::begin(kEnglishStopwords), std::end(kEnglishStopwords));
  return words;
}

TokenizerConfig TokenizerConfig::english() {
  TokenizerConfig cfg;
  cfg.stopwords = default_stopwords();
  return cfg;
}

std::set<std::string> load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open stopword file " + path.string());
  std::set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    const UnicodeString word = normalize_lower(line).trim();
    if (!word.isEmpty()) words.insert(to_utf8(word));
  }
  return words;
}

std::vector<std::string> preprocess(std::string_view raw_text, const TokenizerConfig& cfg) {
  const UnicodeString text = normalize_lower(raw_text);
  std::vector<std::string> tokens;

  auto emit = [&](const UnicodeString& chunk) {
    UnicodeString token = chunk;
    if (!(cfg.keep_urls && is_url(chunk)) && cfg.strip_punctuation) {
      token = strip_edges(chunk);
    }
    if (token.isEmpty()) return;
    std::string utf8 = to_utf8(token);
    if (cfg.stopwords.count(utf8) != 0) return;
    tokens.push_back(std::move(utf8));
  };

  int32_t start = -1;
  for (int32_t i = 0; i < text.length(); i = text.moveIndex32(i, 1)) {
    const bool space = u_isUWhiteSpace(text.char32At(i));
    if (space && start >= 0) {
      emit(UnicodeString(text, start, i - start));
      start = -1;
    } else if (!space && start < 0) {
      start = i;
    }
  }
  if (start >= 0) emit(UnicodeString(text, start));
  return tokens;
}

Tweet parse_record(std::string_view line, std::size_t line_number, const TokenizerConfig& cfg) {
  const std::string where = "line " + std::to_string(line_number) + ": ";
  nlohmann::json record;
  try {
    record = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(where + "malformed record (" + e.what() + ")");
  }
  if (!record.is_object()) throw Error(where + "record is not an object");

  Tweet tweet;
  const auto text = record.find("text");
  if (text == record.end() || !text->is_string()) {
    throw Error(where + "missing string field \"text\"");
  }
  tweet.raw_text = text->get<std::string>();

  if (const auto id = record.find("id"); id != record.end()) {
    if (!id->is_string()) throw Error(where + "field \"id\" must be a string");
    tweet.id = id->get<std::string>();
  } else {
    tweet.id = std::to_string(line_number);
  }

  if (const auto label = record.find("label"); label != record.end()) {
    if (!label->is_string()) throw Error(where + "field \"label\" must be a string");
    const auto parsed = parse_label(label->get<std::string>());
    if (!parsed) throw Error(where + "unknown label \"" + label->get<std::string>() + "\"");
    tweet.label = *parsed;
  }

  tweet.tokens = preprocess(tweet.raw_text, cfg);
  return tweet;
}

Corpus load_corpus(const std::filesystem::path& path, WindowTag window_tag, const TokenizerConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open corpus file " + path.string());

  Corpus corpus;
  corpus.window_tag = window_tag;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); })) {
      continue;
    }
    try {
      corpus.tweets.push_back(parse_record(line, line_number, cfg));
    } catch (const Error& e) {
      throw Error(path.string() + ": " + e.what());
    }
  }
  if (corpus.empty()) throw Error(path.string() + ": empty corpus");
  return corpus;
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write corpus file " + path.string());
  for (const Tweet& t : corpus.tweets) {
    nlohmann::json record = {{"id", t.id}, {"text", t.raw_text}};
    if (t.label != Label::Unlabeled) record["label"] = std::string(to_string(t.label));
    out << record.dump() << '\n';
  }
}

}  // namespace dosdetect
