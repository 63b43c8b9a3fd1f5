#include "dosdetect/corpus.hpp"

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include <random>

#include "dosdetect/error.hpp"
#include "test_util.hpp"

namespace dosdetect {
namespace {

using ::testing::HasSubstr;
using Tokens = std::vector<std::string>;

TokenizerConfig with_stopwords(std::set<std::string> words) {
  TokenizerConfig cfg;
  cfg.stopwords = std::move(words);
  return cfg;
}

TEST(Preprocess, BankOfAmericaTweet) {
  const auto tokens =
      preprocess("Death to Bank of America!!!! RIP my Hello Kitty card...", with_stopwords({"to", "of", "my"}));
  EXPECT_EQ(tokens, (Tokens{"death", "bank", "america", "rip", "hello", "kitty", "card"}));
}

TEST(Preprocess, BuiltInListHandlesTheSameTweet) {
  const auto tokens = preprocess("Death to Bank of America!!!! RIP my Hello Kitty card...", TokenizerConfig::english());
  EXPECT_EQ(tokens, (Tokens{"death", "bank", "america", "rip", "hello", "kitty", "card"}));
}

TEST(Preprocess, EmptyInput) {
  EXPECT_TRUE(preprocess("", TokenizerConfig::english()).empty());
  EXPECT_TRUE(preprocess("   \t\n ", TokenizerConfig::english()).empty());
  EXPECT_TRUE(preprocess("!!! ... ???", TokenizerConfig::english()).empty());
}

TEST(Preprocess, UrlKeptVerbatim) {
  EXPECT_EQ(preprocess("http://bit.ly/p5xpmz DOWN", with_stopwords({})), (Tokens{"http://bit.ly/p5xpmz", "down"}));
  EXPECT_EQ(preprocess("see https://x.co/a). now", with_stopwords({})), (Tokens{"see", "https://x.co/a).", "now"}));
}

TEST(Preprocess, UrlStrippedWhenNotKept) {
  TokenizerConfig cfg = with_stopwords({});
  cfg.keep_urls = false;
  EXPECT_EQ(preprocess("see https://x.co/a). now", cfg), (Tokens{"see", "https://x.co/a", "now"}));
}

TEST(Preprocess, MentionsHashtagsAndApostrophes) {
  EXPECT_EQ(preprocess("@ABC: #DDoS!! on America's site", with_stopwords({"on"})),
            (Tokens{"@abc", "#ddos", "america's", "site"}));
}

TEST(Preprocess, PunctuationKeptWhenStrippingDisabled) {
  TokenizerConfig cfg = with_stopwords({});
  cfg.strip_punctuation = false;
  EXPECT_EQ(preprocess("Down!!! (again)", cfg), (Tokens{"down!!!", "(again)"}));
}

TEST(Preprocess, UnicodeIsNormalizedAndLowercased) {
  // "CAFE" + combining acute accent composes to U+00E9 under NFC.
  const auto tokens = preprocess("CAFE\xCC\x81 \xC3\x9C" "BER", with_stopwords({}));
  EXPECT_EQ(tokens, (Tokens{"caf\xC3\xA9", "\xC3\xBC" "ber"}));
  EXPECT_EQ(preprocess("\xE2\x80\x9CQuoted\xE2\x80\x9D", with_stopwords({})), (Tokens{"quoted"}));
}

TEST(Preprocess, DefaultStopwordList) {
  const auto& words = default_stopwords();
  EXPECT_GT(words.size(), 150u);
  EXPECT_LT(words.size(), 200u);
  for (const auto& w : words) {
    EXPECT_EQ(preprocess(w, with_stopwords({})), (Tokens{w})) << w;
  }
}

// Random tweet-like strings mixing case, punctuation, URLs, mentions and
// non-ASCII letters.
std::string random_text(std::mt19937_64& rng) {
  static const std::vector<std::string> pieces = {
      "Bank", "DOWN", "down", "the", "To", "site's", "!!!", "...", "@Bofa_Help", "#DDoS", "http://t.co/Ab1",
      "https://X.com/p?q=1", "(outage)", "\"quoted\"", "caf\xC3\xA9", "CAFE\xCC\x81", "\xC3\x9C" "ber", "-",
      "'", "a'b", "100%", "rt", ":)", "\xE2\x80\x9C", "Online-Banking", "??"};
  std::uniform_int_distribution<std::size_t> count(0, 12);
  std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1);
  std::uniform_int_distribution<int> glue(0, 3);
  std::string text;
  const std::size_t n = count(rng);
  for (std::size_t i = 0; i < n; ++i) {
    text += pieces[pick(rng)];
    text += glue(rng) == 0 ? "" : (glue(rng) == 1 ? "\t" : " ");
  }
  return text;
}

std::string join(const Tokens& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

TEST(PreprocessProperty, IdempotentDeterministicAndStopwordFree) {
  std::mt19937_64 rng(20260101);
  for (bool keep_urls : {true, false}) {
    TokenizerConfig cfg = TokenizerConfig::english();
    cfg.keep_urls = keep_urls;
    for (int trial = 0; trial < 2000; ++trial) {
      const std::string text = random_text(rng);
      const Tokens tokens = preprocess(text, cfg);
      EXPECT_EQ(preprocess(text, cfg), tokens) << text;
      EXPECT_EQ(preprocess(join(tokens), cfg), tokens) << text;
      for (const auto& t : tokens) {
        EXPECT_FALSE(t.empty());
        EXPECT_EQ(cfg.stopwords.count(t), 0u) << t;
        EXPECT_EQ(preprocess(t, with_stopwords({})).size(), 1u) << t;
        for (char c : t) EXPECT_FALSE(c >= 'A' && c <= 'Z') << t;
      }
    }
  }
}

TEST(LoadCorpus, ReadsRecordsInOrder) {
  testing::TempDir dir("corpus");
  testing::write_file(dir / "c.jsonl",
                      "{\"id\":\"a\",\"text\":\"Bank site DOWN\"}\n"
                      "{\"text\":\"hello world\"}\n"
                      "\n"
                      "{\"id\":\"c\",\"text\":\"\"}\n");
  const Corpus c = load_corpus(dir / "c.jsonl", WindowTag::Baseline);
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c.window_tag, WindowTag::Baseline);
  EXPECT_EQ(c.tweets[0].id, "a");
  EXPECT_EQ(c.tweets[0].tokens, (Tokens{"bank", "site"}));
  EXPECT_EQ(c.tweets[1].id, "2");
  EXPECT_EQ(c.tweets[1].raw_text, "hello world");
  EXPECT_EQ(c.tweets[2].tokens, Tokens{});  // retained although empty
  EXPECT_EQ(c.tweets[0].label, Label::Unlabeled);
  EXPECT_FALSE(c.fully_labeled());
}

TEST(LoadCorpus, ReadsLabels) {
  testing::TempDir dir("corpus");
  testing::write_file(dir / "c.jsonl",
                      "{\"text\":\"site down\",\"label\":\"attack\"}\n"
                      "{\"text\":\"nice day\",\"label\":\"non_attack\"}\n");
  const Corpus c = load_corpus(dir / "c.jsonl", WindowTag::Event);
  EXPECT_EQ(c.tweets[0].label, Label::Attack);
  EXPECT_EQ(c.tweets[1].label, Label::NonAttack);
  EXPECT_TRUE(c.fully_labeled());
}

TEST(LoadCorpus, MalformedLineIsNamed) {
  testing::TempDir dir("corpus");
  testing::write_file(dir / "c.jsonl",
                      "{\"text\":\"one\"}\n{\"text\":\"two\"}\n{\"text\": oops}\n{\"text\":\"four\"}\n{\"text\":\"five\"}\n");
  try {
    load_corpus(dir / "c.jsonl", WindowTag::Event);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_THAT(e.what(), HasSubstr("line 3"));
  }
}

TEST(LoadCorpus, RejectsBadFields) {
  testing::TempDir dir("corpus");
  testing::write_file(dir / "a.jsonl", "{\"id\":\"x\"}\n");
  testing::write_file(dir / "b.jsonl", "{\"text\":\"t\",\"label\":\"maybe\"}\n");
  testing::write_file(dir / "c.jsonl", "[1,2]\n");
  testing::write_file(dir / "d.jsonl", "{\"text\":\"t\",\"id\":7}\n");
  for (const char* name : {"a.jsonl", "b.jsonl", "c.jsonl", "d.jsonl"}) {
    EXPECT_THROW(load_corpus(dir / name, WindowTag::Event), Error) << name;
  }
}

TEST(LoadCorpus, EmptyFile) {
  testing::TempDir dir("corpus");
  testing::write_file(dir / "empty.jsonl", "\n\n");
  try {
    load_corpus(dir / "empty.jsonl", WindowTag::Event);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_THAT(e.what(), HasSubstr("empty corpus"));
  }
  EXPECT_THROW(load_corpus(dir / "missing.jsonl", WindowTag::Event), Error);
}

TEST(LoadCorpus, SaveRoundTrip) {
  testing::TempDir dir("corpus");
  Corpus c;
  c.tweets.push_back(testing::tweet_of({"site", "outage"}, Label::Attack, "1"));
  c.tweets.push_back(testing::tweet_of({"nice", "day"}, Label::Unlabeled, "2"));
  c.tweets[0].raw_text = "Site, \"OUTAGE\"";
  save_corpus(c, dir / "c.jsonl");
  const Corpus back = load_corpus(dir / "c.jsonl", WindowTag::Event);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back.tweets[0].raw_text, "Site, \"OUTAGE\"");
  EXPECT_EQ(back.tweets[0].tokens, (Tokens{"site", "outage"}));
  EXPECT_EQ(back.tweets[0].label, Label::Attack);
  EXPECT_EQ(back.tweets[1].label, Label::Unlabeled);
}

TEST(LoadStopwords, LowercasesAndSkipsBlanks) {
  testing::TempDir dir("stop");
  testing::write_file(dir / "stop.txt", "The\n\n  Bank \nAMERICA\n");
  EXPECT_EQ(load_stopwords(dir / "stop.txt"), (std::set<std::string>{"the", "bank", "america"}));
  EXPECT_THROW(load_stopwords(dir / "nope.txt"), Error);
}

}  // namespace
}  // namespace dosdetect
