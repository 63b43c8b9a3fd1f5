#include "dosdetect/eval.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <set>

#include "dosdetect/error.hpp"
#include "test_util.hpp"

namespace dosdetect {
namespace {

std::vector<RankedTweet> ranking(const std::string& gold) {
  std::vector<RankedTweet> r;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    RankedTweet t;
    t.tweet.id = std::to_string(i);
    t.tweet.label = gold[i] == 'A' ? Label::Attack : (gold[i] == 'N' ? Label::NonAttack : Label::Unlabeled);
    t.rank = i + 1;
    r.push_back(t);
  }
  return r;
}

std::vector<std::size_t> iota_xs(std::size_t n) {
  std::vector<std::size_t> xs(n);
  std::iota(xs.begin(), xs.end(), std::size_t{1});
  return xs;
}

TEST(PrecisionRecall, Examples) {
  const std::vector<std::size_t> two = {2};
  const auto curve = precision_recall_curve(ranking("AANA"), two);
  ASSERT_EQ(curve.points.size(), 1u);
  EXPECT_EQ(curve.points[0].precision, 1.0);
  EXPECT_DOUBLE_EQ(curve.points[0].recall, 2.0 / 3.0);

  const std::vector<std::size_t> all = {4};
  const auto perfect = precision_recall_curve(ranking("AAAA"), all);
  EXPECT_EQ(perfect.points[0].precision, 1.0);
  EXPECT_EQ(perfect.points[0].recall, 1.0);

  const std::vector<std::size_t> one = {1};
  EXPECT_EQ(precision_recall_curve(ranking("NAAA"), one).points[0].precision, 0.0);
}

TEST(PrecisionRecall, Errors) {
  const std::vector<std::size_t> xs = {1, 2};
  EXPECT_THROW(precision_recall_curve(ranking("AUA"), xs), Error);
  const std::vector<std::size_t> zero = {0};
  EXPECT_THROW(precision_recall_curve(ranking("AN"), zero), Error);
  const std::vector<std::size_t> unsorted = {2, 1};
  EXPECT_THROW(precision_recall_curve(ranking("AN"), unsorted), Error);
  const std::vector<std::size_t> too_far = {3};
  EXPECT_THROW(precision_recall_curve(ranking("AN"), too_far), Error);
}

TEST(PrecisionRecall, NoGoldAttacksFlagged) {
  const std::vector<std::size_t> xs = {1, 3};
  const auto curve = precision_recall_curve(ranking("NNN"), xs);
  EXPECT_TRUE(curve.no_gold_attacks);
  for (const auto& p : curve.points) EXPECT_EQ(p.recall, 0.0);
}

TEST(PrecisionRecall, FilteredRankingUsesExternalDenominator) {
  CurveOptions options;
  options.total_gold_attacks = 4;
  const std::vector<std::size_t> xs = {1, 2, 5};
  const auto curve = precision_recall_curve(ranking("AN"), xs, options);
  EXPECT_EQ(curve.points[2].labeled, 2u);
  EXPECT_EQ(curve.points[2].precision, 0.5);
  EXPECT_EQ(curve.points[2].recall, 0.25);
}

TEST(PrecisionRecallProperty, CountingIdentityAndMonotoneRecall) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    std::string gold;
    const std::size_t n = 1 + rng() % 120;
    for (std::size_t i = 0; i < n; ++i) gold += rng() % 3 == 0 ? 'A' : 'N';
    const auto curve = precision_recall_curve(ranking(gold), iota_xs(n));
    const double attacks = static_cast<double>(std::count(gold.begin(), gold.end(), 'A'));
    double last_recall = 0.0;
    for (const auto& p : curve.points) {
      const double tp = p.precision * static_cast<double>(p.x);
      EXPECT_NEAR(tp, std::round(tp), 1e-9);
      EXPECT_EQ(static_cast<std::size_t>(std::round(tp)), p.true_positives);
      EXPECT_EQ(p.true_positives + (p.x - p.true_positives), p.x);
      EXPECT_GE(p.recall, last_recall);
      last_recall = p.recall;
    }
    EXPECT_DOUBLE_EQ(curve.points.back().precision, attacks / static_cast<double>(n));
  }
}

TEST(Det, Points) {
  const std::vector<EvalPoint> curve = {{1, 1, 1, 1.0, 1.0}, {2, 2, 1, 0.5, 0.5}};
  const auto det = det_points(curve);
  ASSERT_EQ(det.size(), 2u);
  EXPECT_EQ(det[0].missed_detection_rate, 0.0);
  EXPECT_EQ(det[0].false_alarm_rate, 0.0);
  EXPECT_EQ(det[1].missed_detection_rate, 0.5);
  EXPECT_EQ(det[1].false_alarm_rate, 0.5);

  const auto full = precision_recall_curve(ranking("ANANNAAN"), iota_xs(8));
  const auto det_full = det_points(full.points);
  for (std::size_t i = 1; i < det_full.size(); ++i) {
    EXPECT_LE(det_full[i].missed_detection_rate, det_full[i - 1].missed_detection_rate);
  }
}

TEST(Synthetic, ZeroOverlapKeepsVocabulariesApart) {
  const auto data = generate_synthetic({50, 30, 40, 10, 8, 0.0, 3});
  for (const auto& t : data.event.tweets) {
    for (const auto& token : t.tokens) {
      const bool attack_word = token.rfind("atk", 0) == 0;
      EXPECT_EQ(attack_word, t.label == Label::Attack) << token;
    }
  }
}

TEST(Synthetic, ShapeLabelsAndDeterminism) {
  const SynthSpec spec{40, 10, 30, 8, 6, 0.3, 9};
  const auto data = generate_synthetic(spec);
  EXPECT_EQ(data.baseline.size(), 40u);
  EXPECT_EQ(data.baseline.window_tag, WindowTag::Baseline);
  EXPECT_EQ(data.event.size(), 50u);
  EXPECT_TRUE(data.event.fully_labeled());
  std::size_t attacks = 0;
  std::set<std::string> ids;
  for (const auto& t : data.event.tweets) {
    attacks += t.label == Label::Attack;
    ids.insert(t.id);
    EXPECT_EQ(t.tokens.size(), 6u);
    EXPECT_EQ(preprocess(t.raw_text, TokenizerConfig::english()), t.tokens);
  }
  EXPECT_EQ(attacks, 10u);
  EXPECT_EQ(ids.size(), 50u);
  for (const auto& t : data.baseline.tweets) {
    for (const auto& token : t.tokens) EXPECT_EQ(token.rfind("bg9w", 0), 0u);
  }

  const auto again = generate_synthetic(spec);
  for (std::size_t i = 0; i < data.event.size(); ++i) EXPECT_EQ(again.event.tweets[i].tokens, data.event.tweets[i].tokens);
}

TEST(Synthetic, NoAttacksAndValidation) {
  const auto data = generate_synthetic({20, 0, 10, 5, 4, 0.5, 1});
  for (const auto& t : data.event.tweets) EXPECT_EQ(t.label, Label::NonAttack);
  EXPECT_THROW(generate_synthetic({20, 5, 10, 5, 4, 1.5, 1}), Error);
  EXPECT_THROW(generate_synthetic({0, 5, 10, 5, 4, 0.5, 1}), Error);
}

TEST(Synthetic, EntitiesHaveDistinctBackgroundVocabularies) {
  const auto a = generate_synthetic({30, 5, 20, 5, 5, 0.3, 7});
  const auto b = generate_synthetic({30, 5, 20, 5, 5, 0.3, 11});
  const Vocabulary va = Vocabulary::from_corpus(a.baseline);
  const Vocabulary vb = Vocabulary::from_corpus(b.baseline);
  for (const auto& token : vb.tokens()) EXPECT_FALSE(va.find(token));
}

class SweepTest : public ::testing::Test {
 protected:
  static SweepConfig config() {
    SweepConfig c;
    c.settings.lda_iterations = 60;
    c.settings.inference_iterations = 20;
    c.settings.seed = 3;
    c.xs = iota_xs(40);
    return c;
  }
  SyntheticCorpora data_ = generate_synthetic({80, 30, 60, 12, 10, 0.3, 7});
};

TEST_F(SweepTest, EmptyScales) {
  EXPECT_TRUE(parameter_sweep(data_.baseline, data_.event, config()).empty());
}

TEST_F(SweepTest, SingleScaleWithoutTree) {
  SweepConfig c = config();
  c.scales = {10};
  const auto results = parameter_sweep(data_.baseline, data_.event, c);
  ASSERT_EQ(results.size(), 1u);
  EXPECT_FALSE(results[0].use_tree);
  EXPECT_EQ(results[0].topic_count_scale, 10.0);
  ASSERT_EQ(results[0].curve.points.size(), 40u);
  for (std::size_t i = 1; i < 40; ++i) EXPECT_GT(results[0].curve.points[i].x, results[0].curve.points[i - 1].x);
}

TEST_F(SweepTest, TreeCellsAndDeterminism) {
  SweepConfig c = config();
  c.scales = {5, 10};
  c.with_and_without_tree = true;
  EXPECT_THROW(parameter_sweep(data_.baseline, data_.event, c), Error);

  c.tree_training = generate_synthetic({80, 30, 60, 12, 10, 0.3, 11}).event;
  const auto results = parameter_sweep(data_.baseline, data_.event, c);
  ASSERT_EQ(results.size(), 4u);
  EXPECT_FALSE(results[0].use_tree);
  EXPECT_TRUE(results[1].use_tree);
  EXPECT_EQ(results[2].topic_count_scale, 10.0);

  const auto again = parameter_sweep(data_.baseline, data_.event, c);
  for (std::size_t i = 0; i < results.size(); ++i) EXPECT_EQ(again[i].curve.points, results[i].curve.points);
}

TEST(EvalCsv, Formats) {
  testing::TempDir dir("eval");
  PrecisionRecallCurve curve;
  curve.points = {{1, 1, 1, 1.0, 0.5}, {2, 2, 1, 0.5, 0.5}};
  write_curve(dir / "c.csv", curve);
  EXPECT_EQ(testing::read_file(dir / "c.csv"), "x,precision,recall\n1,1,0.5\n2,0.5,0.5\n");
  write_det(dir / "d.csv", det_points(curve.points));
  EXPECT_EQ(testing::read_file(dir / "d.csv"), "x,missed_detection_rate,false_alarm_rate\n1,0.5,0\n2,0.5,0.5\n");
  const std::vector<SweepResult> sweep = {{10, true, curve}};
  write_sweep(dir / "s.csv", sweep);
  EXPECT_EQ(testing::read_file(dir / "s.csv"), "scale,tree,x,precision,recall\n10,1,1,1,0.5\n10,1,2,0.5,0.5\n");
}

}  // namespace
}  // namespace dosdetect
