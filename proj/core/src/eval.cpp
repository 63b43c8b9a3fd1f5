#include "dosdetect/eval.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <future>

#include "dosdetect/csv.hpp"
#include "dosdetect/error.hpp"
#include "dosdetect/random.hpp"

namespace dosdetect {

PrecisionRecallCurve precision_recall_curve(std::span<const RankedTweet> ranked, std::span<const std::size_t> xs,
                                            const CurveOptions& options) {
  std::size_t gold_in_ranking = 0;
  for (const RankedTweet& r : ranked) {
    if (r.tweet.label == Label::Unlabeled) throw Error("tweet " + r.tweet.id + " has no gold label");
    if (r.tweet.label == Label::Attack) ++gold_in_ranking;
  }
  const std::size_t gold = options.total_gold_attacks.value_or(gold_in_ranking);
  if (gold < gold_in_ranking) throw Error("total_gold_attacks is smaller than the attacks in the ranking");

  PrecisionRecallCurve curve;
  curve.no_gold_attacks = gold == 0;
  std::size_t tp = 0;
  std::size_t consumed = 0;
  std::size_t previous = 0;
  for (std::size_t x : xs) {
    if (x == 0) throw Error("evaluation cut-offs must be at least 1");
    if (x <= previous) throw Error("evaluation cut-offs must be strictly increasing");
    if (x > ranked.size() && !options.total_gold_attacks) {
      throw Error("cut-off " + std::to_string(x) + " exceeds the " + std::to_string(ranked.size()) +
                  " ranked tweets");
    }
    previous = x;
    const std::size_t labeled = std::min(x, ranked.size());
    for (; consumed < labeled; ++consumed) {
      if (ranked[consumed].tweet.label == Label::Attack) ++tp;
    }
    EvalPoint p;
    p.x = x;
    p.labeled = labeled;
    p.true_positives = tp;
    p.precision = labeled == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(labeled);
    p.recall = gold == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(gold);
    curve.points.push_back(p);
  }
  return curve;
}

std::vector<DetPoint> det_points(std::span<const EvalPoint> curve) {
  std::vector<DetPoint> out;
  out.reserve(curve.size());
  for (const EvalPoint& p : curve) out.push_back({p.x, 1.0 - p.recall, 1.0 - p.precision});
  return out;
}

void SynthSpec::validate() const {
  if (n_background == 0) throw Error("synth: n_background must be positive");
  if (background_vocab_size == 0 || attack_vocab_size == 0) throw Error("synth: vocabulary sizes must be positive");
  if (tokens_per_doc == 0) throw Error("synth: tokens_per_doc must be positive");
  if (!(overlap_fraction >= 0.0 && overlap_fraction <= 1.0)) throw Error("synth: overlap_fraction must lie in [0, 1]");
}

namespace {

std::vector<double> zipf_cumulative(std::size_t n) {
  std::vector<double> cumulative(n);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += 1.0 / static_cast<double>(i + 1);
    cumulative[i] = acc;
  }
  return cumulative;
}

Tweet make_tweet(std::string id, std::vector<std::string> tokens, Label label) {
  Tweet t;
  t.id = std::move(id);
  for (const std::string& token : tokens) {
    if (!t.raw_text.empty()) t.raw_text += ' ';
    t.raw_text += token;
  }
  t.tokens = std::move(tokens);
  t.label = label;
  return t;
}

}  // namespace

SyntheticCorpora generate_synthetic(const SynthSpec& spec) {
  spec.validate();
  const std::string prefix = "bg" + std::to_string(spec.seed) + "w";
  const std::vector<double> background = zipf_cumulative(spec.background_vocab_size);
  const std::vector<double> attack = zipf_cumulative(spec.attack_vocab_size);

  Rng rng(spec.seed);
  auto background_doc = [&] {
    std::vector<std::string> tokens;
    for (std::size_t i = 0; i < spec.tokens_per_doc; ++i) {
      tokens.push_back(prefix + std::to_string(sample_discrete(rng, background)));
    }
    return tokens;
  };
  auto attack_doc = [&] {
    std::vector<std::string> tokens;
    for (std::size_t i = 0; i < spec.tokens_per_doc; ++i) {
      if (uniform01(rng) < spec.overlap_fraction) {
        tokens.push_back(prefix + std::to_string(sample_discrete(rng, background)));
      } else {
        tokens.push_back("atk" + std::to_string(sample_discrete(rng, attack)));
      }
    }
    return tokens;
  };

  SyntheticCorpora out;
  out.baseline.window_tag = WindowTag::Baseline;
  out.event.window_tag = WindowTag::Event;
  const std::string seed_tag = std::to_string(spec.seed);
  for (std::size_t i = 0; i < spec.n_background; ++i) {
    out.baseline.tweets.push_back(make_tweet("s" + seed_tag + "-b" + std::to_string(i), background_doc(),
                                             Label::Unlabeled));
  }
  for (std::size_t i = 0; i < spec.n_background; ++i) {
    out.event.tweets.push_back(make_tweet("s" + seed_tag + "-n" + std::to_string(i), background_doc(),
                                          Label::NonAttack));
  }
  for (std::size_t i = 0; i < spec.n_attack; ++i) {
    out.event.tweets.push_back(make_tweet("s" + seed_tag + "-a" + std::to_string(i), attack_doc(), Label::Attack));
  }
  auto& tweets = out.event.tweets;
  for (std::size_t i = tweets.size(); i > 1; --i) {
    std::swap(tweets[i - 1], tweets[uniform_index(rng, i)]);
  }
  return out;
}

PrecisionRecallCurve evaluate_ranking(std::span<const RankedTweet> ranked, std::span<const std::size_t> xs,
                                      const TweetClassifier* filter) {
  if (filter == nullptr) return precision_recall_curve(ranked, xs);
  std::size_t gold = 0;
  for (const RankedTweet& r : ranked) {
    if (r.tweet.label == Label::Attack) ++gold;
  }
  const std::vector<RankedTweet> kept = filter_ranked(ranked, filter->tree, filter->vocab);
  CurveOptions options;
  options.total_gold_attacks = gold;
  return precision_recall_curve(kept, xs, options);
}

std::vector<SweepResult> parameter_sweep(const Corpus& baseline, const Corpus& event, const SweepConfig& config) {
  std::optional<TweetClassifier> classifier;
  if (config.with_and_without_tree) {
    if (!config.tree_training) throw Error("sweep: tree evaluation requested without a tree training corpus");
    classifier = train_classifier(*config.tree_training, config.min_leaf);
  }

  auto run_cell = [&](double scale) {
    DetectorSettings settings = config.settings;
    settings.topic_count_scale = scale;
    settings.seed = mix_seed(config.settings.seed, std::bit_cast<std::uint64_t>(scale));
    // Cells already run in parallel.
    settings.threads = 1;
    const Detection detection = detect(baseline, event, settings);
    std::vector<SweepResult> cell;
    cell.push_back({scale, false, evaluate_ranking(detection.ranked, config.xs, nullptr)});
    if (classifier) cell.push_back({scale, true, evaluate_ranking(detection.ranked, config.xs, &*classifier)});
    return cell;
  };

  std::vector<std::future<std::vector<SweepResult>>> pending;
  for (double scale : config.scales) pending.push_back(std::async(std::launch::async, run_cell, scale));
  std::vector<SweepResult> results;
  for (auto& f : pending) {
    for (SweepResult& r : f.get()) results.push_back(std::move(r));
  }
  return results;
}

void write_curve(const std::filesystem::path& path, const PrecisionRecallCurve& curve) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write curve file " + path.string());
  csv::write_row(out, "x", "precision", "recall");
  for (const EvalPoint& p : curve.points) csv::write_row(out, p.x, p.precision, p.recall);
}

void write_det(const std::filesystem::path& path, std::span<const DetPoint> points) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write DET file " + path.string());
  csv::write_row(out, "x", "missed_detection_rate", "false_alarm_rate");
  for (const DetPoint& p : points) csv::write_row(out, p.x, p.missed_detection_rate, p.false_alarm_rate);
}

void write_sweep(const std::filesystem::path& path, std::span<const SweepResult> results) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write sweep file " + path.string());
  csv::write_row(out, "scale", "tree", "x", "precision", "recall");
  for (const SweepResult& r : results) {
    for (const EvalPoint& p : r.curve.points) {
      csv::write_row(out, r.topic_count_scale, r.use_tree ? 1 : 0, p.x, p.precision, p.recall);
    }
  }
}

}  // namespace dosdetect
