#include "dosdetect/pipeline.hpp"

#include <fstream>
#include <future>
#include <numeric>

#include "dosdetect/csv.hpp"
#include "dosdetect/error.hpp"

namespace dosdetect {
namespace {

template <class F>
auto stage(const char* name, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

Corpus load_window(const std::filesystem::path& path, WindowTag tag, const TokenizerConfig& tokenizer) {
  if (path.empty()) throw Error("no corpus path given");
  return load_corpus(path, tag, tokenizer);
}

std::vector<std::size_t> evaluation_grid(const PipelineConfig& config, std::size_t corpus_size) {
  if (config.xs) {
    if (config.xs->empty()) throw Error("empty evaluation grid");
    return *config.xs;
  }
  std::vector<std::size_t> xs(std::min(config.max_x, corpus_size));
  std::iota(xs.begin(), xs.end(), std::size_t{1});
  if (xs.empty()) throw Error("empty evaluation grid");
  return xs;
}

void write_severity(const std::filesystem::path& path, const DetectSummary& s, const PipelineConfig& config,
                    std::size_t n_all) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  if (!s.labeling_applied) {
    out << "labeling=none\n";
    return;
  }
  out << "n_attack=" << s.n_attack << '\n';
  out << "n_all=" << n_all << '\n';
  out << "beta=" << csv::format_double(config.severity_beta) << '\n';
  if (!s.severity) {
    out << "n_user=unset\n";
    out << "volume_share=" << csv::format_double(static_cast<double>(s.n_attack) / static_cast<double>(n_all))
        << '\n';
    return;
  }
  out << "n_user=" << *config.n_user << '\n';
  out << "volume_share=" << csv::format_double(s.severity->volume_share) << '\n';
  out << "audience_share=" << csv::format_double(s.severity->audience_share) << '\n';
  out << "severity=" << csv::format_double(s.severity->blended) << '\n';
}

struct Windows {
  Corpus baseline;
  Corpus event;
};

Windows load_windows(const PipelineConfig& config) {
  const TokenizerConfig tokenizer = stage("config", [&] { return config.tokenizer(); });
  Windows w;
  w.baseline = stage("load-baseline", [&] { return load_window(config.baseline_path, WindowTag::Baseline, tokenizer); });
  w.event = stage("load-event", [&] { return load_window(config.event_path, WindowTag::Event, tokenizer); });
  return w;
}

Detection detect_stage(const PipelineConfig& config, const Windows& w) {
  const DetectorSettings& settings = config.detector;
  std::future<LdaModel> baseline_future = std::async(std::launch::async, [&] {
    return stage("train-baseline", [&] {
      if (config.baseline_model_path) return LdaModel::load(*config.baseline_model_path);
      return train(w.baseline, settings.hyperparams_for(w.baseline.size(), kBaselineStream));
    });
  });
  LdaModel event_model = stage("train-event", [&] {
    if (config.event_model_path) return LdaModel::load(*config.event_model_path);
    return train(w.event, settings.hyperparams_for(w.event.size(), kEventStream));
  });
  LdaModel baseline_model = baseline_future.get();
  return stage("rank", [&] {
    return detect_with_models(std::move(event_model), std::move(baseline_model), w.event, settings);
  });
}

std::optional<TweetClassifier> load_tree(const PipelineConfig& config) {
  if (!config.use_tree) return std::nullopt;
  return stage("classifier", [&] { return TweetClassifier::load(*config.tree_path); });
}

}  // namespace

void PipelineConfig::validate() const {
  if (top_x && score_threshold) throw Error("set at most one of top_x and score_threshold");
  if (use_tree && !tree_path) throw Error("use_tree requires a tree file");
  if (!(severity_beta >= 0.0 && severity_beta <= 1.0)) throw Error("severity beta must lie in [0, 1]");
  if (n_user && *n_user == 0) throw Error("n_user must be positive");
  if (event_model_path.has_value() != baseline_model_path.has_value()) {
    throw Error("give both saved models or neither");
  }
}

TokenizerConfig PipelineConfig::tokenizer() const {
  TokenizerConfig cfg = TokenizerConfig::english();
  if (stopwords_path) cfg.stopwords = load_stopwords(*stopwords_path);
  cfg.keep_urls = keep_urls;
  return cfg;
}

DetectSummary run_detect(const PipelineConfig& config) {
  stage("config", [&] { config.validate(); });
  const Windows w = load_windows(config);
  const std::optional<TweetClassifier> tree = load_tree(config);

  DetectSummary summary{detect_stage(config, w), {}, false, 0, std::nullopt};
  const std::vector<RankedTweet>& ranked = summary.detection.ranked;

  if (tree) {
    summary.filtered = stage("classifier", [&] { return filter_ranked(ranked, tree->tree, tree->vocab); });
  }
  const std::vector<RankedTweet>& labeled_from = tree ? summary.filtered : ranked;

  stage("label", [&] {
    if (config.top_x) {
      summary.n_attack = label_top_x(labeled_from, *config.top_x).size();
      summary.labeling_applied = true;
    } else if (config.score_threshold) {
      summary.n_attack = count_above_threshold(labeled_from, *config.score_threshold);
      summary.labeling_applied = true;
    } else if (tree) {
      summary.n_attack = summary.filtered.size();
      summary.labeling_applied = true;
    }
  });

  if (summary.labeling_applied && config.n_user) {
    summary.severity = stage("severity", [&] {
      return severity_report({summary.n_attack, w.event.size(), *config.n_user, config.severity_beta});
    });
  }

  stage("write", [&] {
    std::filesystem::create_directories(config.out_dir);
    summary.detection.event_model.save(config.out_dir / "event_model.json");
    summary.detection.baseline_model.save(config.out_dir / "baseline_model.json");
    write_topic_table(config.out_dir / "topics.csv", summary.detection.topic_scores, summary.detection.event_model);
    write_ranked(config.out_dir / "ranked.csv", ranked);
    if (tree) write_ranked(config.out_dir / "filtered.csv", summary.filtered);
    write_severity(config.out_dir / "severity.txt", summary, config, w.event.size());
  });
  return summary;
}

PrecisionRecallCurve run_eval(const PipelineConfig& config) {
  stage("config", [&] { config.validate(); });
  const Windows w = load_windows(config);
  stage("eval", [&] {
    if (!w.event.fully_labeled()) throw Error("event corpus must carry a gold label on every tweet");
  });
  const std::vector<std::size_t> xs = stage("eval", [&] { return evaluation_grid(config, w.event.size()); });
  const std::optional<TweetClassifier> tree = load_tree(config);
  const Detection detection = detect_stage(config, w);

  PrecisionRecallCurve curve =
      stage("eval", [&] { return evaluate_ranking(detection.ranked, xs, tree ? &*tree : nullptr); });
  stage("write", [&] {
    std::filesystem::create_directories(config.out_dir);
    write_curve(config.out_dir / "curve.csv", curve);
    write_det(config.out_dir / "det.csv", det_points(curve.points));
  });
  return curve;
}

std::vector<SweepResult> run_sweep(const PipelineConfig& config) {
  stage("config", [&] { config.validate(); });
  const Windows w = load_windows(config);
  stage("eval", [&] {
    if (!w.event.fully_labeled()) throw Error("event corpus must carry a gold label on every tweet");
  });

  SweepConfig sweep;
  sweep.scales = config.scales;
  sweep.xs = stage("eval", [&] { return evaluation_grid(config, w.event.size()); });
  sweep.settings = config.detector;
  if (config.tree_training_path) {
    sweep.with_and_without_tree = true;
    sweep.tree_training = stage("load-tree-training", [&] {
      return load_corpus(*config.tree_training_path, WindowTag::Event, config.tokenizer());
    });
  }
  std::vector<SweepResult> results = stage("sweep", [&] { return parameter_sweep(w.baseline, w.event, sweep); });
  stage("write", [&] {
    std::filesystem::create_directories(config.out_dir);
    write_sweep(config.out_dir / "sweep.csv", results);
  });
  return results;
}

}  // namespace dosdetect
