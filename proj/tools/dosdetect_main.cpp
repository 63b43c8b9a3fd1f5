// dosdetect: rank event-window tweets by how likely they report a
// denial-of-service outage, and estimate the outage's severity.

#include <algorithm>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dosdetect/classifier.hpp"
#include "dosdetect/corpus.hpp"
#include "dosdetect/error.hpp"
#include "dosdetect/eval.hpp"
#include "dosdetect/pipeline.hpp"
#include "dosdetect/severity.hpp"

namespace {

using dosdetect::PipelineConfig;

// Optional-valued flags are parsed into plain storage and copied into the
// config only when given.
struct OptionalFlags {
  std::string stopwords;
  std::string event_model;
  std::string baseline_model;
  std::string tree;
  std::string tree_training;
  std::size_t top_x = 0;
  double score_threshold = 0.0;
  std::size_t n_user = 0;
  double dirichlet_alpha = 0.0;
  std::vector<std::size_t> xs;
  bool no_keep_urls = false;
};

struct CommandState {
  PipelineConfig config;
  OptionalFlags flags;
  CLI::Option* top_x = nullptr;
  CLI::Option* threshold = nullptr;
  CLI::Option* n_user = nullptr;
  CLI::Option* alpha = nullptr;
  CLI::Option* xs = nullptr;

  PipelineConfig resolve() const {
    PipelineConfig c = config;
    if (!flags.stopwords.empty()) c.stopwords_path = flags.stopwords;
    if (!flags.event_model.empty()) c.event_model_path = flags.event_model;
    if (!flags.baseline_model.empty()) c.baseline_model_path = flags.baseline_model;
    if (!flags.tree.empty()) {
      c.use_tree = true;
      c.tree_path = flags.tree;
    }
    if (!flags.tree_training.empty()) c.tree_training_path = flags.tree_training;
    if (top_x && top_x->count() > 0) c.top_x = flags.top_x;
    if (threshold && threshold->count() > 0) c.score_threshold = flags.score_threshold;
    if (n_user && n_user->count() > 0) c.n_user = flags.n_user;
    if (alpha && alpha->count() > 0) c.detector.dirichlet_alpha = flags.dirichlet_alpha;
    if (xs && xs->count() > 0) c.xs = flags.xs;
    c.keep_urls = !flags.no_keep_urls;
    return c;
  }
};

void add_pipeline_options(CLI::App& cmd, CommandState& s) {
  PipelineConfig& c = s.config;
  cmd.add_option("--config", "Flat key=value file; keys are long option names, command-line flags win");
  cmd.add_option("baseline", c.baseline_path, "Baseline-window corpus (JSON lines)")->required();
  cmd.add_option("event", c.event_path, "Event-window corpus (JSON lines)")->required();
  cmd.add_option("-o,--out", c.out_dir, "Output directory")->capture_default_str();
  cmd.add_option("--stopwords", s.flags.stopwords, "Stopword file replacing the built-in list");
  cmd.add_flag("--no-keep-urls", s.flags.no_keep_urls, "Strip punctuation from URLs like any other token");

  auto& d = c.detector;
  cmd.add_option("--scale", d.topic_count_scale, "Topic count scale (topics = scale * log(tweets))")
      ->capture_default_str();
  cmd.add_option("--log-base", d.log_base, "Log base of the topic count rule")->capture_default_str();
  s.alpha = cmd.add_option("--dirichlet-alpha", s.flags.dirichlet_alpha, "Document-topic prior (default 50/topics)");
  cmd.add_option("--dirichlet-beta", d.dirichlet_beta, "Topic-word prior")->capture_default_str();
  cmd.add_option("--iterations", d.lda_iterations, "Gibbs sweeps for training")->capture_default_str();
  cmd.add_option("--inference-iterations", d.inference_iterations, "Gibbs sweeps per scored tweet")
      ->capture_default_str();
  cmd.add_option("--epsilon", d.epsilon, "Probability given to tokens a window never saw")->capture_default_str();
  cmd.add_option("--seed", d.seed, "Base random seed")->capture_default_str();
  cmd.add_option("--threads", d.threads, "Scoring threads (0: all cores)")->capture_default_str();
  cmd.add_option("--event-model", s.flags.event_model, "Reuse a saved event-window model");
  cmd.add_option("--baseline-model", s.flags.baseline_model, "Reuse a saved baseline-window model");
  cmd.add_option("--tree", s.flags.tree, "Decision tree file; enables the filter layer");
}

void add_eval_options(CLI::App& cmd, CommandState& s) {
  s.xs = cmd.add_option("--xs", s.flags.xs, "Explicit cut-offs (default 1..max-x)")->delimiter(',')->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  cmd.add_option("--max-x", s.config.max_x, "Largest default cut-off")->capture_default_str();
}

void print_detect(const dosdetect::DetectSummary& s, const PipelineConfig& c) {
  const auto& ranked = c.use_tree ? s.filtered : s.detection.ranked;
  std::cout << "topics: event " << s.detection.event_model.num_topics() << ", baseline "
            << s.detection.baseline_model.num_topics() << '\n';
  std::cout << "top ranked tweets:\n";
  for (std::size_t i = 0; i < std::min<std::size_t>(5, ranked.size()); ++i) {
    std::cout << "  " << ranked[i].rank << "  " << std::setprecision(6) << ranked[i].score << "  "
              << ranked[i].tweet.raw_text << '\n';
  }
  if (s.labeling_applied) std::cout << "attack tweets: " << s.n_attack << '\n';
  if (s.severity) {
    std::cout << "severity: " << s.severity->blended << " (volume share " << s.severity->volume_share
              << ", audience share " << s.severity->audience_share << ")\n";
  }
  std::cout << "reports written to " << c.out_dir.string() << '\n';
}

// Splices the entries of a --config file in as "--key=value" arguments
// directly after the subcommand, so later command-line flags override them
// (options use the take-last policy).
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  if (args.size() < 2) return args;
  std::vector<std::string> out{args[0], args[1]};
  std::vector<std::string> rest;
  std::string config_path;
  for (std::size_t i = 2; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config_path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (!config_path.empty()) {
    for (const auto& item : CLI::ConfigINI().from_file(config_path)) {
      if (item.name == "++" || item.name == "--") continue;
      std::string value;
      for (const auto& input : item.inputs) value += (value.empty() ? "" : ",") + input;
      out.push_back("--" + item.fullname() + "=" + value);
    }
  }
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Detect denial-of-service events in windowed tweet corpora"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  CommandState detect_state;
  auto* detect = app.add_subcommand("detect", "Rank event tweets and estimate severity");
  add_pipeline_options(*detect, detect_state);
  detect_state.top_x = detect->add_option("--top-x", detect_state.flags.top_x, "Label the first x tweets as attacks");
  detect_state.threshold =
      detect->add_option("--score-threshold", detect_state.flags.score_threshold, "Label tweets scoring above this");
  detect_state.top_x->excludes(detect_state.threshold);
  detect->add_option("--severity-beta", detect_state.config.severity_beta, "Weight of the volume share in [0,1]")
      ->capture_default_str();
  detect_state.n_user = detect->add_option("--n-user", detect_state.flags.n_user, "Audience size (follower count)");

  CommandState eval_state;
  auto* eval = app.add_subcommand("eval", "Precision/recall and DET curves on a labeled event corpus");
  add_pipeline_options(*eval, eval_state);
  add_eval_options(*eval, eval_state);

  CommandState sweep_state;
  auto* sweep = app.add_subcommand("sweep", "Evaluate over a grid of topic count scales, with and without a tree");
  add_pipeline_options(*sweep, sweep_state);
  add_eval_options(*sweep, sweep_state);
  sweep->add_option("--scales", sweep_state.config.scales, "Topic count scales")->delimiter(',')->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  sweep->add_option("--tree-training", sweep_state.flags.tree_training,
                    "Labeled corpus of another entity; adds tree-filtered curves");

  dosdetect::SynthSpec synth_spec;
  std::string synth_out = "synthetic";
  auto* synth = app.add_subcommand("synth", "Write a synthetic baseline/event corpus pair");
  synth->add_option("--n-background", synth_spec.n_background)->capture_default_str();
  synth->add_option("--n-attack", synth_spec.n_attack)->capture_default_str();
  synth->add_option("--background-vocab", synth_spec.background_vocab_size)->capture_default_str();
  synth->add_option("--attack-vocab", synth_spec.attack_vocab_size)->capture_default_str();
  synth->add_option("--tokens-per-doc", synth_spec.tokens_per_doc)->capture_default_str();
  synth->add_option("--overlap", synth_spec.overlap_fraction)->capture_default_str();
  synth->add_option("--seed", synth_spec.seed)->capture_default_str();
  synth->add_option("-o,--out", synth_out, "Directory for baseline.jsonl and event.jsonl")->capture_default_str();

  std::string tree_input;
  std::string tree_output = "tree.json";
  std::string tree_stopwords;
  std::size_t min_leaf = 4;
  auto* train_tree = app.add_subcommand("train-tree", "Train the decision tree filter on a labeled corpus");
  train_tree->add_option("corpus", tree_input, "Labeled corpus (JSON lines)")->required();
  train_tree->add_option("-o,--out", tree_output)->capture_default_str();
  train_tree->add_option("--min-leaf", min_leaf, "Minimum training samples per leaf")->capture_default_str();
  train_tree->add_option("--stopwords", tree_stopwords, "Stopword file replacing the built-in list");

  dosdetect::SeverityInput severity_input;
  auto* severity = app.add_subcommand("severity", "Severity level from attack-tweet counts");
  severity->add_option("--n-attack", severity_input.n_attack)->required();
  severity->add_option("--n-all", severity_input.n_all)->required();
  severity->add_option("--n-user", severity_input.n_user)->required();
  severity->add_option("--beta", severity_input.beta)->capture_default_str();

  std::vector<std::string> args;
  try {
    args = expand_config(argc, argv);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return EXIT_FAILURE;
  }
  std::reverse(args.begin(), args.end());
  args.pop_back();
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*detect) {
      const PipelineConfig config = detect_state.resolve();
      print_detect(dosdetect::run_detect(config), config);
    } else if (*eval) {
      const PipelineConfig config = eval_state.resolve();
      const auto curve = dosdetect::run_eval(config);
      if (curve.no_gold_attacks) std::cerr << "warning: corpus has no gold attack tweets; recall reported as 0\n";
      for (const auto& p : curve.points) {
        if (p.x == 10 || p.x == 50 || p.x == 100) {
          std::cout << "x=" << p.x << " precision=" << p.precision << " recall=" << p.recall << '\n';
        }
      }
      std::cout << "curve.csv and det.csv written to " << config.out_dir.string() << '\n';
    } else if (*sweep) {
      const PipelineConfig config = sweep_state.resolve();
      const auto results = dosdetect::run_sweep(config);
      std::cout << results.size() << " sweep curves written to " << (config.out_dir / "sweep.csv").string() << '\n';
    } else if (*synth) {
      const auto corpora = dosdetect::generate_synthetic(synth_spec);
      std::filesystem::create_directories(synth_out);
      dosdetect::save_corpus(corpora.baseline, std::filesystem::path(synth_out) / "baseline.jsonl");
      dosdetect::save_corpus(corpora.event, std::filesystem::path(synth_out) / "event.jsonl");
      std::cout << "wrote " << corpora.baseline.size() << " baseline and " << corpora.event.size()
                << " event tweets to " << synth_out << '\n';
    } else if (*train_tree) {
      auto cfg = dosdetect::TokenizerConfig::english();
      if (!tree_stopwords.empty()) cfg.stopwords = dosdetect::load_stopwords(tree_stopwords);
      const auto corpus = dosdetect::load_corpus(tree_input, dosdetect::WindowTag::Event, cfg);
      const auto classifier = dosdetect::train_classifier(corpus, min_leaf);
      classifier.save(tree_output);
      std::cout << "tree with " << classifier.tree.leaf_count() << " leaves written to " << tree_output << '\n';
    } else if (*severity) {
      const auto r = dosdetect::severity_report(severity_input);
      std::cout << std::setprecision(6);
      std::cout << "volume_share (beta=1): " << r.volume_share << '\n';
      std::cout << "audience_share (beta=0): " << r.audience_share << '\n';
      std::cout << "severity (beta=" << severity_input.beta << "): " << r.blended << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return EXIT_FAILURE;
  }
  return EXIT_SUCCESS;
}
