#include "dosdetect/detector.hpp"

#include <future>

#include "dosdetect/random.hpp"

namespace dosdetect {

LdaHyperparams DetectorSettings::hyperparams_for(std::size_t num_docs, std::uint64_t stream) const {
  LdaHyperparams h = LdaHyperparams::defaults(num_topics(num_docs, topic_count_scale, log_base),
                                              mix_seed(seed, stream));
  if (dirichlet_alpha) h.dirichlet_alpha = *dirichlet_alpha;
  h.dirichlet_beta = dirichlet_beta;
  h.iterations = lda_iterations;
  return h;
}

Detection detect(const Corpus& baseline, const Corpus& event, const DetectorSettings& settings) {
  const LdaHyperparams event_hyper = settings.hyperparams_for(event.size(), kEventStream);
  const LdaHyperparams baseline_hyper = settings.hyperparams_for(baseline.size(), kBaselineStream);
  auto baseline_future = std::async(std::launch::async, [&] { return train(baseline, baseline_hyper); });
  LdaModel event_model = train(event, event_hyper);
  return detect_with_models(std::move(event_model), baseline_future.get(), event, settings);
}

Detection detect_with_models(LdaModel event_model, LdaModel baseline_model, const Corpus& event,
                             const DetectorSettings& settings) {
  std::vector<TopicScore> scores = rank_attack_topics(event_model, baseline_model, settings.epsilon);
  RankOptions options;
  options.inference_iterations = settings.inference_iterations;
  options.seed = mix_seed(settings.seed, kInferenceStream);
  options.threads = settings.threads;
  std::vector<RankedTweet> ranked = rank_tweets(event, event_model, scores, options);
  return Detection{std::move(event_model), std::move(baseline_model), std::move(scores), std::move(ranked)};
}

}  // namespace dosdetect
