#include "trend.hpp"

#include "sumrl/eval.hpp"

namespace sumrl::acceptance {

namespace {

EmbeddingProvider::Table as_table(const std::vector<std::pair<std::string, Vector>>& rows) {
  return EmbeddingProvider::Table(rows.begin(), rows.end());
}

}  // namespace

TrendSetup TrendSetup::pinned() {
  TrendSetup s;
  s.spec.num_docs = s.train_docs + s.test_docs;
  s.spec.sentences_per_doc = 12;
  s.spec.salient_per_doc = 3;
  s.spec.seed = 0;
  s.train.seed = 0;
  s.ppo.seed = 0;
  return s;
}

TrendBench::TrendBench(const TrendSetup& setup)
    : setup_(setup),
      provider_(EmbeddingProvider::from_table(as_table(synthetic_vectors(setup.spec, setup.vector_dim)),
                                              OovPolicy::hash_fallback, setup.spec.seed)) {
  SyntheticCorpus corpus = generate_synthetic(setup.spec);
  train_.assign(corpus.docs.begin(), corpus.docs.begin() + static_cast<std::ptrdiff_t>(setup.train_docs));
  test_.assign(corpus.docs.begin() + static_cast<std::ptrdiff_t>(setup.train_docs),
               corpus.docs.begin() + static_cast<std::ptrdiff_t>(setup.train_docs + setup.test_docs));
  const auto labels = oracle_labels_batch(train_, setup.m, setup.reward.rouge);
  const auto states = encode_documents(train_, provider_);
  const PolicyParams init = init_params(setup.head, provider_.dim() + kExtraFeatures, setup.hidden, setup.train.seed,
                                        provider_.fingerprint());
  sl_ = pretrain(init, states, labels, setup.train).params;
}

double TrendBench::held_out(const PolicyParams& params) const {
  return mean_r_rouge(score_summaries(test_, summarize_corpus(params, test_, provider_, setup_.m), setup_.reward.rouge));
}

FinetuneResult TrendBench::finetune(const RewardConfig& reward, const PpoConfig& ppo, Algorithm algorithm) const {
  return sumrl::finetune(sl_, train_, {provider_, provider_, provider_}, reward, ppo, algorithm);
}

}  // namespace sumrl::acceptance
