// Serial reference vs OpenMP path for the per-document kernels.

#include <benchmark/benchmark.h>

#include "sumrl/corpus.hpp"
#include "sumrl/eval.hpp"
#include "sumrl/policy.hpp"
#include "sumrl/rl.hpp"

using namespace sumrl;

namespace {

struct Fixture {
  std::vector<Document> docs;
  EmbeddingProvider provider = EmbeddingProvider::hashed(64, 1);
  PolicyParams params;

  Fixture() {
    SyntheticSpec spec;
    spec.num_docs = 64;
    spec.sentences_per_doc = 16;
    docs = generate_synthetic(spec).docs;
    params = init_params(HeadKind::mlp, provider.dim() + kExtraFeatures, 32, 7, provider.fingerprint());
  }
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

Exec exec_of(const benchmark::State& state) { return state.range(0) == 0 ? Exec::serial : Exec::parallel; }

void set_label(benchmark::State& state) { state.SetLabel(state.range(0) == 0 ? "serial" : "openmp"); }

void BM_OracleLabels(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(oracle_labels_batch(f.docs, 3, RougeConfig{}, exec_of(state)));
  set_label(state);
}

void BM_EncodeDocuments(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(encode_documents(f.docs, f.provider, exec_of(state)));
  set_label(state);
}

void BM_SummarizeAndScore(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) {
    const auto summaries = summarize_corpus(f.params, f.docs, f.provider, 3, exec_of(state));
    benchmark::DoNotOptimize(score_summaries(f.docs, summaries, RougeConfig{}, exec_of(state)));
  }
  set_label(state);
}

void BM_FinetuneRollouts(benchmark::State& state) {
  const auto& f = fixture();
  PpoConfig ppo;
  ppo.max_updates = 2;
  ppo.rollouts_per_update = 16;
  RewardConfig reward;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        finetune(f.params, f.docs, {f.provider, f.provider, f.provider}, reward, ppo, Algorithm::ppo, exec_of(state)));
  }
  set_label(state);
}

}  // namespace

BENCHMARK(BM_OracleLabels)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EncodeDocuments)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SummarizeAndScore)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FinetuneRollouts)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
