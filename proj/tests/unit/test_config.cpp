#include <gtest/gtest.h>

#include "sumrl/config.hpp"
#include "sumrl/error.hpp"

using namespace sumrl;

TEST(Config, DefaultsFollowThePaper) {
  const RunConfig c;
  EXPECT_EQ(c.m, 3u);
  EXPECT_EQ(c.reward.alpha2, 0.4);
  EXPECT_EQ(c.reward.beta_kl, 0.05);
  EXPECT_EQ(c.train.learning_rate, 1e-5);
  EXPECT_EQ(c.ppo.learning_rate, 1e-5);
  EXPECT_EQ(c.ppo.clip_epsilon, 0.2);
  EXPECT_EQ(c.bootstrap_resamples, 1000u);
}

TEST(Config, JsonRoundTrip) {
  RunConfig c;
  c.seed = 12;
  c.m = 6;
  c.corpus.train = "t.jsonl";
  c.encoder.kind = "file";
  c.encoder.path = "v.txt";
  c.keyword.dim = 9;
  c.head = HeadKind::mlp;
  c.reward.use_kw = false;
  c.reward.alpha1 = 0.25;
  c.ppo.advantage_mode = AdvantageMode::raw_returns;
  c.train.epochs = 3;
  const RunConfig back = run_config_from_json(to_json(c));
  EXPECT_EQ(to_json(back), to_json(c));
  EXPECT_EQ(config_hash(back), config_hash(c));
  c.seed = 13;
  EXPECT_NE(config_hash(back), config_hash(c));
}

TEST(Config, PartialFileKeepsDefaults) {
  const RunConfig c = run_config_from_json(nlohmann::json::parse(R"({"m": 8, "reward": {"beta_kl": 0.1}})"));
  EXPECT_EQ(c.m, 8u);
  EXPECT_EQ(c.reward.beta_kl, 0.1);
  EXPECT_EQ(c.reward.alpha1, 0.3);
}

TEST(Config, SequenceAndKeywordProvidersDefaultToEncoder) {
  const RunConfig c =
      run_config_from_json(nlohmann::json::parse(R"({"embeddings": {"encoder": {"kind": "hash", "dim": 12}}})"));
  EXPECT_EQ(c.keyword.dim, 12u);
  EXPECT_EQ(c.sequence.dim, 12u);
}

TEST(Config, UnknownKeysAndBadValuesRejected) {
  EXPECT_THROW(run_config_from_json(nlohmann::json::parse(R"({"bogus": 1})")), Error);
  EXPECT_THROW(run_config_from_json(nlohmann::json::parse(R"({"ppo": {"clip": 0.1}})")), Error);
  EXPECT_THROW(run_config_from_json(nlohmann::json::parse(R"({"m": "three"})")), Error);
  RunConfig c;
  c.m = 0;
  EXPECT_THROW(c.validate(), Error);
  c = RunConfig{};
  c.ppo.clip_epsilon = 1.5;
  EXPECT_THROW(c.validate(), Error);
}

TEST(Config, FinalizePropagatesSeed) {
  RunConfig c;
  c.seed = 77;
  c.finalize();
  EXPECT_EQ(c.train.seed, 77u);
  EXPECT_EQ(c.ppo.seed, 77u);
}

TEST(Config, ProviderSpecBuilds) {
  ProviderSpec p;
  EXPECT_EQ(p.build().dim(), 32u);
  p.kind = "file";
  EXPECT_THROW(p.build(), Error);
  p.kind = "bert";
  EXPECT_THROW(p.build(), Error);
}
