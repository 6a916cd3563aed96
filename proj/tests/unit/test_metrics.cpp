#include <gtest/gtest.h>

#include <fstream>
#include <numeric>

#include "oracles.hpp"
#include "sumrl/error.hpp"
#include "sumrl/metrics.hpp"
#include "sumrl/rng.hpp"

using namespace sumrl;

namespace {

const RougeConfig kPlain{false, false};

TokenSeq random_tokens(Rng& rng, std::size_t max_len, std::size_t vocab) {
  TokenSeq t(rng.below(max_len + 1));
  for (auto& s : t) s = "t" + std::to_string(rng.below(vocab));
  return t;
}

EmbeddingProvider table(std::initializer_list<std::pair<const char*, Vector>> rows) {
  EmbeddingProvider::Table t;
  for (const auto& [k, v] : rows) t.emplace(k, v);
  return EmbeddingProvider::from_table(std::move(t), OovPolicy::zero);
}

}  // namespace

TEST(Rouge, Examples) {
  const TokenSeq c{"the", "cat", "sat"}, r{"the", "cat", "ran"};
  const auto r1 = rouge_n(c, r, 1, kPlain);
  EXPECT_DOUBLE_EQ(r1.precision, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(r1.recall, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(r1.f1, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(rouge_n(c, r, 2, kPlain).f1, 0.5);
  EXPECT_DOUBLE_EQ(rouge_l(c, r, kPlain).f1, 2.0 / 3.0);
  EXPECT_NEAR(r_rouge(c, r, kPlain), 0.6111111111, 1e-9);
}

TEST(Rouge, IdentityAndDisjoint) {
  const TokenSeq a{"x", "y", "z"}, b{"p", "q"};
  EXPECT_EQ(rouge_n(a, a, 1, kPlain).f1, 1.0);
  EXPECT_EQ(rouge_n(a, a, 2, kPlain).f1, 1.0);
  EXPECT_EQ(rouge_l(a, a, kPlain).f1, 1.0);
  EXPECT_EQ(r_rouge(a, a, kPlain), 1.0);
  EXPECT_EQ(rouge_l(a, b, kPlain).f1, 0.0);
  EXPECT_EQ(r_rouge(a, b, kPlain), 0.0);
}

TEST(Rouge, EmptyAndShortInputs) {
  EXPECT_EQ(rouge_n({}, {"a"}, 1, kPlain).f1, 0.0);
  EXPECT_EQ(rouge_n({"a"}, {"a"}, 2, kPlain).f1, 0.0);
  EXPECT_EQ(rouge_l({"a"}, {}, kPlain).f1, 0.0);
  EXPECT_THROW(rouge_n({"a"}, {"a"}, 3, kPlain), std::invalid_argument);
}

TEST(Rouge, StemmingAndStopwords) {
  const TokenSeq c{"the", "cats", "running"}, r{"a", "cat", "runs"};
  EXPECT_EQ(rouge_n(c, r, 1, kPlain).f1, 0.0);
  EXPECT_NEAR(rouge_n(c, r, 1, RougeConfig{}).f1, 2.0 / 3.0, 1e-15);
  EXPECT_EQ(rouge_n(c, r, 1, RougeConfig{true, true}).f1, 1.0);
}

TEST(Rouge, MatchesBruteForceOracle) {
  Rng rng(2024);
  for (int t = 0; t < 300; ++t) {
    const TokenSeq c = random_tokens(rng, 25, 8), r = random_tokens(rng, 25, 8);
    for (int n : {1, 2}) {
      const auto got = rouge_n(c, r, n, kPlain);
      const auto want = oracle::rouge_n(c, r, static_cast<std::size_t>(n));
      EXPECT_EQ(got.precision, want.p);
      EXPECT_EQ(got.recall, want.r);
      EXPECT_EQ(got.f1, want.f);
    }
    const auto l = rouge_l(c, r, kPlain);
    const auto wl = oracle::rouge_l(c, r);
    EXPECT_EQ(l.f1, wl.f);
  }
}

TEST(Rouge, BoundedAndSelfIdentity) {
  Rng rng(7);
  for (int t = 0; t < 300; ++t) {
    const TokenSeq c = random_tokens(rng, 30, 12), r = random_tokens(rng, 30, 12);
    for (const auto& prf : {rouge_n(c, r, 1, kPlain), rouge_n(c, r, 2, kPlain), rouge_l(c, r, kPlain)}) {
      EXPECT_GE(prf.f1, 0.0);
      EXPECT_LE(prf.f1, 1.0);
    }
    if (c.size() >= 2) EXPECT_EQ(r_rouge(c, c, kPlain), 1.0);
  }
}

TEST(Porter, Examples) {
  EXPECT_EQ(porter_stem("caresses"), "caress");
  EXPECT_EQ(porter_stem("cat"), "cat");
  EXPECT_EQ(porter_stem("relational"), "relat");
  EXPECT_EQ(porter_stem("ponies"), "poni");
  EXPECT_EQ(porter_stem("is"), "is");
  EXPECT_EQ(porter_stem("generalizations"), "gener");
}

TEST(Porter, ReferenceVocabulary) {
  std::ifstream voc(SUMRL_TEST_DATA "/porter_voc.txt"), out(SUMRL_TEST_DATA "/porter_output.txt");
  ASSERT_TRUE(voc && out);
  std::string w, s;
  std::size_t n = 0, bad = 0;
  while (voc >> w && out >> s) {
    ++n;
    if (porter_stem(w) != s) ++bad;
  }
  EXPECT_EQ(n, 23531u);
  EXPECT_EQ(bad, 0u);
}

TEST(Transport, TextbookInstance) {
  const std::vector<std::int64_t> s{2, 1}, d{1, 2};
  const std::vector<double> cost{1.0, 3.0, 2.0, 1.0};
  EXPECT_DOUBLE_EQ(min_cost_transport(s, d, cost), 1.0 + 3.0 + 1.0);
}

TEST(Wmd, Examples) {
  const auto p = table({{"o", {0.0, 0.0}}, {"f", {3.0, 4.0}}, {"a", {1.0, 0.0}}, {"b", {0.0, 1.0}}});
  EXPECT_NEAR(wmd({"o"}, {"f"}, p), 5.0, 1e-9);
  EXPECT_NEAR(wmd({"a", "b", "a"}, {"a", "a", "b"}, p), 0.0, 1e-9);
  EXPECT_NEAR(wmd({"a", "b"}, {"a"}, p), std::sqrt(2.0) / 2.0, 1e-12);
  EXPECT_THROW(wmd({}, {"a"}, p), Error);
}

TEST(Wmd, ThreeByThreeMatchesAssignment) {
  Rng rng(3);
  for (int t = 0; t < 50; ++t) {
    EmbeddingProvider::Table tab;
    std::vector<oracle::Vec> va, vb;
    TokenSeq a, b;
    for (int i = 0; i < 3; ++i) {
      Vector x{rng.uniform(-1, 1), rng.uniform(-1, 1)}, y{rng.uniform(-1, 1), rng.uniform(-1, 1)};
      a.push_back("a" + std::to_string(i));
      b.push_back("b" + std::to_string(i));
      tab[a.back()] = x;
      tab[b.back()] = y;
      va.push_back(x);
      vb.push_back(y);
    }
    const auto p = EmbeddingProvider::from_table(tab, OovPolicy::zero);
    EXPECT_NEAR(wmd(a, b, p), oracle::assignment_distance(va, vb), 1e-9);
  }
}

TEST(Wmd, UnequalLengthsAreExactlyBalanced) {
  const auto p = table({{"a", {0.0, 0.0}}, {"b", {1.0, 0.0}}, {"c", {0.0, 2.0}}});
  // a:1/2 b:1/2 against c:1/3 a:2/3. a stays put; b sends 1/3 to c and 1/6 to a.
  const double want = std::sqrt(5.0) / 3.0 + 1.0 / 6.0;
  EXPECT_NEAR(wmd({"a", "b"}, {"c", "a", "a"}, p), want, 1e-12);
}

TEST(Wmd, Symmetric) {
  const auto p = EmbeddingProvider::hashed(5, 9);
  Rng rng(1);
  for (int t = 0; t < 100; ++t) {
    TokenSeq a = random_tokens(rng, 9, 7), b = random_tokens(rng, 9, 7);
    if (a.empty() || b.empty()) continue;
    EXPECT_NEAR(wmd(a, b, p), wmd(b, a, p), 1e-12);
    EXPECT_NEAR(wmd(a, a, p), 0.0, 1e-12);
  }
}

TEST(RSeq, Examples) {
  const auto p = EmbeddingProvider::hashed(4, 0);
  EXPECT_NEAR(r_seq({"a", "b"}, {"a", "b"}, p), 100.0, 1e-9);
  EXPECT_NEAR(seq_reward_from_distance(0.99), 1.0, 1e-9);
  EXPECT_NEAR(seq_reward_from_distance(1.99), 0.5, 1e-9);
  EXPECT_LT(seq_reward_from_distance(0.5), seq_reward_from_distance(0.4));
}

TEST(RSeq, EmptyCandidateIsFiniteAndWorst) {
  const auto p = table({{"a", {0.0, 0.0}}, {"b", {1.0, 0.0}}, {"c", {0.0, 2.0}}});
  EXPECT_NEAR(empty_candidate_distance({"a", "b", "c"}, p), std::sqrt(5.0) + 1.0, 1e-12);
  const double empty = r_seq({}, {"a", "b", "c"}, p);
  EXPECT_NEAR(empty, 1.0 / (std::sqrt(5.0) + 1.01), 1e-12);
  for (const TokenSeq& c : {TokenSeq{"a"}, TokenSeq{"b"}, TokenSeq{"c"}, TokenSeq{"a", "c"}}) {
    EXPECT_GT(r_seq(c, {"a", "b", "c"}, p), empty);
  }
  EXPECT_THROW(r_seq({"a"}, {}, p), Error);
}
