#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "oracles.hpp"
#include "sumrl/error.hpp"
#include "sumrl/keywords.hpp"
#include "sumrl/rng.hpp"

using namespace sumrl;

namespace {

EmbeddingProvider table(std::initializer_list<std::pair<const char*, Vector>> rows) {
  EmbeddingProvider::Table t;
  for (const auto& [k, v] : rows) t.emplace(k, v);
  return EmbeddingProvider::from_table(std::move(t), OovPolicy::zero);
}

KeywordSet set_of(std::initializer_list<Vector> vs) {
  KeywordSet s;
  int i = 0;
  for (const auto& v : vs) s.entries.push_back(Keyword{{"k" + std::to_string(i++)}, v});
  s.n_k = s.entries.size();
  return s;
}

std::vector<Keyword> ranked_of(const std::vector<Vector>& vs) {
  std::vector<Keyword> out;
  for (std::size_t i = 0; i < vs.size(); ++i) out.push_back(Keyword{{"c" + std::to_string(i)}, vs[i]});
  return out;
}

double cos_of(const oracle::Vec& a, const oracle::Vec& b) { return cosine(a, b); }

}  // namespace

TEST(Candidates, SingleContentToken) {
  const auto p = EmbeddingProvider::hashed(4, 0);
  const auto c = candidate_phrases({"the", "visa", "."}, KeywordConfig{}, p);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].phrase, (TokenSeq{"visa"}));
}

TEST(Candidates, RankedByNormAndTruncated) {
  const auto p = table({{"aa", {3.0, 0.0}}, {"bb", {0.0, 2.0}}, {"cc", {1.0, 0.0}}});
  KeywordConfig cfg;
  cfg.n_k = 1;
  cfg.bigrams = false;
  const auto c = candidate_phrases({"cc", "bb", "aa"}, cfg, p);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0].phrase, (TokenSeq{"aa"}));
  EXPECT_EQ(c[1].phrase, (TokenSeq{"bb"}));
}

TEST(Candidates, EqualNormKeepsOccurrenceOrder) {
  const auto p = table({{"aa", {1.0, 0.0}}, {"bb", {0.0, 1.0}}});
  KeywordConfig cfg;
  cfg.bigrams = false;
  const auto c = candidate_phrases({"bb", "aa", "bb"}, cfg, p);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0].phrase, (TokenSeq{"bb"}));
}

TEST(Candidates, BigramsAreMeanPooled) {
  const auto p = table({{"aa", {2.0, 0.0}}, {"bb", {0.0, 2.0}}});
  const auto c = candidate_phrases({"aa", "bb"}, KeywordConfig{}, p);
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c[2].phrase, (TokenSeq{"aa", "bb"}));
  EXPECT_EQ(c[2].vector, (Vector{1.0, 1.0}));
}

TEST(Candidates, FallsBackWhenEverythingIsFiltered) {
  const auto p = EmbeddingProvider::hashed(4, 0);
  const auto c = candidate_phrases({"the", "a"}, KeywordConfig{}, p);
  EXPECT_EQ(c.size(), 2u);
  EXPECT_THROW(candidate_phrases({}, KeywordConfig{}, p), Error);
}

TEST(MaxMin, WorkedExample) {
  const double s = std::sqrt(0.81 + 0.01), t = std::sqrt(0.98);
  const auto ranked = ranked_of({{1.0, 0.0}, {0.9 / s, 0.1 / s}, {0.0, 1.0}, {0.7 / t, 0.7 / t}});
  EXPECT_EQ(select_max_min(ranked, 2), (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(select_max_min(ranked, 1), (std::vector<std::size_t>{0}));
  EXPECT_EQ(select_max_min(ranked, 9).size(), 4u);
}

TEST(MaxMin, TieGoesToEarlierRank) {
  const auto ranked = ranked_of({{1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}});
  EXPECT_EQ(select_max_min(ranked, 2), (std::vector<std::size_t>{0, 1}));
}

TEST(MaxMin, MatchesExhaustiveSearch) {
  Rng rng(99);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng.below(8), n_k = 1 + rng.below(4);
    std::vector<Vector> vs(n, Vector(2));
    for (auto& v : vs) {
      for (auto& x : v) x = static_cast<double>(static_cast<int>(rng.below(5)) - 2);
    }
    const auto want = oracle::max_min_sequences(vs, n_k, cos_of);
    ASSERT_EQ(want.size(), 1u);
    EXPECT_EQ(select_max_min(ranked_of(vs), n_k), want[0]);
  }
}

TEST(GetKeywords, SubsetOfCandidatesAndBounded) {
  const auto p = EmbeddingProvider::hashed(8, 3);
  const TokenSeq text = tokenize("The tribunal refused the protection visa because the applicant lacked standing .");
  KeywordConfig cfg;
  const auto cands = candidate_phrases(text, cfg, p);
  const auto kws = get_keywords(text, cfg, p);
  EXPECT_EQ(kws.size(), cfg.n_k);
  for (const auto& k : kws.entries) {
    EXPECT_TRUE(std::any_of(cands.begin(), cands.end(), [&](const Keyword& c) { return c.phrase == k.phrase; }));
  }
  EXPECT_EQ(kws.entries[0].phrase, cands[0].phrase);
}

TEST(RKw, Examples) {
  EXPECT_DOUBLE_EQ(r_kw(set_of({{1, 0}, {0, 1}}), set_of({{1, 0}, {0, 1}})), 1.0);
  EXPECT_DOUBLE_EQ(r_kw(set_of({{1, 0}, {0, 1}}), set_of({{1, 0}})), 0.5);
  EXPECT_DOUBLE_EQ(r_kw(set_of({{1, 0}}), set_of({{-1, 0}})), -1.0);
  EXPECT_EQ(r_kw(set_of({{1, 0}}), KeywordSet{}), 0.0);
  EXPECT_THROW(r_kw(KeywordSet{}, set_of({{1, 0}})), Error);
}

TEST(RKw, OrderInvariantAndMonotoneInSummary) {
  Rng rng(4);
  auto rv = [&] { return Vector{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)}; };
  for (int t = 0; t < 200; ++t) {
    KeywordSet d = set_of({rv(), rv(), rv()}), s = set_of({rv(), rv()});
    const double base = r_kw(d, s);
    KeywordSet d2 = d, s2 = s;
    std::reverse(d2.entries.begin(), d2.entries.end());
    std::reverse(s2.entries.begin(), s2.entries.end());
    EXPECT_NEAR(r_kw(d2, s2), base, 1e-15);
    s.entries.push_back(Keyword{{"extra"}, rv()});
    EXPECT_GE(r_kw(d, s), base);
    EXPECT_NEAR(r_kw(d, d), 1.0, 1e-12);
  }
}
