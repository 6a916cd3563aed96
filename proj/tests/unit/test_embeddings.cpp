#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "sumrl/embeddings.hpp"
#include "sumrl/error.hpp"
#include "sumrl/rng.hpp"

using namespace sumrl;

namespace {

EmbeddingProvider two_d() {
  std::istringstream in("cat 1.0 0.0\ndog 0.0 1.0\n");
  return parse_vectors(in, OovPolicy::zero);
}

}  // namespace

TEST(Vectors, ParsesTextFormat) {
  const auto p = two_d();
  EXPECT_EQ(p.dim(), 2u);
  EXPECT_EQ(p.kind(), ProviderKind::file_vectors);
  EXPECT_EQ(p.vector("dog"), (Vector{0.0, 1.0}));
}

TEST(Vectors, SkipsCountDimHeader) {
  std::istringstream in("2 3\na 1 2 3\nb 4 5 6\n");
  const auto p = parse_vectors(in);
  EXPECT_EQ(p.dim(), 3u);
  EXPECT_EQ(p.table_size(), 2u);
}

TEST(Vectors, RejectsMixedDimensions) {
  std::istringstream in("a 1 2\nb 1 2 3\n");
  EXPECT_THROW(parse_vectors(in), Error);
}

TEST(Vectors, EmptyFileIsAnError) {
  std::istringstream in("");
  try {
    parse_vectors(in);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(std::string(e.what()), "no vectors");
    EXPECT_EQ(e.kind(), ErrorKind::input);
  }
}

TEST(Vectors, NonNumericComponentNamesLine) {
  std::istringstream in("a 1 2\nb 1 x\n");
  try {
    parse_vectors(in);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(Vectors, WriteThenParseRoundTrips) {
  std::vector<std::pair<std::string, Vector>> rows = {{"x", {0.1, -2.5e-7}}, {"y", {1.0 / 3.0, 7.0}}};
  std::ostringstream out;
  write_vectors(out, rows);
  std::istringstream in(out.str());
  const auto p = parse_vectors(in);
  EXPECT_EQ(p.vector("x"), rows[0].second);
  EXPECT_EQ(p.vector("y"), rows[1].second);
}

TEST(Vectors, OovPolicies) {
  const auto zero = two_d();
  Vector out(2);
  EXPECT_FALSE(zero.lookup("bird", out));
  EXPECT_EQ(out, (Vector{0.0, 0.0}));

  std::istringstream in("cat 1.0 0.0\n");
  const auto fallback = parse_vectors(in, OovPolicy::hash_fallback, 5);
  EXPECT_TRUE(fallback.lookup("bird", out));
  EXPECT_EQ(out, hash_embedding("bird", 2, 5));
}

TEST(Vectors, FingerprintDependsOnContent) {
  std::istringstream a("cat 1 0\n"), b("cat 1 0.5\n");
  EXPECT_NE(parse_vectors(a).fingerprint(), parse_vectors(b).fingerprint());
  EXPECT_NE(EmbeddingProvider::hashed(8, 1).fingerprint(), EmbeddingProvider::hashed(8, 2).fingerprint());
  EXPECT_EQ(EmbeddingProvider::hashed(8, 1).fingerprint(), EmbeddingProvider::hashed(8, 1).fingerprint());
}

TEST(HashEmbedding, DeterministicAndUnitNorm) {
  const Vector a = hash_embedding("contract", 16, 3);
  EXPECT_EQ(a, hash_embedding("contract", 16, 3));
  EXPECT_NEAR(norm(a), 1.0, 1e-12);
  for (const char* t : {"a", "b", "visa", "tribunal", ""}) EXPECT_NEAR(norm(hash_embedding(t, 7, 0)), 1.0, 1e-12);
}

TEST(HashEmbedding, SeedsOneAndTwoDiffer) {
  EXPECT_NE(hash_embedding("contract", 16, 1), hash_embedding("contract", 16, 2));
  EXPECT_NE(hash_embedding("contract", 16, 1), hash_embedding("contracts", 16, 1));
}

TEST(HashEmbedding, RejectsTinyDim) { EXPECT_THROW(hash_embedding("x", 1, 0), Error); }

TEST(EmbedPhrase, MeanPooling) {
  const auto p = two_d();
  EXPECT_EQ(embed_phrase(TokenSeq{"cat"}, p).vector, (Vector{1.0, 0.0}));
  EXPECT_EQ(embed_phrase(TokenSeq{"cat", "dog"}, p).vector, (Vector{0.5, 0.5}));
  const auto oov = embed_phrase(TokenSeq{"owl", "emu"}, p);
  EXPECT_TRUE(oov.all_oov);
  EXPECT_EQ(oov.vector, (Vector{0.0, 0.0}));
  EXPECT_THROW(embed_phrase(TokenSeq{}, p), Error);
}

TEST(EmbedPhrase, PermutationInvariant) {
  const auto p = EmbeddingProvider::hashed(12, 4);
  const auto a = embed_phrase(TokenSeq{"x", "y", "z"}, p).vector;
  const auto b = embed_phrase(TokenSeq{"z", "x", "y"}, p).vector;
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-15);
}

TEST(Cosine, Examples) {
  const Vector x{1.0, 0.0}, y{0.0, 1.0}, d{1.0, 1.0};
  EXPECT_DOUBLE_EQ(cosine(x, x), 1.0);
  EXPECT_DOUBLE_EQ(cosine(x, y), 0.0);
  EXPECT_NEAR(cosine(x, d), 1.0 / std::sqrt(2.0), 1e-9);
  EXPECT_EQ(cosine(x, Vector{0.0, 0.0}), 0.0);
  EXPECT_THROW(cosine(x, Vector{1.0, 2.0, 3.0}), Error);
}

TEST(Cosine, SymmetricBoundedScaleInvariant) {
  Rng rng(5);
  for (int t = 0; t < 1000; ++t) {
    Vector u(6), v(6);
    for (auto& c : u) c = rng.uniform(-1e3, 1e3);
    for (auto& c : v) c = rng.uniform(-1e3, 1e3);
    const double c = cosine(u, v);
    EXPECT_EQ(c, cosine(v, u));
    EXPECT_LE(std::abs(c), 1.0 + 1e-12);
    Vector s = u;
    const double alpha = rng.uniform(1e-3, 1e3);
    for (auto& x : s) x *= alpha;
    EXPECT_NEAR(cosine(s, v), c, 1e-12);
  }
}
