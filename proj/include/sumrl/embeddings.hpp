#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sumrl/text.hpp"

namespace sumrl {

using Vector = std::vector<double>;

enum class ProviderKind { file_vectors, hash };
enum class OovPolicy { hash_fallback, zero };

/// 64-bit FNV-1a over raw bytes.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis = 0xCBF29CE484222325ULL) noexcept;

/// Deterministic unit vector for (token, seed). The key is
/// splitmix64(fnv1a64(token) ^ splitmix64(seed)); component k is the
/// splitmix64 counter stream at key + k, mapped to [-1, 1] from its top 53
/// bits. The result is L2-normalized.
Vector hash_embedding(std::string_view token, std::size_t dim, std::uint64_t seed);

/// Token -> vector lookup. Immutable after construction; safe for concurrent reads.
class EmbeddingProvider {
 public:
  using Table = std::unordered_map<std::string, Vector>;

  static EmbeddingProvider hashed(std::size_t dim, std::uint64_t seed);
  /// Table must be non-empty with uniform dimension. OOV tokens either get
  /// hash_embedding(token, dim, seed) or are reported missing.
  static EmbeddingProvider from_table(Table table, OovPolicy oov, std::uint64_t seed = 0);

  ProviderKind kind() const noexcept { return kind_; }
  OovPolicy oov_policy() const noexcept { return oov_; }
  std::size_t dim() const noexcept { return dim_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::size_t table_size() const noexcept { return table_ ? table_->size() : 0; }

  /// Writes the token's vector into out (size dim). Returns false when the
  /// token is OOV under the zero policy; out is then zero-filled.
  bool lookup(std::string_view token, std::span<double> out) const;
  Vector vector(std::string_view token) const;

  /// Stable identity of the embedding space; checkpoints record it.
  const std::string& fingerprint() const noexcept { return fingerprint_; }

 private:
  EmbeddingProvider() = default;

  ProviderKind kind_ = ProviderKind::hash;
  OovPolicy oov_ = OovPolicy::hash_fallback;
  std::size_t dim_ = 0;
  std::uint64_t seed_ = 0;
  std::shared_ptr<const Table> table_;
  std::string fingerprint_;
};

/// Word-vector text format: "token v1 ... vd" per line; an optional first
/// line "count dim" is skipped. Duplicate tokens: last row wins.
EmbeddingProvider load_vectors(const std::filesystem::path& path,
                               OovPolicy oov = OovPolicy::hash_fallback,
                               std::uint64_t seed = 0);
EmbeddingProvider parse_vectors(std::istream& in, OovPolicy oov = OovPolicy::hash_fallback,
                                std::uint64_t seed = 0);
void write_vectors(std::ostream& out, const std::vector<std::pair<std::string, Vector>>& rows);

struct PhraseEmbedding {
  Vector vector;
  bool all_oov = false;  // every token missing under OovPolicy::zero
};

/// Mean of the per-token vectors. Phrase must be non-empty.
PhraseEmbedding embed_phrase(const TokenSeq& phrase, const EmbeddingProvider& provider);
PhraseEmbedding embed_phrase(std::span<const std::string> phrase,
                             const EmbeddingProvider& provider);

double dot(std::span<const double> u, std::span<const double> v);
double norm(std::span<const double> v);
double euclidean(std::span<const double> u, std::span<const double> v);

/// u.v / (|u||v|), clamped to [-1, 1]; 0 when either norm is 0. Throws on
/// dimension mismatch.
double cosine(std::span<const double> u, std::span<const double> v);

}  // namespace sumrl
