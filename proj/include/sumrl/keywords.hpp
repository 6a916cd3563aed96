#pragma once

#include <memory>
#include <vector>

#include "sumrl/embeddings.hpp"
#include "sumrl/text.hpp"

namespace sumrl {

struct KeywordConfig {
  std::size_t n_k = 3;
  bool unigrams = true;
  bool bigrams = true;
  std::size_t min_token_len = 2;
  /// Null means default_stopwords().
  std::shared_ptr<const StopwordSet> stopwords;

  const StopwordSet& stopword_set() const { return stopwords ? *stopwords : default_stopwords(); }
};

struct Keyword {
  TokenSeq phrase;
  Vector vector;
};

struct KeywordSet {
  std::vector<Keyword> entries;
  std::size_t n_k = 0;

  bool empty() const noexcept { return entries.empty(); }
  std::size_t size() const noexcept { return entries.size(); }
};

/// Unique unigram and bigram candidates that survive stopword and length
/// filtering, embedded by mean pooling and ranked by descending L2 norm
/// (stable, so ties keep first-occurrence order), truncated to 2 * n_k.
/// Falls back to unfiltered unigrams when filtering leaves nothing; throws
/// ErrorKind::input when even that is empty.
std::vector<Keyword> candidate_phrases(const TokenSeq& text, const KeywordConfig& cfg,
                                       const EmbeddingProvider& provider);

/// Greedy max-min diversification over an already ranked list: start from
/// the first entry, then repeatedly add the remaining candidate whose largest
/// cosine to the chosen set is smallest (ties: earlier rank). Stops at n_k or
/// when candidates run out.
std::vector<std::size_t> select_max_min(const std::vector<Keyword>& ranked, std::size_t n_k);

KeywordSet get_keywords(const TokenSeq& text, const KeywordConfig& cfg, const EmbeddingProvider& provider);

/// Mean over document keywords of the best cosine to any summary keyword.
/// Returns 0 when summary_keywords is empty.
double r_kw(const KeywordSet& doc_keywords, const KeywordSet& summary_keywords);

}  // namespace sumrl
