#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "sumrl/embeddings.hpp"
#include "sumrl/metrics.hpp"
#include "sumrl/parallel.hpp"
#include "sumrl/text.hpp"

namespace sumrl {

struct Sentence {
  std::string raw;
  TokenSeq tokens;
  std::size_t index = 0;
};

struct Document {
  std::string id;
  std::vector<Sentence> sentences;
  TokenSeq reference;  // gold summary; catchphrase lists are concatenated

  std::size_t size() const noexcept { return sentences.size(); }
};

/// Builds a document from raw sentence strings, tokenizing each. Throws
/// ErrorKind::input when there are no sentences or a sentence tokenizes to nothing.
Document make_document(std::string id, const std::vector<std::string>& sentences, TokenSeq reference);

/// One 0/1 label per sentence.
using LabelVector = std::vector<std::uint8_t>;

struct Summary {
  std::vector<std::size_t> selected;  // strictly increasing

  /// Tokens of the selected sentences in document order.
  TokenSeq tokens(const Document& doc) const;
  std::string text(const Document& doc) const;
};

/// JSON-lines corpus: {"id": str, "sentences": [str, ...], "summary": str | [str, ...]}.
std::vector<Document> load_corpus(const std::filesystem::path& path);
std::vector<Document> parse_corpus(std::istream& in);
void write_corpus(std::ostream& out, const std::vector<Document>& docs);

/// Greedy ROUGE oracle: add the sentence that most improves r_rouge until m
/// sentences are chosen or nothing improves. Ties go to the lower index.
LabelVector oracle_labels(const Document& doc, std::size_t m, const RougeConfig& cfg);

std::vector<LabelVector> oracle_labels_batch(const std::vector<Document>& docs, std::size_t m,
                                             const RougeConfig& cfg, Exec exec = Exec::parallel);

/// First min(m, n) sentences.
Summary lead_m(const Document& doc, std::size_t m);

struct SyntheticSpec {
  std::size_t num_docs = 200;
  std::size_t sentences_per_doc = 12;
  std::size_t salient_per_doc = 3;
  std::size_t vocab_size = 400;
  std::size_t keyword_pool_size = 60;
  std::size_t keywords_per_doc = 4;
  double noise_token_rate = 0.2;
  double synonym_rate = 0.5;
  std::size_t min_sentence_len = 8;
  std::size_t max_sentence_len = 14;
  std::uint64_t seed = 0;
  std::string id_prefix = "syn";

  /// Throws ErrorKind::input on an invalid combination.
  void validate() const;
};

struct SyntheticCorpus {
  std::vector<Document> docs;
  std::vector<std::vector<std::size_t>> salient;  // ground-truth indices per document
};

/// Planted-saliency corpus. Each document draws keywords_per_doc keywords
/// from a shared pool; salient sentences carry two of them among filler
/// tokens, the others carry filler only. The reference paraphrases the
/// salient sentences: tokens are dropped with noise_token_rate and keywords
/// are swapped for their paired synonym with synonym_rate.
SyntheticCorpus generate_synthetic(const SyntheticSpec& spec);

/// Vector table for the synthetic vocabulary: filler tokens and punctuation
/// get unit vectors, keywords get norm keyword_norm, and every synonym is a
/// small perturbation of its keyword (same norm), so embedding-based rewards
/// can see through the paraphrase that ROUGE cannot.
std::vector<std::pair<std::string, Vector>> synthetic_vectors(const SyntheticSpec& spec, std::size_t dim,
                                                              double keyword_norm = 2.0,
                                                              double synonym_noise = 0.15);

/// Token spellings used by the generator.
std::string synthetic_filler_token(std::size_t i);
std::string synthetic_keyword_token(std::size_t i);
std::string synthetic_synonym_token(std::size_t i);

}  // namespace sumrl
