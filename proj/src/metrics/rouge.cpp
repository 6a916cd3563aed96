#include <algorithm>
#include <cstdint>
#include <unordered_map>

#include "sumrl/metrics.hpp"

namespace sumrl {

double f1_score(double precision, double recall) noexcept {
  const double denom = precision + recall;
  return denom > 0.0 ? 2.0 * precision * recall / denom : 0.0;
}

TokenSeq rouge_normalize(const TokenSeq& tokens, const RougeConfig& cfg) {
  TokenSeq out;
  out.reserve(tokens.size());
  const StopwordSet& stop = default_stopwords();
  for (const std::string& t : tokens) {
    if (cfg.use_stopword_removal && stop.count(t)) continue;
    out.push_back(cfg.stemming ? porter_stem(t) : t);
  }
  return out;
}

namespace {

// Maps both sequences onto shared integer ids so n-grams compare as integers.
struct Interned {
  std::vector<std::uint32_t> candidate;
  std::vector<std::uint32_t> reference;
};

Interned intern(const TokenSeq& candidate, const TokenSeq& reference) {
  std::unordered_map<std::string_view, std::uint32_t> ids;
  auto id_of = [&](const std::string& t) {
    auto [it, inserted] = ids.try_emplace(t, static_cast<std::uint32_t>(ids.size()));
    return it->second;
  };
  Interned out;
  out.candidate.reserve(candidate.size());
  out.reference.reserve(reference.size());
  for (const auto& t : candidate) out.candidate.push_back(id_of(t));
  for (const auto& t : reference) out.reference.push_back(id_of(t));
  return out;
}

std::vector<std::uint64_t> sorted_ngrams(const std::vector<std::uint32_t>& ids, int n) {
  std::vector<std::uint64_t> grams;
  if (ids.size() < static_cast<std::size_t>(n)) return grams;
  grams.reserve(ids.size() - static_cast<std::size_t>(n) + 1);
  for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= ids.size(); ++i) {
    grams.push_back(n == 1 ? ids[i] : (static_cast<std::uint64_t>(ids[i]) << 32) | ids[i + 1]);
  }
  std::sort(grams.begin(), grams.end());
  return grams;
}

// Clipped multiset intersection of two sorted sequences.
std::size_t sorted_overlap(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
  std::size_t i = 0, j = 0, overlap = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      ++overlap;
      ++i;
      ++j;
    }
  }
  return overlap;
}

PrecisionRecallF1 from_counts(std::size_t hits, std::size_t candidate_total, std::size_t reference_total) {
  PrecisionRecallF1 out;
  if (candidate_total == 0 || reference_total == 0) return out;
  out.precision = static_cast<double>(hits) / static_cast<double>(candidate_total);
  out.recall = static_cast<double>(hits) / static_cast<double>(reference_total);
  out.f1 = f1_score(out.precision, out.recall);
  return out;
}

PrecisionRecallF1 ngram_score(const Interned& ids, int n) {
  const auto c = sorted_ngrams(ids.candidate, n);
  const auto r = sorted_ngrams(ids.reference, n);
  return from_counts(sorted_overlap(c, r), c.size(), r.size());
}

std::size_t lcs_length(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
  if (a.empty() || b.empty()) return 0;
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

PrecisionRecallF1 lcs_score(const Interned& ids) {
  return from_counts(lcs_length(ids.candidate, ids.reference), ids.candidate.size(), ids.reference.size());
}

void check_order(int n) {
  if (n != 1 && n != 2) throw std::invalid_argument("rouge_n supports n = 1 or 2");
}

}  // namespace

PrecisionRecallF1 rouge_n_normalized(const TokenSeq& candidate, const TokenSeq& reference, int n) {
  check_order(n);
  return ngram_score(intern(candidate, reference), n);
}

PrecisionRecallF1 rouge_l_normalized(const TokenSeq& candidate, const TokenSeq& reference) {
  return lcs_score(intern(candidate, reference));
}

PrecisionRecallF1 rouge_n(const TokenSeq& candidate, const TokenSeq& reference, int n, const RougeConfig& cfg) {
  return rouge_n_normalized(rouge_normalize(candidate, cfg), rouge_normalize(reference, cfg), n);
}

PrecisionRecallF1 rouge_l(const TokenSeq& candidate, const TokenSeq& reference, const RougeConfig& cfg) {
  return rouge_l_normalized(rouge_normalize(candidate, cfg), rouge_normalize(reference, cfg));
}

RougeTriple rouge_all_normalized(const TokenSeq& candidate, const TokenSeq& reference) {
  const Interned ids = intern(candidate, reference);
  return RougeTriple{ngram_score(ids, 1), ngram_score(ids, 2), lcs_score(ids)};
}

RougeTriple rouge_all(const TokenSeq& candidate, const TokenSeq& reference, const RougeConfig& cfg) {
  return rouge_all_normalized(rouge_normalize(candidate, cfg), rouge_normalize(reference, cfg));
}

double r_rouge(const TokenSeq& candidate, const TokenSeq& reference, const RougeConfig& cfg) {
  return rouge_all(candidate, reference, cfg).mean_f1();
}

}  // namespace sumrl
