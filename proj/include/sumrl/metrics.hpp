#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sumrl/embeddings.hpp"
#include "sumrl/text.hpp"

namespace sumrl {

struct RougeConfig {
  bool stemming = true;  // ROUGE-1.5.5 "-m"
  bool use_stopword_removal = false;
};

struct PrecisionRecallF1 {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// 2PR/(P+R), or 0 when P+R = 0.
double f1_score(double precision, double recall) noexcept;

/// Porter stemmer, following the reference C implementation by Martin
/// Porter (including its two published departures: "bli" -> "ble" and
/// "logi" -> "log" in step 2). Words of length <= 2 are returned unchanged.
std::string porter_stem(std::string_view word);

/// Applies stopword removal and stemming as configured. Every ROUGE function
/// calls this on both inputs; the *_normalized variants skip it.
TokenSeq rouge_normalize(const TokenSeq& tokens, const RougeConfig& cfg);

PrecisionRecallF1 rouge_n(const TokenSeq& candidate, const TokenSeq& reference, int n,
                          const RougeConfig& cfg);
PrecisionRecallF1 rouge_l(const TokenSeq& candidate, const TokenSeq& reference,
                          const RougeConfig& cfg);

PrecisionRecallF1 rouge_n_normalized(const TokenSeq& candidate, const TokenSeq& reference, int n);
PrecisionRecallF1 rouge_l_normalized(const TokenSeq& candidate, const TokenSeq& reference);

struct RougeTriple {
  PrecisionRecallF1 r1, r2, rl;
  /// (R-1 + R-2 + R-L) / 3 over F1 scores.
  double mean_f1() const noexcept { return (r1.f1 + r2.f1 + rl.f1) / 3.0; }
};

RougeTriple rouge_all(const TokenSeq& candidate, const TokenSeq& reference, const RougeConfig& cfg);
RougeTriple rouge_all_normalized(const TokenSeq& candidate, const TokenSeq& reference);

/// Mean of ROUGE-1, ROUGE-2 and ROUGE-L F1.
double r_rouge(const TokenSeq& candidate, const TokenSeq& reference, const RougeConfig& cfg);

/// Exact transportation cost: supplies and demands are integer masses with
/// equal totals, cost is row-major supplies.size() x demands.size() with
/// non-negative entries. Solved by successive shortest paths with Dijkstra
/// on reduced costs. Returns sum(flow * cost) (not divided by the total).
double min_cost_transport(std::span<const std::int64_t> supplies,
                          std::span<const std::int64_t> demands, std::span<const double> cost);

/// Word mover's distance between the normalized bag-of-words of the two
/// sequences with Euclidean ground cost. Masses are scaled to integers over
/// lcm(|candidate|, |reference|), so the optimum is exact. Throws on empty input.
double wmd(const TokenSeq& candidate, const TokenSeq& reference, const EmbeddingProvider& provider);

/// Distance charged to an empty candidate: 1 + max pairwise Euclidean
/// distance among the reference's token vectors.
double empty_candidate_distance(const TokenSeq& reference, const EmbeddingProvider& provider);

inline constexpr double kSeqEpsilon = 1e-2;

/// 1 / (d + epsilon).
double seq_reward_from_distance(double distance, double epsilon = kSeqEpsilon);

/// 1 / (wmd + epsilon); an empty candidate uses empty_candidate_distance.
double r_seq(const TokenSeq& candidate, const TokenSeq& reference, const EmbeddingProvider& provider,
             double epsilon = kSeqEpsilon);

}  // namespace sumrl
