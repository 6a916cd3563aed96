#pragma once

#include <vector>

#include "sumrl/corpus.hpp"
#include "sumrl/embeddings.hpp"
#include "sumrl/keywords.hpp"
#include "sumrl/metrics.hpp"
#include "sumrl/trajectory.hpp"

namespace sumrl {

struct RewardConfig {
  double alpha1 = 0.3;  // R_ROUGE weight
  double alpha2 = 0.4;  // R_kw weight
  double alpha3 = 0.3;  // R_seq weight
  double beta_kl = 0.05;
  double epsilon = kSeqEpsilon;
  RougeConfig rouge;
  KeywordConfig keywords;  // keywords.n_k is the keyword set size
  bool use_rouge = true;
  bool use_kw = true;
  bool use_seq = true;
  bool use_kl = true;

  void validate() const;
};

struct RewardBreakdown {
  double r_rouge = 0.0;
  double r_kw = 0.0;
  double r_seq = 0.0;
  double r_unified = 0.0;
  std::vector<double> kl_per_step;  // filled by step_rewards
};

/// The keyword reward may use a different embedding space than the sequence reward.
struct RewardProviders {
  const EmbeddingProvider& keyword;
  const EmbeddingProvider& sequence;
};

/// Per-document quantities that do not depend on the summary: normalized
/// reference tokens, document keywords and the empty-summary distance.
class RewardContext {
 public:
  RewardContext(const Document& doc, const RewardConfig& cfg, const RewardProviders& providers);

  const Document& doc() const noexcept { return *doc_; }
  const KeywordSet& doc_keywords() const noexcept { return doc_keywords_; }

  /// All three components, and their weighted sum over the enabled ones.
  /// Disabled terms contribute 0 to r_unified; weights are not renormalized.
  RewardBreakdown evaluate(const Summary& summary) const;

 private:
  const Document* doc_;
  const RewardConfig* cfg_;
  const EmbeddingProvider* keyword_provider_;
  const EmbeddingProvider* sequence_provider_;
  TokenSeq reference_normalized_;
  KeywordSet doc_keywords_;
  double empty_distance_ = 0.0;
};

RewardBreakdown r_unified(const Summary& summary, const Document& doc, const RewardConfig& cfg,
                          const RewardProviders& providers);

/// alpha1 * rouge + alpha2 * kw + alpha3 * seq over the enabled terms.
double combine_rewards(double rouge, double kw, double seq, const RewardConfig& cfg) noexcept;

/// r_i = -beta_KL * (log p_RL(y_i) - log p_SL(y_i)), plus r_unified on the
/// last step. The KL term is zero when use_kl is off. Writes the KL terms
/// into breakdown.kl_per_step. Throws when the trajectory length differs
/// from the document's sentence count.
std::vector<double> step_rewards(const Trajectory& traj, const Document& doc, RewardBreakdown& breakdown,
                                 const RewardConfig& cfg);

}  // namespace sumrl
