#include "sumrl/reward.hpp"

#include <algorithm>
#include <cmath>

#include "sumrl/error.hpp"

namespace sumrl {

double clamp_probability(double p) noexcept { return std::clamp(p, kProbFloor, 1.0 - kProbFloor); }

Summary Trajectory::summary() const {
  Summary s;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (steps[i].action == 1) s.selected.push_back(i);
  }
  return s;
}

void RewardConfig::validate() const {
  if (alpha1 < 0 || alpha2 < 0 || alpha3 < 0) throw Error(ErrorKind::input, "reward weights must be >= 0");
  if (beta_kl < 0) throw Error(ErrorKind::input, "beta_kl must be >= 0");
  if (!(epsilon > 0)) throw Error(ErrorKind::input, "epsilon must be > 0");
  if (keywords.n_k == 0) throw Error(ErrorKind::input, "n_k must be >= 1");
}

double combine_rewards(double rouge, double kw, double seq, const RewardConfig& cfg) noexcept {
  double total = 0.0;
  if (cfg.use_rouge) total += cfg.alpha1 * rouge;
  if (cfg.use_kw) total += cfg.alpha2 * kw;
  if (cfg.use_seq) total += cfg.alpha3 * seq;
  return total;
}

RewardContext::RewardContext(const Document& doc, const RewardConfig& cfg, const RewardProviders& providers)
    : doc_(&doc),
      cfg_(&cfg),
      keyword_provider_(&providers.keyword),
      sequence_provider_(&providers.sequence) {
  if (doc.reference.empty()) throw Error(ErrorKind::input, "document '" + doc.id + "' has an empty reference");
  reference_normalized_ = rouge_normalize(doc.reference, cfg.rouge);
  TokenSeq all;
  for (const auto& s : doc.sentences) all.insert(all.end(), s.tokens.begin(), s.tokens.end());
  doc_keywords_ = get_keywords(all, cfg.keywords, *keyword_provider_);
  empty_distance_ = empty_candidate_distance(doc.reference, *sequence_provider_);
}

RewardBreakdown RewardContext::evaluate(const Summary& summary) const {
  // All components are always filled in; the use_* flags only act in combine_rewards.
  RewardBreakdown out;
  const TokenSeq text = summary.tokens(*doc_);
  if (!text.empty()) {
    out.r_rouge = rouge_all_normalized(rouge_normalize(text, cfg_->rouge), reference_normalized_).mean_f1();
    out.r_kw = r_kw(doc_keywords_, get_keywords(text, cfg_->keywords, *keyword_provider_));
  }
  const double d = text.empty() ? empty_distance_ : wmd(text, doc_->reference, *sequence_provider_);
  out.r_seq = seq_reward_from_distance(d, cfg_->epsilon);
  out.r_unified = combine_rewards(out.r_rouge, out.r_kw, out.r_seq, *cfg_);
  return out;
}

RewardBreakdown r_unified(const Summary& summary, const Document& doc, const RewardConfig& cfg,
                          const RewardProviders& providers) {
  return RewardContext(doc, cfg, providers).evaluate(summary);
}

std::vector<double> step_rewards(const Trajectory& traj, const Document& doc, RewardBreakdown& breakdown,
                                 const RewardConfig& cfg) {
  if (traj.steps.size() != doc.size()) {
    throw Error(ErrorKind::input, "trajectory for '" + traj.doc_id + "' has " + std::to_string(traj.steps.size()) +
                                      " steps but the document has " + std::to_string(doc.size()) + " sentences");
  }
  std::vector<double> rewards(traj.steps.size(), 0.0);
  breakdown.kl_per_step.assign(traj.steps.size(), 0.0);
  for (std::size_t i = 0; i < traj.steps.size(); ++i) {
    const Step& s = traj.steps[i];
    const double log_ratio = std::log(clamp_probability(s.p_rl)) - std::log(clamp_probability(s.p_sl));
    breakdown.kl_per_step[i] = log_ratio;
    if (cfg.use_kl) rewards[i] = -cfg.beta_kl * log_ratio;
  }
  if (!rewards.empty()) rewards.back() += breakdown.r_unified;
  return rewards;
}

}  // namespace sumrl
