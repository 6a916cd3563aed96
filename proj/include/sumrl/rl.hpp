#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sumrl/corpus.hpp"
#include "sumrl/parallel.hpp"
#include "sumrl/policy.hpp"
#include "sumrl/reward.hpp"
#include "sumrl/rng.hpp"
#include "sumrl/trajectory.hpp"

namespace sumrl {

enum class AdvantageMode { whitened_returns, raw_returns };
enum class Algorithm { ppo, reinforce };

const char* to_string(AdvantageMode mode) noexcept;
AdvantageMode advantage_mode_from_string(const std::string& name);
const char* to_string(Algorithm algorithm) noexcept;
Algorithm algorithm_from_string(const std::string& name);

struct PpoConfig {
  double clip_epsilon = 0.2;
  std::size_t epochs_per_batch = 4;
  std::size_t rollouts_per_update = 16;
  std::size_t minibatch_size = 0;  // steps per gradient step; 0 = whole batch
  double gamma = 1.0;
  AdvantageMode advantage_mode = AdvantageMode::whitened_returns;
  double learning_rate = 1e-5;
  std::size_t max_updates = 100;
  std::uint64_t seed = 0;
  /// Remaining epochs of a batch are skipped once the mean sampled KL of the
  /// updated policy against pi_SL on the batch exceeds this value.
  double kl_early_stop = 0.05;

  void validate() const;
};

/// Walks the sentences in order: the state carries the fraction selected so
/// far, the action is drawn from Bernoulli(pi_RL) and both policies' clamped
/// probabilities of the taken action are recorded.
Trajectory rollout(const PolicyParams& rl, const PolicyParams& sl, const Document& doc,
                   const DocumentStates& states, Rng& rng);

/// G_i = sum_{j >= i} gamma^(j-i) r_j from the steps' rewards.
void compute_returns(Trajectory& traj, double gamma);

/// Returns for every trajectory, then advantages: the returns themselves, or
/// whitened over all steps of the batch (std floored at 1e-6).
void compute_returns_and_advantages(std::vector<Trajectory>& batch, const PpoConfig& cfg);

struct SurrogateResult {
  double loss = 0.0;  // -mean min(r A, clip(r) A)
  std::vector<double> grad;
  double mean_ratio = 0.0;
  double clip_fraction = 0.0;  // share of steps with |r - 1| > epsilon
};

/// Clipped surrogate over the given steps with r = p_new(y) / p_rl(y) where
/// p_rl is the collection-time probability stored in the step.
SurrogateResult ppo_surrogate(const PolicyParams& params, const std::vector<const Step*>& steps,
                              double clip_epsilon);

/// -mean G_i log p(y_i) and its gradient.
LossAndGrad reinforce_loss_and_grad(const PolicyParams& params, const std::vector<const Step*>& steps);

/// Mean over steps of log p_new(y) - log p_SL(y).
double mean_kl_to_supervised(const PolicyParams& params, const std::vector<const Step*>& steps);

struct UpdateStats {
  double loss = 0.0;
  double mean_ratio = 1.0;     // first epoch
  double clip_fraction = 0.0;  // averaged over the epochs run
  double kl_to_supervised = 0.0;
  std::size_t epochs_run = 0;
};

UpdateStats ppo_update(PolicyParams& params, AdamOptimizer& adam, const std::vector<Trajectory>& batch,
                       const PpoConfig& cfg, Rng& rng);
UpdateStats reinforce_update(PolicyParams& params, AdamOptimizer& adam, const std::vector<Trajectory>& batch);

struct UpdateRecord {
  std::size_t update = 0;
  double mean_r_unified = 0.0;
  double mean_r_rouge = 0.0;
  double mean_r_kw = 0.0;
  double mean_r_seq = 0.0;
  double mean_kl = 0.0;  // mean per-step log p_RL(y) - log p_SL(y) at collection
  double clip_fraction = 0.0;
  double wall_ms = 0.0;
};

struct EncoderProviders {
  const EmbeddingProvider& encoder;
  const EmbeddingProvider& keyword;
  const EmbeddingProvider& sequence;
};

struct FinetuneResult {
  PolicyParams params;
  std::vector<UpdateRecord> log;
};

/// RL fine-tuning from a frozen copy of params_sl. Rollouts and rewards run
/// through exec; each rollout's generator is seeded from (seed, update,
/// slot), so the result does not depend on the thread count. on_update, when
/// set, sees every record as soon as it is produced.
FinetuneResult finetune(const PolicyParams& params_sl, const std::vector<Document>& corpus,
                        const EncoderProviders& providers, const RewardConfig& reward_cfg, const PpoConfig& ppo_cfg,
                        Algorithm algorithm, Exec exec = Exec::parallel,
                        const std::function<void(const UpdateRecord&)>& on_update = {});

}  // namespace sumrl
