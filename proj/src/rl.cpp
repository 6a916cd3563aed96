#include "sumrl/rl.hpp"

#include <chrono>
#include <cmath>
#include <numeric>
#include <optional>

#include "sumrl/error.hpp"

namespace sumrl {

const char* to_string(AdvantageMode mode) noexcept {
  return mode == AdvantageMode::whitened_returns ? "whitened_returns" : "raw_returns";
}

AdvantageMode advantage_mode_from_string(const std::string& name) {
  if (name == "whitened_returns") return AdvantageMode::whitened_returns;
  if (name == "raw_returns") return AdvantageMode::raw_returns;
  throw Error(ErrorKind::input, "unknown advantage mode '" + name + "'");
}

const char* to_string(Algorithm algorithm) noexcept { return algorithm == Algorithm::ppo ? "ppo" : "reinforce"; }

Algorithm algorithm_from_string(const std::string& name) {
  if (name == "ppo") return Algorithm::ppo;
  if (name == "reinforce") return Algorithm::reinforce;
  throw Error(ErrorKind::input, "unknown algorithm '" + name + "' (expected ppo or reinforce)");
}

void PpoConfig::validate() const {
  if (!(clip_epsilon > 0.0 && clip_epsilon < 1.0)) throw Error(ErrorKind::input, "clip_epsilon must be in (0, 1)");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw Error(ErrorKind::input, "gamma must be in (0, 1]");
  if (epochs_per_batch == 0) throw Error(ErrorKind::input, "epochs_per_batch must be positive");
  if (rollouts_per_update == 0) throw Error(ErrorKind::input, "rollouts_per_update must be positive");
  if (!(learning_rate >= 0.0)) throw Error(ErrorKind::input, "learning_rate must be >= 0");
}

Trajectory rollout(const PolicyParams& rl, const PolicyParams& sl, const Document& doc, const DocumentStates& states,
                   Rng& rng) {
  Trajectory traj;
  traj.doc_id = doc.id;
  traj.steps.resize(states.rows);
  std::size_t selected = 0;
  for (std::size_t i = 0; i < states.rows; ++i) {
    Step& step = traj.steps[i];
    const auto row = states.row(i);
    step.state.assign(row.begin(), row.end());
    set_selected_fraction(step.state, selected, states.rows);
    const double p_rl = score(rl, step.state);
    const double p_sl = score(sl, step.state);
    step.action = rng.bernoulli(p_rl) ? 1 : 0;
    step.p_rl = clamp_probability(step.action ? p_rl : 1.0 - p_rl);
    step.p_sl = clamp_probability(step.action ? p_sl : 1.0 - p_sl);
    selected += static_cast<std::size_t>(step.action);
  }
  return traj;
}

void compute_returns(Trajectory& traj, double gamma) {
  double running = 0.0;
  for (std::size_t i = traj.steps.size(); i-- > 0;) {
    running = traj.steps[i].reward + gamma * running;
    traj.steps[i].ret = running;
  }
}

void compute_returns_and_advantages(std::vector<Trajectory>& batch, const PpoConfig& cfg) {
  std::size_t count = 0;
  double sum = 0.0;
  for (Trajectory& t : batch) {
    compute_returns(t, cfg.gamma);
    for (Step& s : t.steps) {
      s.advantage = s.ret;
      sum += s.ret;
      ++count;
    }
  }
  if (cfg.advantage_mode != AdvantageMode::whitened_returns || count == 0) return;
  const double mean = sum / static_cast<double>(count);
  double sq = 0.0;
  for (const Trajectory& t : batch) {
    for (const Step& s : t.steps) sq += (s.ret - mean) * (s.ret - mean);
  }
  const double sd = std::max(std::sqrt(sq / static_cast<double>(count)), 1e-6);
  for (Trajectory& t : batch) {
    for (Step& s : t.steps) s.advantage = (s.ret - mean) / sd;
  }
}

namespace {

struct ActionProb {
  double p = 0.5;          // clamped probability of the recorded action
  double dlogp_dz = 0.0;   // derivative of log p w.r.t. the logit (0 when clamped)
};

ActionProb action_prob(const PolicyParams& params, const Step& step) {
  const double s = sigmoid(policy_logit(params, step.state));
  const double raw = step.action ? s : 1.0 - s;
  ActionProb out;
  out.p = clamp_probability(raw);
  if (raw == out.p) out.dlogp_dz = static_cast<double>(step.action) - s;
  return out;
}

std::vector<const Step*> all_steps(const std::vector<Trajectory>& batch) {
  std::vector<const Step*> out;
  for (const Trajectory& t : batch) {
    for (const Step& s : t.steps) out.push_back(&s);
  }
  return out;
}

bool all_finite(double loss, const std::vector<double>& grad) {
  if (!std::isfinite(loss)) return false;
  for (double g : grad) {
    if (!std::isfinite(g)) return false;
  }
  return true;
}

std::string batch_name(const std::vector<Trajectory>& batch) {
  std::string out;
  for (std::size_t i = 0; i < batch.size() && i < 4; ++i) out += (i ? "," : "") + batch[i].doc_id;
  if (batch.size() > 4) out += ",...";
  return "[" + out + "]";
}

}  // namespace

SurrogateResult ppo_surrogate(const PolicyParams& params, const std::vector<const Step*>& steps,
                              double clip_epsilon) {
  SurrogateResult out;
  out.grad.assign(params.theta.size(), 0.0);
  if (steps.empty()) return out;
  const double inv = 1.0 / static_cast<double>(steps.size());
  std::size_t clipped = 0;
  for (const Step* step : steps) {
    const ActionProb ap = action_prob(params, *step);
    const double ratio = ap.p / step->p_rl;
    const double a = step->advantage;
    const double unclipped = ratio * a;
    const double bounded = std::clamp(ratio, 1.0 - clip_epsilon, 1.0 + clip_epsilon) * a;
    out.loss -= inv * std::min(unclipped, bounded);
    out.mean_ratio += inv * ratio;
    if (std::abs(ratio - 1.0) > clip_epsilon) ++clipped;
    if (unclipped <= bounded && a != 0.0 && ap.dlogp_dz != 0.0) {
      // d(ratio)/dz = ratio * dlogp/dz
      accumulate_logit_grad(params, step->state, -inv * a * ratio * ap.dlogp_dz, out.grad);
    }
  }
  out.clip_fraction = static_cast<double>(clipped) * inv;
  return out;
}

LossAndGrad reinforce_loss_and_grad(const PolicyParams& params, const std::vector<const Step*>& steps) {
  LossAndGrad out;
  out.grad.assign(params.theta.size(), 0.0);
  if (steps.empty()) return out;
  const double inv = 1.0 / static_cast<double>(steps.size());
  for (const Step* step : steps) {
    const ActionProb ap = action_prob(params, *step);
    out.loss -= inv * step->ret * std::log(ap.p);
    if (step->ret != 0.0 && ap.dlogp_dz != 0.0) {
      accumulate_logit_grad(params, step->state, -inv * step->ret * ap.dlogp_dz, out.grad);
    }
  }
  return out;
}

double mean_kl_to_supervised(const PolicyParams& params, const std::vector<const Step*>& steps) {
  if (steps.empty()) return 0.0;
  double total = 0.0;
  for (const Step* step : steps) total += std::log(action_prob(params, *step).p) - std::log(step->p_sl);
  return total / static_cast<double>(steps.size());
}

UpdateStats ppo_update(PolicyParams& params, AdamOptimizer& adam, const std::vector<Trajectory>& batch,
                       const PpoConfig& cfg, Rng& rng) {
  UpdateStats stats;
  std::vector<const Step*> steps = all_steps(batch);
  if (steps.empty()) return stats;
  const std::size_t mb = cfg.minibatch_size == 0 ? steps.size() : std::min(cfg.minibatch_size, steps.size());
  double clip_sum = 0.0;
  for (std::size_t epoch = 0; epoch < cfg.epochs_per_batch; ++epoch) {
    if (mb < steps.size()) rng.shuffle(std::span<const Step*>(steps));
    double epoch_clip = 0.0;
    std::size_t minibatches = 0;
    for (std::size_t start = 0; start < steps.size(); start += mb) {
      const std::vector<const Step*> part(steps.begin() + static_cast<long>(start),
                                          steps.begin() + static_cast<long>(std::min(steps.size(), start + mb)));
      SurrogateResult sr = ppo_surrogate(params, part, cfg.clip_epsilon);
      if (!all_finite(sr.loss, sr.grad)) {
        throw Error(ErrorKind::numeric, "non-finite PPO loss or gradient in batch " + batch_name(batch));
      }
      if (epoch == 0 && start == 0) stats.mean_ratio = sr.mean_ratio;
      stats.loss = sr.loss;
      epoch_clip += sr.clip_fraction;
      ++minibatches;
      adam.step(params.theta, sr.grad);
    }
    clip_sum += epoch_clip / static_cast<double>(minibatches);
    ++stats.epochs_run;
    stats.kl_to_supervised = mean_kl_to_supervised(params, steps);
    if (stats.kl_to_supervised > cfg.kl_early_stop) break;
  }
  stats.clip_fraction = clip_sum / static_cast<double>(stats.epochs_run);
  return stats;
}

UpdateStats reinforce_update(PolicyParams& params, AdamOptimizer& adam, const std::vector<Trajectory>& batch) {
  UpdateStats stats;
  const std::vector<const Step*> steps = all_steps(batch);
  if (steps.empty()) return stats;
  LossAndGrad lg = reinforce_loss_and_grad(params, steps);
  if (!all_finite(lg.loss, lg.grad)) {
    throw Error(ErrorKind::numeric, "non-finite REINFORCE loss or gradient in batch " + batch_name(batch));
  }
  adam.step(params.theta, lg.grad);
  stats.loss = lg.loss;
  stats.epochs_run = 1;
  stats.kl_to_supervised = mean_kl_to_supervised(params, steps);
  return stats;
}

FinetuneResult finetune(const PolicyParams& params_sl, const std::vector<Document>& corpus,
                        const EncoderProviders& providers, const RewardConfig& reward_cfg, const PpoConfig& ppo_cfg,
                        Algorithm algorithm, Exec exec, const std::function<void(const UpdateRecord&)>& on_update) {
  reward_cfg.validate();
  ppo_cfg.validate();
  if (corpus.empty()) throw Error(ErrorKind::input, "fine-tuning corpus is empty");
  check_compatible(params_sl, providers.encoder);

  FinetuneResult out{params_sl, {}};
  if (ppo_cfg.max_updates == 0) return out;

  const std::vector<DocumentStates> states = encode_documents(corpus, providers.encoder, exec);
  const RewardProviders reward_providers{providers.keyword, providers.sequence};
  std::vector<std::optional<RewardContext>> contexts(corpus.size());
  for_each_index(corpus.size(), exec,
                 [&](std::size_t i) { contexts[i].emplace(corpus[i], reward_cfg, reward_providers); });

  AdamOptimizer adam(AdamConfig{ppo_cfg.learning_rate, 0.9, 0.999, 1e-8}, params_sl.theta.size());
  Rng order_rng(derive_seed(ppo_cfg.seed, 0x0D3E7ULL));
  Rng update_rng(derive_seed(ppo_cfg.seed, 0x0A7EULL));
  std::vector<std::size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), 0);
  std::size_t cursor = order.size();  // forces a shuffle on first use

  const std::size_t per_update = std::min(ppo_cfg.rollouts_per_update, corpus.size());
  for (std::size_t update = 0; update < ppo_cfg.max_updates; ++update) {
    const auto started = std::chrono::steady_clock::now();
    std::vector<std::size_t> picked;
    while (picked.size() < per_update) {
      if (cursor == order.size()) {
        order_rng.shuffle(std::span<std::size_t>(order));
        cursor = 0;
      }
      picked.push_back(order[cursor++]);
    }

    std::vector<Trajectory> batch(picked.size());
    std::vector<RewardBreakdown> breakdowns(picked.size());
    for_each_index(picked.size(), exec, [&](std::size_t k) {
      const std::size_t d = picked[k];
      Rng rng(derive_seed(ppo_cfg.seed, update * ppo_cfg.rollouts_per_update + k + 1));
      Trajectory traj = rollout(out.params, params_sl, corpus[d], states[d], rng);
      traj.doc_index = d;
      RewardBreakdown br = contexts[d]->evaluate(traj.summary());
      const std::vector<double> rewards = step_rewards(traj, corpus[d], br, reward_cfg);
      for (std::size_t i = 0; i < rewards.size(); ++i) traj.steps[i].reward = rewards[i];
      batch[k] = std::move(traj);
      breakdowns[k] = std::move(br);
    });
    compute_returns_and_advantages(batch, ppo_cfg);

    UpdateRecord rec;
    rec.update = update;
    std::size_t step_count = 0;
    for (const RewardBreakdown& br : breakdowns) {
      rec.mean_r_unified += br.r_unified;
      rec.mean_r_rouge += br.r_rouge;
      rec.mean_r_kw += br.r_kw;
      rec.mean_r_seq += br.r_seq;
      for (double kl : br.kl_per_step) rec.mean_kl += kl;
      step_count += br.kl_per_step.size();
    }
    const double inv = 1.0 / static_cast<double>(breakdowns.size());
    rec.mean_r_unified *= inv;
    rec.mean_r_rouge *= inv;
    rec.mean_r_kw *= inv;
    rec.mean_r_seq *= inv;
    if (step_count) rec.mean_kl /= static_cast<double>(step_count);

    const UpdateStats stats = algorithm == Algorithm::ppo ? ppo_update(out.params, adam, batch, ppo_cfg, update_rng)
                                                          : reinforce_update(out.params, adam, batch);
    rec.clip_fraction = stats.clip_fraction;
    rec.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    if (on_update) on_update(rec);
    out.log.push_back(rec);
  }
  return out;
}

}  // namespace sumrl
