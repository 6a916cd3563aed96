#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sumrl/corpus.hpp"
#include "sumrl/embeddings.hpp"
#include "sumrl/parallel.hpp"

namespace sumrl {

// ---------------------------------------------------------------------------
// State encoding

/// Features appended after the sentence embedding.
inline constexpr std::size_t kExtraFeatures = 3;

/// Row-major n x dim matrix of sentence states for one document, with the
/// "fraction selected so far" feature set to 0.
struct DocumentStates {
  std::size_t rows = 0;
  std::size_t dim = 0;
  std::vector<double> data;

  std::span<const double> row(std::size_t i) const { return {data.data() + i * dim, dim}; }
  std::span<double> row(std::size_t i) { return {data.data() + i * dim, dim}; }
};

/// state = mean word vector of sentence i, then (i+1)/n, |s_i| / max_j |s_j|,
/// and selected_so_far / n.
Vector encode_sentence(const Document& doc, std::size_t i, std::size_t selected_so_far,
                       const EmbeddingProvider& provider);
DocumentStates encode_document(const Document& doc, const EmbeddingProvider& provider);
std::vector<DocumentStates> encode_documents(const std::vector<Document>& docs, const EmbeddingProvider& provider,
                                             Exec exec = Exec::parallel);

/// Overwrites the last state component with selected_so_far / n.
void set_selected_fraction(std::span<double> state, std::size_t selected_so_far, std::size_t n);

// ---------------------------------------------------------------------------
// Parameters

enum class HeadKind { linear, mlp };

const char* to_string(HeadKind head) noexcept;
HeadKind head_from_string(const std::string& name);

struct TrainMeta {
  std::uint64_t seed = 0;
  std::size_t epochs = 0;

  friend bool operator==(const TrainMeta&, const TrainMeta&) = default;
};

/// Flat parameter vector plus its layout.
///   linear: [W0 (d), b0]
///   mlp:    [W1 (h x d, row-major), b1 (h), W2 (h), b2]
struct PolicyParams {
  HeadKind head = HeadKind::linear;
  std::size_t state_dim = 0;
  std::size_t hidden = 0;
  std::vector<double> theta;
  std::string encoder_fingerprint;
  TrainMeta meta;

  static std::size_t param_count(HeadKind head, std::size_t state_dim, std::size_t hidden);

  friend bool operator==(const PolicyParams&, const PolicyParams&) = default;
};

/// Uniform weights in [-0.05, 0.05] from the seed.
PolicyParams init_params(HeadKind head, std::size_t state_dim, std::size_t hidden, std::uint64_t seed,
                         std::string encoder_fingerprint = {});

/// Throws ErrorKind::compatibility when the params were built for another
/// embedding space or state width.
void check_compatible(const PolicyParams& params, const EmbeddingProvider& provider);

// ---------------------------------------------------------------------------
// Scoring

double sigmoid(double z) noexcept;

/// Pre-sigmoid head output. Throws on a state of the wrong width.
double policy_logit(const PolicyParams& params, std::span<const double> state);

/// pi(y = 1 | state), strictly inside (0, 1) for finite weights.
double score(const PolicyParams& params, std::span<const double> state);

/// grad += scale * d(logit)/d(theta). Returns the logit.
double accumulate_logit_grad(const PolicyParams& params, std::span<const double> state, double scale,
                             std::span<double> grad);

std::vector<double> forward_states(const PolicyParams& params, const DocumentStates& states);
std::vector<double> forward_doc(const PolicyParams& params, const Document& doc, const EmbeddingProvider& provider);

/// Indices of the m largest probabilities (ties: lower index) in document order.
Summary select_top_m(std::span<const double> probs, std::size_t m);

// ---------------------------------------------------------------------------
// Supervised training

struct LabeledState {
  std::span<const double> state;
  double label = 0.0;
};

struct LossAndGrad {
  double loss = 0.0;
  std::vector<double> grad;
};

/// Mean binary cross-entropy with p clamped to [1e-8, 1 - 1e-8], and its
/// exact gradient (zero where the clamp is active).
LossAndGrad supervised_loss_and_grad(const PolicyParams& params, std::span<const LabeledState> batch);

struct AdamConfig {
  double learning_rate = 1e-5;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

class AdamOptimizer {
 public:
  AdamOptimizer(AdamConfig cfg, std::size_t size) : cfg_(cfg), m_(size, 0.0), v_(size, 0.0) {}

  void step(std::span<double> theta, std::span<const double> grad);
  std::size_t steps_taken() const noexcept { return t_; }

 private:
  AdamConfig cfg_;
  std::vector<double> m_;
  std::vector<double> v_;
  std::size_t t_ = 0;
};

struct TrainConfig {
  double learning_rate = 1e-5;
  std::size_t batch_size = 32;
  std::size_t epochs = 10;
  std::uint64_t seed = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;

  AdamConfig adam() const { return {learning_rate, beta1, beta2, adam_eps}; }
  void validate() const;
};

struct PretrainResult {
  PolicyParams params;
  std::vector<double> loss_curve;  // mean loss per epoch
};

/// Adam on shuffled sentence-level mini-batches; deterministic in cfg.seed.
PretrainResult pretrain(const PolicyParams& init, const std::vector<DocumentStates>& states,
                        const std::vector<LabelVector>& labels, const TrainConfig& cfg);

// ---------------------------------------------------------------------------
// Checkpoints: {"version":1, "head", "state_dim", "hidden", "weights":{...},
// "encoder_fingerprint", "train_meta":{"seed","epochs"}}

void save_checkpoint(std::ostream& out, const PolicyParams& params);
void save_checkpoint(const std::filesystem::path& path, const PolicyParams& params);
PolicyParams load_checkpoint(std::istream& in);
PolicyParams load_checkpoint(const std::filesystem::path& path);

}  // namespace sumrl
