#include "sumrl/policy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "sumrl/error.hpp"
#include "sumrl/rng.hpp"
#include "sumrl/trajectory.hpp"

namespace sumrl {

using nlohmann::json;

// ---------------------------------------------------------------------------
// State encoding

namespace {

std::size_t longest_sentence(const Document& doc) {
  std::size_t longest = 1;
  for (const auto& s : doc.sentences) longest = std::max(longest, s.tokens.size());
  return longest;
}

void fill_state(const Document& doc, std::size_t i, std::size_t longest, const EmbeddingProvider& provider,
                std::span<double> out) {
  const std::size_t d = provider.dim();
  const PhraseEmbedding e = embed_phrase(doc.sentences[i].tokens, provider);
  std::copy(e.vector.begin(), e.vector.end(), out.begin());
  const auto n = static_cast<double>(doc.size());
  out[d] = static_cast<double>(i + 1) / n;
  out[d + 1] = static_cast<double>(doc.sentences[i].tokens.size()) / static_cast<double>(longest);
  out[d + 2] = 0.0;
}

}  // namespace

void set_selected_fraction(std::span<double> state, std::size_t selected_so_far, std::size_t n) {
  state.back() = n == 0 ? 0.0 : static_cast<double>(selected_so_far) / static_cast<double>(n);
}

Vector encode_sentence(const Document& doc, std::size_t i, std::size_t selected_so_far,
                       const EmbeddingProvider& provider) {
  if (i >= doc.size()) throw Error(ErrorKind::input, "sentence index out of range");
  Vector state(provider.dim() + kExtraFeatures);
  fill_state(doc, i, longest_sentence(doc), provider, state);
  set_selected_fraction(state, selected_so_far, doc.size());
  return state;
}

DocumentStates encode_document(const Document& doc, const EmbeddingProvider& provider) {
  DocumentStates states;
  states.rows = doc.size();
  states.dim = provider.dim() + kExtraFeatures;
  states.data.assign(states.rows * states.dim, 0.0);
  const std::size_t longest = longest_sentence(doc);
  for (std::size_t i = 0; i < doc.size(); ++i) fill_state(doc, i, longest, provider, states.row(i));
  return states;
}

std::vector<DocumentStates> encode_documents(const std::vector<Document>& docs, const EmbeddingProvider& provider,
                                             Exec exec) {
  std::vector<DocumentStates> out(docs.size());
  for_each_index(docs.size(), exec, [&](std::size_t i) { out[i] = encode_document(docs[i], provider); });
  return out;
}

// ---------------------------------------------------------------------------
// Parameters

const char* to_string(HeadKind head) noexcept { return head == HeadKind::linear ? "linear" : "mlp"; }

HeadKind head_from_string(const std::string& name) {
  if (name == "linear") return HeadKind::linear;
  if (name == "mlp") return HeadKind::mlp;
  throw Error(ErrorKind::input, "unknown head '" + name + "' (expected linear or mlp)");
}

std::size_t PolicyParams::param_count(HeadKind head, std::size_t state_dim, std::size_t hidden) {
  return head == HeadKind::linear ? state_dim + 1 : hidden * state_dim + hidden + hidden + 1;
}

PolicyParams init_params(HeadKind head, std::size_t state_dim, std::size_t hidden, std::uint64_t seed,
                         std::string encoder_fingerprint) {
  if (state_dim == 0) throw Error(ErrorKind::input, "state dimension must be positive");
  if (head == HeadKind::mlp && hidden == 0) throw Error(ErrorKind::input, "mlp head needs hidden > 0");
  PolicyParams p;
  p.head = head;
  p.state_dim = state_dim;
  p.hidden = head == HeadKind::mlp ? hidden : 0;
  p.encoder_fingerprint = std::move(encoder_fingerprint);
  p.meta.seed = seed;
  p.theta.resize(PolicyParams::param_count(head, state_dim, p.hidden));
  Rng rng(derive_seed(seed, 0x1417ULL));
  for (double& w : p.theta) w = rng.uniform(-0.05, 0.05);
  return p;
}

void check_compatible(const PolicyParams& params, const EmbeddingProvider& provider) {
  if (params.state_dim != provider.dim() + kExtraFeatures) {
    throw Error(ErrorKind::compatibility, "checkpoint state_dim " + std::to_string(params.state_dim) +
                                              " does not match embedding dim " + std::to_string(provider.dim()) +
                                              " + " + std::to_string(kExtraFeatures));
  }
  if (!params.encoder_fingerprint.empty() && params.encoder_fingerprint != provider.fingerprint()) {
    throw Error(ErrorKind::compatibility, "checkpoint encoder fingerprint '" + params.encoder_fingerprint +
                                              "' does not match provider '" + provider.fingerprint() + "'");
  }
}

// ---------------------------------------------------------------------------
// Scoring

double sigmoid(double z) noexcept {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

namespace {

void check_width(const PolicyParams& params, std::span<const double> state) {
  if (state.size() != params.state_dim) {
    throw Error(ErrorKind::input, "state width " + std::to_string(state.size()) + " does not match policy width " +
                                      std::to_string(params.state_dim));
  }
}

}  // namespace

double policy_logit(const PolicyParams& params, std::span<const double> state) {
  check_width(params, state);
  const std::size_t d = params.state_dim;
  const double* w = params.theta.data();
  if (params.head == HeadKind::linear) return dot({w, d}, state) + w[d];
  const std::size_t h = params.hidden;
  const double* b1 = w + h * d;
  const double* w2 = b1 + h;
  double z = w2[h];
  for (std::size_t k = 0; k < h; ++k) z += w2[k] * std::tanh(dot({w + k * d, d}, state) + b1[k]);
  return z;
}

double score(const PolicyParams& params, std::span<const double> state) {
  return sigmoid(policy_logit(params, state));
}

double accumulate_logit_grad(const PolicyParams& params, std::span<const double> state, double scale,
                             std::span<double> grad) {
  check_width(params, state);
  const std::size_t d = params.state_dim;
  const double* w = params.theta.data();
  double* g = grad.data();
  if (params.head == HeadKind::linear) {
    for (std::size_t j = 0; j < d; ++j) g[j] += scale * state[j];
    g[d] += scale;
    return dot({w, d}, state) + w[d];
  }
  const std::size_t h = params.hidden;
  const double* b1 = w + h * d;
  const double* w2 = b1 + h;
  double* gb1 = g + h * d;
  double* gw2 = gb1 + h;
  double z = w2[h];
  gw2[h] += scale;
  for (std::size_t k = 0; k < h; ++k) {
    const double a = std::tanh(dot({w + k * d, d}, state) + b1[k]);
    z += w2[k] * a;
    gw2[k] += scale * a;
    const double back = scale * w2[k] * (1.0 - a * a);
    gb1[k] += back;
    double* gw1 = g + k * d;
    for (std::size_t j = 0; j < d; ++j) gw1[j] += back * state[j];
  }
  return z;
}

std::vector<double> forward_states(const PolicyParams& params, const DocumentStates& states) {
  std::vector<double> probs(states.rows);
  for (std::size_t i = 0; i < states.rows; ++i) probs[i] = score(params, states.row(i));
  return probs;
}

std::vector<double> forward_doc(const PolicyParams& params, const Document& doc, const EmbeddingProvider& provider) {
  return forward_states(params, encode_document(doc, provider));
}

Summary select_top_m(std::span<const double> probs, std::size_t m) {
  if (m == 0) throw Error(ErrorKind::input, "top-m selection needs m >= 1");
  std::vector<std::size_t> order(probs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return probs[a] > probs[b]; });
  order.resize(std::min(m, order.size()));
  std::sort(order.begin(), order.end());
  return Summary{std::move(order)};
}

// ---------------------------------------------------------------------------
// Supervised training

LossAndGrad supervised_loss_and_grad(const PolicyParams& params, std::span<const LabeledState> batch) {
  if (batch.empty()) throw Error(ErrorKind::input, "supervised batch is empty");
  LossAndGrad out;
  out.grad.assign(params.theta.size(), 0.0);
  const double inv = 1.0 / static_cast<double>(batch.size());
  for (const LabeledState& ex : batch) {
    const double p = score(params, ex.state);
    const double pc = clamp_probability(p);
    out.loss -= inv * (ex.label * std::log(pc) + (1.0 - ex.label) * std::log(1.0 - pc));
    const bool clamped = p < kProbFloor || p > 1.0 - kProbFloor;
    if (!clamped) {
      // d/dz of -[y log s + (1-y) log(1-s)] = s - y
      accumulate_logit_grad(params, ex.state, inv * (p - ex.label), out.grad);
    }
  }
  return out;
}

void AdamOptimizer::step(std::span<double> theta, std::span<const double> grad) {
  ++t_;
  const double c1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  for (std::size_t i = 0; i < theta.size(); ++i) {
    m_[i] = cfg_.beta1 * m_[i] + (1.0 - cfg_.beta1) * grad[i];
    v_[i] = cfg_.beta2 * v_[i] + (1.0 - cfg_.beta2) * grad[i] * grad[i];
    const double m_hat = m_[i] / c1;
    const double v_hat = v_[i] / c2;
    theta[i] -= cfg_.learning_rate * m_hat / (std::sqrt(v_hat) + cfg_.eps);
  }
}

void TrainConfig::validate() const {
  if (!(learning_rate >= 0.0)) throw Error(ErrorKind::input, "learning_rate must be >= 0");
  if (batch_size == 0) throw Error(ErrorKind::input, "batch_size must be positive");
}

PretrainResult pretrain(const PolicyParams& init, const std::vector<DocumentStates>& states,
                        const std::vector<LabelVector>& labels, const TrainConfig& cfg) {
  cfg.validate();
  if (states.size() != labels.size()) throw Error(ErrorKind::input, "labels missing for some documents");
  std::vector<LabeledState> examples;
  for (std::size_t d = 0; d < states.size(); ++d) {
    if (labels[d].size() != states[d].rows) {
      throw Error(ErrorKind::input, "label count mismatch for document " + std::to_string(d));
    }
    for (std::size_t i = 0; i < states[d].rows; ++i) examples.push_back({states[d].row(i), double(labels[d][i])});
  }
  if (examples.empty()) throw Error(ErrorKind::input, "no training examples");

  PretrainResult out{init, {}};
  AdamOptimizer adam(cfg.adam(), init.theta.size());
  Rng rng(derive_seed(cfg.seed, 0xB7E0ULL));
  std::vector<LabeledState> batch;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(std::span<LabeledState>(examples));
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < examples.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(examples.size(), start + cfg.batch_size);
      const std::span<const LabeledState> mb(examples.data() + start, end - start);
      LossAndGrad lg = supervised_loss_and_grad(out.params, mb);
      if (!std::isfinite(lg.loss)) {
        throw Error(ErrorKind::numeric, "non-finite supervised loss in epoch " + std::to_string(epoch));
      }
      epoch_loss += lg.loss * static_cast<double>(mb.size());
      adam.step(out.params.theta, lg.grad);
    }
    out.loss_curve.push_back(epoch_loss / static_cast<double>(examples.size()));
  }
  out.params.meta = TrainMeta{cfg.seed, init.meta.epochs + cfg.epochs};
  return out;
}

// ---------------------------------------------------------------------------
// Checkpoints

namespace {

constexpr int kCheckpointVersion = 1;

json slice(const std::vector<double>& theta, std::size_t begin, std::size_t count) {
  return json(std::vector<double>(theta.begin() + static_cast<long>(begin),
                                  theta.begin() + static_cast<long>(begin + count)));
}

void append_weights(const json& weights, const char* name, std::size_t expected, std::vector<double>& theta) {
  if (!weights.contains(name)) throw Error(ErrorKind::input, std::string("checkpoint missing weights.") + name);
  const auto values = weights.at(name).get<std::vector<double>>();
  if (values.size() != expected) {
    throw Error(ErrorKind::input, std::string("checkpoint weights.") + name + " has " +
                                      std::to_string(values.size()) + " values, expected " + std::to_string(expected));
  }
  theta.insert(theta.end(), values.begin(), values.end());
}

}  // namespace

void save_checkpoint(std::ostream& out, const PolicyParams& p) {
  json ck;
  ck["version"] = kCheckpointVersion;
  ck["head"] = to_string(p.head);
  ck["state_dim"] = p.state_dim;
  ck["hidden"] = p.hidden;
  const std::size_t d = p.state_dim;
  json w;
  if (p.head == HeadKind::linear) {
    w["W0"] = slice(p.theta, 0, d);
    w["b0"] = slice(p.theta, d, 1);
  } else {
    const std::size_t h = p.hidden;
    w["W1"] = slice(p.theta, 0, h * d);
    w["b1"] = slice(p.theta, h * d, h);
    w["W2"] = slice(p.theta, h * d + h, h);
    w["b2"] = slice(p.theta, h * d + 2 * h, 1);
  }
  ck["weights"] = std::move(w);
  ck["encoder_fingerprint"] = p.encoder_fingerprint;
  ck["train_meta"] = {{"seed", p.meta.seed}, {"epochs", p.meta.epochs}};
  out << ck.dump(1) << '\n';
}

void save_checkpoint(const std::filesystem::path& path, const PolicyParams& params) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::input, "cannot write checkpoint " + path.string());
  save_checkpoint(out, params);
}

PolicyParams load_checkpoint(std::istream& in) {
  json ck;
  try {
    ck = json::parse(in);
    if (ck.value("version", 0) != kCheckpointVersion) {
      throw Error(ErrorKind::compatibility, "unsupported checkpoint version");
    }
    PolicyParams p;
    p.head = head_from_string(ck.at("head").get<std::string>());
    p.state_dim = ck.at("state_dim").get<std::size_t>();
    p.hidden = ck.at("hidden").get<std::size_t>();
    const json& w = ck.at("weights");
    const std::size_t d = p.state_dim;
    if (p.head == HeadKind::linear) {
      append_weights(w, "W0", d, p.theta);
      append_weights(w, "b0", 1, p.theta);
    } else {
      const std::size_t h = p.hidden;
      append_weights(w, "W1", h * d, p.theta);
      append_weights(w, "b1", h, p.theta);
      append_weights(w, "W2", h, p.theta);
      append_weights(w, "b2", 1, p.theta);
    }
    for (double x : p.theta) {
      if (!std::isfinite(x)) throw Error(ErrorKind::numeric, "checkpoint contains non-finite weights");
    }
    p.encoder_fingerprint = ck.value("encoder_fingerprint", "");
    if (ck.contains("train_meta")) {
      p.meta.seed = ck["train_meta"].value("seed", std::uint64_t{0});
      p.meta.epochs = ck["train_meta"].value("epochs", std::size_t{0});
    }
    return p;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::input, std::string("malformed checkpoint: ") + e.what());
  }
}

PolicyParams load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::input, "cannot open checkpoint " + path.string());
  return load_checkpoint(in);
}

}  // namespace sumrl
