#include "sumrl/config.hpp"

#include <fstream>
#include <initializer_list>
#include <iomanip>
#include <sstream>

#include "sumrl/error.hpp"

namespace sumrl {

using nlohmann::json;

EmbeddingProvider ProviderSpec::build() const {
  if (kind == "hash") return EmbeddingProvider::hashed(dim, seed);
  if (kind == "file") {
    OovPolicy policy;
    if (oov == "hash_fallback") {
      policy = OovPolicy::hash_fallback;
    } else if (oov == "zero") {
      policy = OovPolicy::zero;
    } else {
      throw Error(ErrorKind::input, "unknown oov policy '" + oov + "'");
    }
    if (path.empty()) throw Error(ErrorKind::input, "file embedding provider needs a path");
    return load_vectors(path, policy, seed);
  }
  throw Error(ErrorKind::input, "unknown embedding provider kind '" + kind + "'");
}

void RunConfig::finalize() {
  train.seed = seed;
  ppo.seed = seed;
  reward.keywords.stopwords =
      stopwords_path.empty() ? nullptr : std::make_shared<const StopwordSet>(load_stopwords(stopwords_path));
}

void RunConfig::validate() const {
  if (m == 0) throw Error(ErrorKind::input, "m must be >= 1");
  reward.validate();
  train.validate();
  ppo.validate();
  if (head == HeadKind::mlp && hidden == 0) throw Error(ErrorKind::input, "mlp head needs hidden > 0");
}

namespace {

json provider_json(const ProviderSpec& p) {
  return {{"kind", p.kind}, {"dim", p.dim}, {"seed", p.seed}, {"path", p.path}, {"oov", p.oov}};
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw Error(ErrorKind::input, "config section '" + where + "' must be an object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw Error(ErrorKind::input, "unknown config key '" + where + (where.empty() ? "" : ".") + key + "'");
  }
}

template <typename T>
void read(const json& j, const char* key, T& into) {
  if (j.contains(key)) into = j.at(key).get<T>();
}

ProviderSpec provider_from(const json& j, const std::string& where) {
  check_keys(j, {"kind", "dim", "seed", "path", "oov"}, where);
  ProviderSpec p;
  read(j, "kind", p.kind);
  read(j, "dim", p.dim);
  read(j, "seed", p.seed);
  read(j, "path", p.path);
  read(j, "oov", p.oov);
  return p;
}

}  // namespace

json to_json(const RunConfig& c) {
  const RewardConfig& r = c.reward;
  return {
      {"seed", c.seed},
      {"m", c.m},
      {"corpus", {{"train", c.corpus.train}, {"valid", c.corpus.valid}, {"test", c.corpus.test}}},
      {"embeddings",
       {{"encoder", provider_json(c.encoder)},
        {"keyword", provider_json(c.keyword)},
        {"sequence", provider_json(c.sequence)}}},
      {"policy", {{"head", to_string(c.head)}, {"hidden", c.hidden}}},
      {"reward",
       {{"alpha1", r.alpha1},
        {"alpha2", r.alpha2},
        {"alpha3", r.alpha3},
        {"beta_kl", r.beta_kl},
        {"epsilon", r.epsilon},
        {"n_k", r.keywords.n_k},
        {"use_rouge", r.use_rouge},
        {"use_kw", r.use_kw},
        {"use_seq", r.use_seq},
        {"use_kl", r.use_kl},
        {"rouge", {{"stemming", r.rouge.stemming}, {"use_stopword_removal", r.rouge.use_stopword_removal}}},
        {"keywords",
         {{"unigrams", r.keywords.unigrams},
          {"bigrams", r.keywords.bigrams},
          {"min_token_len", r.keywords.min_token_len},
          {"stopwords_path", c.stopwords_path}}}}},
      {"train",
       {{"learning_rate", c.train.learning_rate},
        {"batch_size", c.train.batch_size},
        {"epochs", c.train.epochs},
        {"beta1", c.train.beta1},
        {"beta2", c.train.beta2},
        {"adam_eps", c.train.adam_eps}}},
      {"ppo",
       {{"clip_epsilon", c.ppo.clip_epsilon},
        {"epochs_per_batch", c.ppo.epochs_per_batch},
        {"rollouts_per_update", c.ppo.rollouts_per_update},
        {"minibatch_size", c.ppo.minibatch_size},
        {"gamma", c.ppo.gamma},
        {"advantage_mode", to_string(c.ppo.advantage_mode)},
        {"learning_rate", c.ppo.learning_rate},
        {"max_updates", c.ppo.max_updates},
        {"kl_early_stop", c.ppo.kl_early_stop}}},
      {"eval", {{"bootstrap_resamples", c.bootstrap_resamples}}},
      {"output_dir", c.output_dir},
      {"log_timing", c.log_timing},
  };
}

RunConfig run_config_from_json(const json& j) {
  RunConfig c;
  try {
    check_keys(j, {"seed", "m", "corpus", "embeddings", "policy", "reward", "train", "ppo", "eval", "output_dir",
                   "log_timing"},
               "");
    read(j, "seed", c.seed);
    read(j, "m", c.m);
    read(j, "output_dir", c.output_dir);
    read(j, "log_timing", c.log_timing);
    if (j.contains("corpus")) {
      const json& s = j["corpus"];
      check_keys(s, {"train", "valid", "test"}, "corpus");
      read(s, "train", c.corpus.train);
      read(s, "valid", c.corpus.valid);
      read(s, "test", c.corpus.test);
    }
    if (j.contains("embeddings")) {
      const json& s = j["embeddings"];
      check_keys(s, {"encoder", "keyword", "sequence"}, "embeddings");
      if (s.contains("encoder")) c.encoder = provider_from(s["encoder"], "embeddings.encoder");
      // keyword and sequence default to the encoder's space
      c.keyword = s.contains("keyword") ? provider_from(s["keyword"], "embeddings.keyword") : c.encoder;
      c.sequence = s.contains("sequence") ? provider_from(s["sequence"], "embeddings.sequence") : c.encoder;
    }
    if (j.contains("policy")) {
      const json& s = j["policy"];
      check_keys(s, {"head", "hidden"}, "policy");
      if (s.contains("head")) c.head = head_from_string(s["head"].get<std::string>());
      read(s, "hidden", c.hidden);
    }
    if (j.contains("reward")) {
      const json& s = j["reward"];
      check_keys(s, {"alpha1", "alpha2", "alpha3", "beta_kl", "epsilon", "n_k", "use_rouge", "use_kw", "use_seq",
                     "use_kl", "rouge", "keywords"},
                 "reward");
      RewardConfig& r = c.reward;
      read(s, "alpha1", r.alpha1);
      read(s, "alpha2", r.alpha2);
      read(s, "alpha3", r.alpha3);
      read(s, "beta_kl", r.beta_kl);
      read(s, "epsilon", r.epsilon);
      read(s, "n_k", r.keywords.n_k);
      read(s, "use_rouge", r.use_rouge);
      read(s, "use_kw", r.use_kw);
      read(s, "use_seq", r.use_seq);
      read(s, "use_kl", r.use_kl);
      if (s.contains("rouge")) {
        check_keys(s["rouge"], {"stemming", "use_stopword_removal"}, "reward.rouge");
        read(s["rouge"], "stemming", r.rouge.stemming);
        read(s["rouge"], "use_stopword_removal", r.rouge.use_stopword_removal);
      }
      if (s.contains("keywords")) {
        const json& k = s["keywords"];
        check_keys(k, {"unigrams", "bigrams", "min_token_len", "stopwords_path"}, "reward.keywords");
        read(k, "unigrams", r.keywords.unigrams);
        read(k, "bigrams", r.keywords.bigrams);
        read(k, "min_token_len", r.keywords.min_token_len);
        read(k, "stopwords_path", c.stopwords_path);
      }
    }
    if (j.contains("train")) {
      const json& s = j["train"];
      check_keys(s, {"learning_rate", "batch_size", "epochs", "beta1", "beta2", "adam_eps"}, "train");
      read(s, "learning_rate", c.train.learning_rate);
      read(s, "batch_size", c.train.batch_size);
      read(s, "epochs", c.train.epochs);
      read(s, "beta1", c.train.beta1);
      read(s, "beta2", c.train.beta2);
      read(s, "adam_eps", c.train.adam_eps);
    }
    if (j.contains("ppo")) {
      const json& s = j["ppo"];
      check_keys(s, {"clip_epsilon", "epochs_per_batch", "rollouts_per_update", "minibatch_size", "gamma",
                     "advantage_mode", "learning_rate", "max_updates", "kl_early_stop"},
                 "ppo");
      read(s, "clip_epsilon", c.ppo.clip_epsilon);
      read(s, "epochs_per_batch", c.ppo.epochs_per_batch);
      read(s, "rollouts_per_update", c.ppo.rollouts_per_update);
      read(s, "minibatch_size", c.ppo.minibatch_size);
      read(s, "gamma", c.ppo.gamma);
      if (s.contains("advantage_mode")) {
        c.ppo.advantage_mode = advantage_mode_from_string(s["advantage_mode"].get<std::string>());
      }
      read(s, "learning_rate", c.ppo.learning_rate);
      read(s, "max_updates", c.ppo.max_updates);
      read(s, "kl_early_stop", c.ppo.kl_early_stop);
    }
    if (j.contains("eval")) {
      check_keys(j["eval"], {"bootstrap_resamples"}, "eval");
      read(j["eval"], "bootstrap_resamples", c.bootstrap_resamples);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::input, std::string("invalid config: ") + e.what());
  }
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::input, "cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::input, "malformed config " + path.string() + ": " + e.what());
  }
  return run_config_from_json(j);
}

std::string config_hash(const RunConfig& cfg) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << fnv1a64(to_json(cfg).dump());
  return os.str();
}

}  // namespace sumrl
