#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "sumrl/cli.hpp"
#include "sumrl/error.hpp"
#include "sumrl/eval.hpp"
#include "sumrl/keywords.hpp"
#include "sumrl/rng.hpp"

namespace sumrl::cli {

namespace fs = std::filesystem;
using nlohmann::json;

RunConfig resolve_config(const GlobalOptions& opts) {
  RunConfig cfg = opts.config_path.empty() ? RunConfig{} : load_run_config(opts.config_path);
  if (opts.seed) cfg.seed = *opts.seed;
  if (opts.out_dir) cfg.output_dir = *opts.out_dir;
  cfg.finalize();
  cfg.validate();
  return cfg;
}

const char* to_string(Ablation a) noexcept {
  switch (a) {
    case Ablation::none: return "none";
    case Ablation::kl: return "kl";
    case Ablation::kw: return "kw";
    case Ablation::seq: return "seq";
  }
  return "none";
}

Ablation ablation_from_string(const std::string& name) {
  if (name == "none") return Ablation::none;
  if (name == "kl") return Ablation::kl;
  if (name == "kw") return Ablation::kw;
  if (name == "seq") return Ablation::seq;
  throw Error(ErrorKind::input, "unknown ablation '" + name + "' (expected none, kl, kw or seq)");
}

void apply_ablation(RewardConfig& cfg, Ablation a) {
  switch (a) {
    case Ablation::none: break;
    case Ablation::kl: cfg.use_kl = false; break;
    case Ablation::kw: cfg.use_kw = false; break;
    case Ablation::seq: cfg.use_seq = false; break;
  }
}

std::string finetune_tag(Algorithm algorithm, Ablation ablation) {
  return std::string(to_string(algorithm)) + "_" + to_string(ablation);
}

namespace {

struct Providers {
  EmbeddingProvider encoder;
  EmbeddingProvider keyword;
  EmbeddingProvider sequence;

  EncoderProviders view() const { return {encoder, keyword, sequence}; }
};

Providers build_providers(const RunConfig& cfg) {
  return Providers{cfg.encoder.build(), cfg.keyword.build(), cfg.sequence.build()};
}

std::vector<Document> load_required(const std::string& path, const char* what) {
  if (path.empty()) throw Error(ErrorKind::input, std::string("config has no ") + what + " corpus path");
  return load_corpus(path);
}

fs::path ensure_output_dir(const RunConfig& cfg) {
  fs::path dir(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::input, "cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::input, "cannot write " + path.string());
  out << text;
}

json reward_json(const RewardConfig& r) {
  return {{"alpha1", r.alpha1}, {"alpha2", r.alpha2}, {"alpha3", r.alpha3}, {"beta_kl", r.beta_kl},
          {"epsilon", r.epsilon}, {"n_k", r.keywords.n_k}, {"use_rouge", r.use_rouge}, {"use_kw", r.use_kw},
          {"use_seq", r.use_seq}, {"use_kl", r.use_kl}};
}

json record_json(const UpdateRecord& r, bool timing) {
  return {{"update", r.update},           {"mean_r_unified", r.mean_r_unified}, {"mean_r_rouge", r.mean_r_rouge},
          {"mean_r_kw", r.mean_r_kw},     {"mean_r_seq", r.mean_r_seq},         {"mean_kl", r.mean_kl},
          {"clip_fraction", r.clip_fraction}, {"wall_ms", timing ? r.wall_ms : 0.0}};
}

std::string version_string() { return "sumrl 0.1.0"; }

EvalReport evaluate(const std::string& label, const std::vector<Document>& docs, const std::vector<Summary>& summaries,
                    const RunConfig& cfg) {
  EvalReport r = make_report(label, score_summaries(docs, summaries, cfg.reward.rouge), cfg.bootstrap_resamples,
                             cfg.seed);
  r.meta = {{"config_hash", config_hash(cfg)}, {"seed", cfg.seed}, {"version", version_string()}, {"m", cfg.m}};
  return r;
}

PolicyParams load_compatible(const std::string& checkpoint, const EmbeddingProvider& encoder) {
  PolicyParams p = load_checkpoint(fs::path(checkpoint));
  check_compatible(p, encoder);
  return p;
}

const std::string& eval_corpus_path(const RunConfig& cfg) {
  return cfg.corpus.test.empty() ? cfg.corpus.train : cfg.corpus.test;
}

}  // namespace

int cmd_config_init(const GlobalOptions& opts, const std::string& path, std::ostream& out) {
  RunConfig cfg;
  if (opts.seed) cfg.seed = *opts.seed;
  if (opts.out_dir) cfg.output_dir = *opts.out_dir;
  const std::string text = to_json(cfg).dump(2) + "\n";
  if (path.empty() || path == "-") {
    out << text;
  } else {
    write_text(path, text);
    if (!opts.quiet) out << "wrote " << path << '\n';
  }
  return 0;
}

int cmd_synth(const SynthOptions& opts, std::ostream& out) {
  const SyntheticCorpus corpus = generate_synthetic(opts.spec);
  std::ostringstream body;
  write_corpus(body, corpus.docs);
  if (opts.out_path.empty() || opts.out_path == "-") {
    out << body.str();
  } else {
    write_text(opts.out_path, body.str());
  }
  if (!opts.vectors_out.empty()) {
    std::ostringstream vec;
    write_vectors(vec, synthetic_vectors(opts.spec, opts.vector_dim));
    write_text(opts.vectors_out, vec.str());
  }
  return 0;
}

int cmd_pretrain(const RunConfig& cfg, std::ostream& out) {
  const std::vector<Document> docs = load_required(cfg.corpus.train, "train");
  const Providers providers = build_providers(cfg);
  const fs::path dir = ensure_output_dir(cfg);

  const auto labels = oracle_labels_batch(docs, cfg.m, cfg.reward.rouge);
  const auto states = encode_documents(docs, providers.encoder);
  const PolicyParams init = init_params(cfg.head, providers.encoder.dim() + kExtraFeatures, cfg.hidden, cfg.seed,
                                        providers.encoder.fingerprint());
  const PretrainResult result = pretrain(init, states, labels, cfg.train);
  for (double x : result.params.theta) {
    if (!std::isfinite(x)) throw Error(ErrorKind::numeric, "pretraining produced non-finite weights");
  }

  save_checkpoint(dir / "checkpoint_sl.json", result.params);
  std::string curve = "epoch\tloss\n";
  for (std::size_t e = 0; e < result.loss_curve.size(); ++e) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%zu\t%.17g\n", e + 1, result.loss_curve[e]);
    curve += buf;
  }
  write_text(dir / "pretrain_loss.tsv", curve);

  std::size_t positives = 0;
  for (const auto& l : labels) {
    for (auto y : l) positives += y;
  }
  out << "documents\t" << docs.size() << "\noracle_positive_labels\t" << positives << "\nepochs\t"
      << result.loss_curve.size() << "\nfinal_loss\t"
      << (result.loss_curve.empty() ? 0.0 : result.loss_curve.back()) << "\ncheckpoint\t"
      << (dir / "checkpoint_sl.json").string() << '\n';
  return 0;
}

int cmd_finetune(const RunConfig& cfg, const std::string& checkpoint, Algorithm algorithm, Ablation ablation,
                 std::ostream& out) {
  const Providers providers = build_providers(cfg);
  const PolicyParams sl = load_compatible(checkpoint, providers.encoder);
  const std::vector<Document> docs = load_required(cfg.corpus.train, "train");
  const fs::path dir = ensure_output_dir(cfg);

  RewardConfig reward = cfg.reward;
  apply_ablation(reward, ablation);
  const std::string tag = finetune_tag(algorithm, ablation);
  const fs::path log_path = dir / ("train_log_" + tag + ".jsonl");
  std::ofstream log(log_path, std::ios::binary);
  if (!log) throw Error(ErrorKind::input, "cannot write " + log_path.string());
  json header = {{"algorithm", to_string(algorithm)},
                 {"ablate", to_string(ablation)},
                 {"reward", reward_json(reward)},
                 {"ppo", to_json(cfg)["ppo"]},
                 {"seed", cfg.seed},
                 {"checkpoint", checkpoint},
                 {"config_hash", config_hash(cfg)}};
  log << json{{"header", header}}.dump() << '\n';

  const FinetuneResult result =
      finetune(sl, docs, providers.view(), reward, cfg.ppo, algorithm, Exec::parallel,
               [&](const UpdateRecord& r) { log << record_json(r, cfg.log_timing).dump() << '\n'; });
  const fs::path ck = dir / ("checkpoint_rl_" + tag + ".json");
  save_checkpoint(ck, result.params);

  out << "algorithm\t" << to_string(algorithm) << "\nablate\t" << to_string(ablation) << "\nupdates\t"
      << result.log.size() << '\n';
  if (!result.log.empty()) {
    out << "final_mean_r_unified\t" << result.log.back().mean_r_unified << "\nfinal_mean_kl\t"
        << result.log.back().mean_kl << '\n';
  }
  out << "checkpoint\t" << ck.string() << "\nlog\t" << log_path.string() << '\n';
  return 0;
}

int cmd_eval(const RunConfig& cfg, const std::string& checkpoint, bool lead_baseline, std::ostream& out) {
  const std::vector<Document> docs = load_required(eval_corpus_path(cfg), "test");
  const fs::path dir = ensure_output_dir(cfg);
  EvalReport report;
  if (lead_baseline) {
    report = evaluate("lead-m", docs, lead_corpus(docs, cfg.m), cfg);
  } else {
    if (checkpoint.empty()) throw Error(ErrorKind::input, "eval needs --checkpoint or --baseline lead");
    const EmbeddingProvider encoder = cfg.encoder.build();
    const PolicyParams params = load_compatible(checkpoint, encoder);
    report = evaluate(fs::path(checkpoint).stem().string(), docs, summarize_corpus(params, docs, encoder, cfg.m), cfg);
  }
  write_text(dir / ("eval_" + report.label + ".json"), to_json(report).dump(1) + "\n");
  out << format_table({report});
  return 0;
}

int cmd_summarize(const RunConfig& cfg, const std::string& checkpoint, const std::optional<std::string>& doc_id,
                  std::istream* doc_stream, bool show_keywords, std::ostream& out) {
  const EmbeddingProvider encoder = cfg.encoder.build();
  const PolicyParams params = load_compatible(checkpoint, encoder);

  Document doc;
  if (doc_id) {
    bool found = false;
    for (const std::string* path : {&cfg.corpus.test, &cfg.corpus.valid, &cfg.corpus.train}) {
      if (path->empty() || found) continue;
      for (Document& d : load_corpus(*path)) {
        if (d.id == *doc_id) {
          doc = std::move(d);
          found = true;
          break;
        }
      }
    }
    if (!found) throw Error(ErrorKind::not_found, "unknown document id '" + *doc_id + "'");
  } else {
    if (!doc_stream) throw Error(ErrorKind::input, "summarize needs --doc-id or --stdin");
    std::vector<std::string> lines;
    for (std::string line; std::getline(*doc_stream, line);) {
      if (!tokenize(line).empty()) lines.push_back(line);
    }
    doc = make_document("stdin", lines, {});
  }

  const std::vector<double> probs = forward_doc(params, doc, encoder);
  const Summary summary = select_top_m(probs, cfg.m);
  out << "doc\t" << doc.id << "\nselected";
  for (std::size_t i : summary.selected) out << '\t' << i;
  out << "\nscores\n";
  for (std::size_t i = 0; i < probs.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", probs[i]);
    out << i << '\t' << buf << '\t' << doc.sentences[i].raw << '\n';
  }
  out << "summary\t" << summary.text(doc) << '\n';

  if (show_keywords) {
    const EmbeddingProvider kw_provider = cfg.keyword.build();
    TokenSeq all;
    for (const auto& s : doc.sentences) all.insert(all.end(), s.tokens.begin(), s.tokens.end());
    auto print = [&](const char* label, const KeywordSet& set) {
      out << label;
      for (const Keyword& k : set.entries) out << '\t' << join_tokens(k.phrase);
      out << '\n';
    };
    print("keywords_document", get_keywords(all, cfg.reward.keywords, kw_provider));
    const TokenSeq text = summary.tokens(doc);
    print("keywords_summary", text.empty() ? KeywordSet{} : get_keywords(text, cfg.reward.keywords, kw_provider));
  }
  return 0;
}

int cmd_ablate(const RunConfig& cfg, const std::string& checkpoint, std::size_t sweep, std::ostream& out) {
  const Providers providers = build_providers(cfg);
  const PolicyParams sl = load_compatible(checkpoint, providers.encoder);
  const std::vector<Document> train = load_required(cfg.corpus.train, "train");
  const std::vector<Document> test = load_required(eval_corpus_path(cfg), "test");
  const fs::path dir = ensure_output_dir(cfg);

  auto run_variant = [&](const std::string& label, const RewardConfig& reward, Algorithm algorithm,
                         const std::vector<Document>& eval_docs) {
    const FinetuneResult r = finetune(sl, train, providers.view(), reward, cfg.ppo, algorithm);
    return evaluate(label, eval_docs, summarize_corpus(r.params, eval_docs, providers.encoder, cfg.m), cfg);
  };

  std::vector<EvalReport> rows;
  rows.push_back(evaluate("backbone", test, summarize_corpus(sl, test, providers.encoder, cfg.m), cfg));
  struct Variant {
    const char* label;
    Algorithm algorithm;
    Ablation ablation;
  };
  for (const Variant& v : {Variant{"w/o KL", Algorithm::ppo, Ablation::kl},
                           Variant{"w/o PPO", Algorithm::reinforce, Ablation::none},
                           Variant{"w/o R_kw", Algorithm::ppo, Ablation::kw},
                           Variant{"w/o R_seq", Algorithm::ppo, Ablation::seq},
                           Variant{"full", Algorithm::ppo, Ablation::none}}) {
    RewardConfig reward = cfg.reward;
    apply_ablation(reward, v.ablation);
    rows.push_back(run_variant(v.label, reward, v.algorithm, test));
  }

  if (sweep > 0) {
    // Random weights on the simplex, scored on the validation split.
    const std::vector<Document> valid = cfg.corpus.valid.empty() ? test : load_corpus(cfg.corpus.valid);
    Rng rng(derive_seed(cfg.seed, 0x5EEFULL));
    for (std::size_t k = 0; k < sweep; ++k) {
      const double e1 = -std::log(1.0 - rng.uniform());
      const double e2 = -std::log(1.0 - rng.uniform());
      const double e3 = -std::log(1.0 - rng.uniform());
      const double s = e1 + e2 + e3;
      RewardConfig reward = cfg.reward;
      reward.alpha1 = e1 / s;
      reward.alpha2 = e2 / s;
      reward.alpha3 = e3 / s;
      char label[96];
      std::snprintf(label, sizeof label, "alpha=(%.3f,%.3f,%.3f)", reward.alpha1, reward.alpha2, reward.alpha3);
      rows.push_back(run_variant(label, reward, Algorithm::ppo, valid));
    }
  }

  const std::string table = format_table(rows);
  write_text(dir / "ablation.tsv", table);
  json all = json::array();
  for (const EvalReport& r : rows) all.push_back(to_json(r));
  write_text(dir / "ablation.json", all.dump(1) + "\n");
  out << table;
  return 0;
}

}  // namespace sumrl::cli
