#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "sumrl/cli.hpp"
#include "sumrl/error.hpp"

namespace sumrl::cli {

int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Extractive summarization with a unified RL reward"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  std::uint64_t seed = 0;
  std::string out_dir;
  app.add_option("--config", g.config_path, "JSON run config (defaults when omitted)");
  auto* seed_opt = app.add_option("--seed", seed, "override the config seed");
  auto* out_opt = app.add_option("--out", out_dir, "override the output directory");
  app.add_flag("--quiet", g.quiet, "suppress informational output");

  auto* config = app.add_subcommand("config", "config file helpers");
  config->require_subcommand(1);
  auto* config_init = config->add_subcommand("init", "print or write the default config");
  std::string init_path;
  config_init->add_option("path", init_path, "destination file (stdout when omitted)");

  SynthOptions synth;
  auto* synth_cmd = app.add_subcommand("synth", "generate a planted-saliency JSONL corpus");
  synth_cmd->add_option("--docs", synth.spec.num_docs);
  synth_cmd->add_option("--sentences", synth.spec.sentences_per_doc);
  synth_cmd->add_option("--salient", synth.spec.salient_per_doc);
  synth_cmd->add_option("--vocab", synth.spec.vocab_size);
  synth_cmd->add_option("--keyword-pool", synth.spec.keyword_pool_size);
  synth_cmd->add_option("--keywords-per-doc", synth.spec.keywords_per_doc);
  synth_cmd->add_option("--noise", synth.spec.noise_token_rate);
  synth_cmd->add_option("--synonym-rate", synth.spec.synonym_rate);
  synth_cmd->add_option("--min-len", synth.spec.min_sentence_len);
  synth_cmd->add_option("--max-len", synth.spec.max_sentence_len);
  synth_cmd->add_option("--id-prefix", synth.spec.id_prefix);
  synth_cmd->add_option("-o,--output", synth.out_path, "corpus file (stdout when omitted)");
  synth_cmd->add_option("--vectors-out", synth.vectors_out, "also write word vectors for the vocabulary");
  synth_cmd->add_option("--vector-dim", synth.vector_dim);

  auto* pretrain_cmd = app.add_subcommand("pretrain", "train the supervised backbone on oracle labels");

  std::string checkpoint;
  std::string algorithm = "ppo";
  std::string ablate = "none";
  auto* finetune_cmd = app.add_subcommand("finetune", "RL fine-tuning from a supervised checkpoint");
  finetune_cmd->add_option("--checkpoint", checkpoint)->required();
  finetune_cmd->add_option("--algorithm", algorithm)->check(CLI::IsMember({"ppo", "reinforce"}));
  finetune_cmd->add_option("--ablate", ablate)->check(CLI::IsMember({"none", "kl", "kw", "seq"}));

  std::string baseline = "none";
  auto* eval_cmd = app.add_subcommand("eval", "ROUGE report with bootstrap intervals");
  eval_cmd->add_option("--checkpoint", checkpoint);
  eval_cmd->add_option("--baseline", baseline)->check(CLI::IsMember({"none", "lead"}));

  std::string doc_id;
  bool use_stdin = false;
  bool show_keywords = false;
  auto* summarize_cmd = app.add_subcommand("summarize", "summarize one document");
  summarize_cmd->add_option("--checkpoint", checkpoint)->required();
  auto* doc_opt = summarize_cmd->add_option("--doc-id", doc_id);
  auto* stdin_opt = summarize_cmd->add_flag("--stdin", use_stdin, "read one sentence per line");
  doc_opt->excludes(stdin_opt);
  summarize_cmd->add_flag("--show-keywords", show_keywords);

  std::size_t sweep = 0;
  auto* ablate_cmd = app.add_subcommand("ablate", "backbone, full and single-ablation rows");
  ablate_cmd->add_option("--checkpoint", checkpoint)->required();
  ablate_cmd->add_option("--sweep", sweep, "random alpha draws scored on the validation split");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << e.what() << '\n';
      return 0;
    }
    err << "error: " << e.what() << '\n';
    return exit_code(ErrorKind::input);
  }
  if (*seed_opt) g.seed = seed;
  if (*out_opt) g.out_dir = out_dir;

  try {
    if (*config_init) return cmd_config_init(g, init_path, out);
    if (*synth_cmd) {
      if (g.seed) synth.spec.seed = *g.seed;
      synth.spec.validate();
      return cmd_synth(synth, out);
    }
    const RunConfig cfg = resolve_config(g);
    std::ostringstream sink;
    std::ostream& report = g.quiet ? static_cast<std::ostream&>(sink) : out;
    if (*pretrain_cmd) return cmd_pretrain(cfg, report);
    if (*finetune_cmd) {
      return cmd_finetune(cfg, checkpoint, algorithm_from_string(algorithm), ablation_from_string(ablate), report);
    }
    if (*eval_cmd) return cmd_eval(cfg, checkpoint, baseline == "lead", out);
    if (*summarize_cmd) {
      std::optional<std::string> id;
      if (*doc_opt) id = doc_id;
      return cmd_summarize(cfg, checkpoint, id, use_stdin ? &in : nullptr, show_keywords, out);
    }
    if (*ablate_cmd) return cmd_ablate(cfg, checkpoint, sweep, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(ErrorKind::input);
  }
  err << "error: no command\n";
  return exit_code(ErrorKind::input);
}

}  // namespace sumrl::cli
