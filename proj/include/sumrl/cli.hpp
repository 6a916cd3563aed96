#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "sumrl/config.hpp"
#include "sumrl/corpus.hpp"
#include "sumrl/rl.hpp"

namespace sumrl::cli {

/// Flags accepted by every subcommand.
struct GlobalOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  bool quiet = false;
};

/// Config file (or defaults) with --seed / --out applied, finalized and validated.
RunConfig resolve_config(const GlobalOptions& opts);

enum class Ablation { none, kl, kw, seq };

const char* to_string(Ablation a) noexcept;
Ablation ablation_from_string(const std::string& name);
void apply_ablation(RewardConfig& cfg, Ablation a);

struct SynthOptions {
  SyntheticSpec spec;
  std::string out_path;
  std::string vectors_out;  // optional word-vector file for the synthetic vocabulary
  std::size_t vector_dim = 32;
};

int cmd_config_init(const GlobalOptions& opts, const std::string& path, std::ostream& out);
int cmd_synth(const SynthOptions& opts, std::ostream& out);
int cmd_pretrain(const RunConfig& cfg, std::ostream& out);
int cmd_finetune(const RunConfig& cfg, const std::string& checkpoint, Algorithm algorithm, Ablation ablation,
                 std::ostream& out);
int cmd_eval(const RunConfig& cfg, const std::string& checkpoint, bool lead_baseline, std::ostream& out);
int cmd_summarize(const RunConfig& cfg, const std::string& checkpoint, const std::optional<std::string>& doc_id,
                  std::istream* doc_stream, bool show_keywords, std::ostream& out);
int cmd_ablate(const RunConfig& cfg, const std::string& checkpoint, std::size_t sweep, std::ostream& out);

/// Parses argv and dispatches. Errors are reported on err and mapped to the
/// documented exit codes; nothing escapes as an exception.
int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

/// File names written under the output directory.
std::string finetune_tag(Algorithm algorithm, Ablation ablation);

}  // namespace sumrl::cli
