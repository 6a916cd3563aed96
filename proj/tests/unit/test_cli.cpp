#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sumrl/cli.hpp"
#include "sumrl/policy.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Result {
  int code;
  std::string out;
  std::string err;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("sumrl_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  Result run(std::vector<std::string> args, const std::string& input = "") {
    args.insert(args.begin(), "sumrl");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::istringstream in(input);
    std::ostringstream out, err;
    const int code = sumrl::cli::run(static_cast<int>(argv.size()), argv.data(), in, out, err);
    return {code, out.str(), err.str()};
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  // Small corpus, word vectors and a config that points at them.
  std::string setup(std::size_t docs = 12) {
    EXPECT_EQ(run({"synth", "--docs", std::to_string(docs), "--sentences", "6", "--salient", "2", "-o",
                   path("train.jsonl"), "--vectors-out", path("vec.txt"), "--vector-dim", "8"})
                  .code,
              0);
    EXPECT_EQ(run({"synth", "--docs", "5", "--sentences", "6", "--salient", "2", "--id-prefix", "test", "-o",
                   path("test.jsonl")})
                  .code,
              0);
    json c = json::parse(run({"config", "init"}).out);
    c["corpus"] = {{"train", path("train.jsonl")}, {"valid", ""}, {"test", path("test.jsonl")}};
    for (const char* k : {"encoder", "keyword", "sequence"}) {
      c["embeddings"][k]["kind"] = "file";
      c["embeddings"][k]["path"] = path("vec.txt");
    }
    c["train"]["learning_rate"] = 1e-2;
    c["train"]["epochs"] = 3;
    c["ppo"]["max_updates"] = 3;
    c["ppo"]["rollouts_per_update"] = 4;
    c["log_timing"] = false;
    c["output_dir"] = path("out");
    std::ofstream(path("cfg.json")) << c.dump(2);
    return path("cfg.json");
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, ConfigInitWritesLoadableDefaults) {
  ASSERT_EQ(run({"config", "init", path("c.json")}).code, 0);
  const auto r = run({"--config", path("c.json"), "eval", "--baseline", "lead"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("test corpus"), std::string::npos);
}

TEST_F(Cli, SynthCountsAndDeterminism) {
  ASSERT_EQ(run({"synth", "--docs", "10", "--seed", "4", "-o", path("a.jsonl")}).code, 0);
  ASSERT_EQ(run({"--seed", "4", "synth", "--docs", "10", "-o", path("b.jsonl")}).code, 0);
  const std::string a = slurp(path("a.jsonl"));
  EXPECT_EQ(a, slurp(path("b.jsonl")));
  EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 10);
  EXPECT_NO_THROW(sumrl::load_corpus(path("a.jsonl")));
  EXPECT_EQ(run({"synth", "--docs", "0"}).code, 2);
  EXPECT_EQ(run({"synth", "--sentences", "3", "--salient", "3"}).code, 2);
}

TEST_F(Cli, PretrainFinetuneEvalPipeline) {
  const std::string cfg = setup();
  ASSERT_EQ(run({"--config", cfg, "pretrain"}).code, 0);
  const fs::path out = dir_ / "out";
  ASSERT_TRUE(fs::exists(out / "checkpoint_sl.json"));
  ASSERT_TRUE(fs::exists(out / "pretrain_loss.tsv"));
  const std::string ck = slurp(out / "checkpoint_sl.json");

  ASSERT_EQ(run({"--config", cfg, "pretrain"}).code, 0);
  EXPECT_EQ(slurp(out / "checkpoint_sl.json"), ck);

  const std::string sl = (out / "checkpoint_sl.json").string();
  ASSERT_EQ(run({"--config", cfg, "finetune", "--checkpoint", sl, "--ablate", "kl"}).code, 0);
  std::ifstream log(out / "train_log_ppo_kl.jsonl");
  std::string first;
  std::getline(log, first);
  const json header = json::parse(first)["header"];
  EXPECT_EQ(header["reward"]["use_kl"], false);
  EXPECT_EQ(header["algorithm"], "ppo");
  std::size_t records = 0;
  for (std::string line; std::getline(log, line);) {
    const json rec = json::parse(line);
    for (const char* k : {"update", "mean_r_unified", "mean_r_rouge", "mean_r_kw", "mean_r_seq", "mean_kl",
                          "clip_fraction", "wall_ms"}) {
      EXPECT_TRUE(rec.contains(k)) << k;
    }
    ++records;
  }
  EXPECT_EQ(records, 3u);

  ASSERT_EQ(run({"--config", cfg, "finetune", "--checkpoint", sl, "--algorithm", "reinforce"}).code, 0);
  const std::string rl_log = slurp(out / "train_log_reinforce_none.jsonl");
  const std::string rl_ck = slurp(out / "checkpoint_rl_reinforce_none.json");
  EXPECT_EQ(json::parse(rl_log.substr(0, rl_log.find('\n')))["header"]["algorithm"], "reinforce");
  ASSERT_EQ(run({"--config", cfg, "finetune", "--checkpoint", sl, "--algorithm", "reinforce"}).code, 0);
  EXPECT_EQ(slurp(out / "train_log_reinforce_none.jsonl"), rl_log);
  EXPECT_EQ(slurp(out / "checkpoint_rl_reinforce_none.json"), rl_ck);

  const auto lead = run({"--config", cfg, "eval", "--baseline", "lead"});
  ASSERT_EQ(lead.code, 0);
  EXPECT_NE(lead.out.find("\nlead-m\t"), std::string::npos);
  EXPECT_TRUE(fs::exists(out / "eval_lead-m.json"));
  const auto e1 = run({"--config", cfg, "eval", "--checkpoint", sl});
  ASSERT_EQ(e1.code, 0);
  const std::string report = slurp(out / "eval_checkpoint_sl.json");
  EXPECT_EQ(run({"--config", cfg, "eval", "--checkpoint", sl}).out, e1.out);
  EXPECT_EQ(slurp(out / "eval_checkpoint_sl.json"), report);
}

TEST_F(Cli, ErrorsMapToExitCodes) {
  const std::string cfg = setup();
  json c = json::parse(slurp(cfg));
  c["corpus"]["train"] = path("missing.jsonl");
  std::ofstream(path("bad.json")) << c.dump();
  EXPECT_EQ(run({"--config", path("bad.json"), "pretrain"}).code, 2);
  EXPECT_EQ(run({"--config", path("nope.json"), "pretrain"}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);

  ASSERT_EQ(run({"--config", cfg, "pretrain"}).code, 0);
  const std::string sl = (dir_ / "out" / "checkpoint_sl.json").string();
  json h = json::parse(slurp(cfg));
  for (const char* k : {"encoder", "keyword", "sequence"}) h["embeddings"][k] = {{"kind", "hash"}, {"dim", 8}};
  std::ofstream(path("hash.json")) << h.dump();
  EXPECT_EQ(run({"--config", path("hash.json"), "finetune", "--checkpoint", sl}).code, 4);
  EXPECT_EQ(run({"--config", cfg, "summarize", "--checkpoint", sl, "--doc-id", "no-such-doc"}).code, 5);

  json nan = json::parse(slurp(cfg));
  nan["train"]["learning_rate"] = 1e308;
  nan["train"]["epochs"] = 50;
  std::ofstream(path("nan.json")) << nan.dump();
  EXPECT_EQ(run({"--config", path("nan.json"), "pretrain"}).code, 3);
}

TEST_F(Cli, SummarizeById) {
  const std::string cfg = setup();
  ASSERT_EQ(run({"--config", cfg, "pretrain"}).code, 0);
  const std::string sl = (dir_ / "out" / "checkpoint_sl.json").string();
  const auto r = run({"--config", cfg, "summarize", "--checkpoint", sl, "--doc-id", "test-1", "--show-keywords"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("doc\ttest-1\nselected\t", 0), 0u);
  std::istringstream lines(r.out);
  std::size_t keyword_lines = 0;
  for (std::string line; std::getline(lines, line);) {
    if (line.rfind("keywords_", 0) == 0) {
      ++keyword_lines;
      EXPECT_LE(std::count(line.begin(), line.end(), '\t'), 3);
      EXPECT_GE(std::count(line.begin(), line.end(), '\t'), 1);
    }
  }
  EXPECT_EQ(keyword_lines, 2u);
}

TEST_F(Cli, SummarizeSingleSentenceFromStdin) {
  const std::string cfg = setup();
  json c = json::parse(slurp(cfg));
  c["m"] = 1;
  std::ofstream(path("m1.json")) << c.dump();
  ASSERT_EQ(run({"--config", path("m1.json"), "pretrain"}).code, 0);
  const std::string sl = (dir_ / "out" / "checkpoint_sl.json").string();
  const auto r = run({"--config", path("m1.json"), "summarize", "--checkpoint", sl, "--stdin"}, "The only line here.\n");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("selected\t0\n"), std::string::npos);
  EXPECT_NE(r.out.find("summary\tThe only line here.\n"), std::string::npos);
}

TEST_F(Cli, AblateEmitsEveryVariant) {
  const std::string cfg = setup();
  ASSERT_EQ(run({"--config", cfg, "pretrain"}).code, 0);
  const std::string sl = (dir_ / "out" / "checkpoint_sl.json").string();
  const auto r = run({"--config", cfg, "ablate", "--checkpoint", sl, "--sweep", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* row : {"\nbackbone\t", "\nfull\t", "\nw/o KL\t", "\nw/o PPO\t", "\nw/o R_kw\t", "\nw/o R_seq\t",
                          "\nalpha=("}) {
    EXPECT_NE(r.out.find(row), std::string::npos) << row;
  }
  EXPECT_EQ(slurp(dir_ / "out" / "ablation.tsv"), r.out);
  EXPECT_EQ(json::parse(slurp(dir_ / "out" / "ablation.json")).size(), 8u);
}
