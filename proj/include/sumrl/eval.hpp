#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "sumrl/corpus.hpp"
#include "sumrl/metrics.hpp"
#include "sumrl/parallel.hpp"
#include "sumrl/policy.hpp"

namespace sumrl {

/// ROUGE F1 x 100 for one document.
struct DocScores {
  std::string id;
  double r1 = 0.0;
  double r2 = 0.0;
  double rl = 0.0;

  double r_rouge() const noexcept { return (r1 + r2 + rl) / 3.0; }
};

struct MetricSummary {
  double mean = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

struct EvalReport {
  std::string label;
  MetricSummary r1, r2, rl;
  std::vector<DocScores> docs;
  nlohmann::json meta = nlohmann::json::object();
};

/// Top-m summaries from the policy's scores.
std::vector<Summary> summarize_corpus(const PolicyParams& params, const std::vector<Document>& docs,
                                      const EmbeddingProvider& provider, std::size_t m, Exec exec = Exec::parallel);
std::vector<Summary> lead_corpus(const std::vector<Document>& docs, std::size_t m);

std::vector<DocScores> score_summaries(const std::vector<Document>& docs, const std::vector<Summary>& summaries,
                                       const RougeConfig& cfg, Exec exec = Exec::parallel);

/// Mean of per-document R_ROUGE (x 100).
double mean_r_rouge(const std::vector<DocScores>& scores);

/// Percentile bootstrap over documents: 2.5% / 97.5% of `resamples` resampled
/// means. The interval is widened to include the sample mean if needed.
MetricSummary bootstrap_mean(std::span<const double> values, std::size_t resamples, std::uint64_t seed);

EvalReport make_report(std::string label, std::vector<DocScores> docs, std::size_t resamples, std::uint64_t seed);

/// Tab-separated table, one row per report, scores with 2 decimals.
std::string format_table(const std::vector<EvalReport>& reports);

nlohmann::json to_json(const EvalReport& report);

}  // namespace sumrl
