#include "sumrl/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "sumrl/error.hpp"
#include "sumrl/rng.hpp"

namespace sumrl {

std::vector<Summary> summarize_corpus(const PolicyParams& params, const std::vector<Document>& docs,
                                      const EmbeddingProvider& provider, std::size_t m, Exec exec) {
  std::vector<Summary> out(docs.size());
  for_each_index(docs.size(), exec,
                 [&](std::size_t i) { out[i] = select_top_m(forward_doc(params, docs[i], provider), m); });
  return out;
}

std::vector<Summary> lead_corpus(const std::vector<Document>& docs, std::size_t m) {
  std::vector<Summary> out;
  out.reserve(docs.size());
  for (const Document& d : docs) out.push_back(lead_m(d, m));
  return out;
}

std::vector<DocScores> score_summaries(const std::vector<Document>& docs, const std::vector<Summary>& summaries,
                                       const RougeConfig& cfg, Exec exec) {
  if (docs.size() != summaries.size()) throw Error(ErrorKind::input, "one summary per document required");
  std::vector<DocScores> out(docs.size());
  for_each_index(docs.size(), exec, [&](std::size_t i) {
    const RougeTriple t = rouge_all(summaries[i].tokens(docs[i]), docs[i].reference, cfg);
    out[i] = DocScores{docs[i].id, 100.0 * t.r1.f1, 100.0 * t.r2.f1, 100.0 * t.rl.f1};
  });
  return out;
}

double mean_r_rouge(const std::vector<DocScores>& scores) {
  if (scores.empty()) return 0.0;
  double total = 0.0;
  for (const DocScores& s : scores) total += s.r_rouge();
  return total / static_cast<double>(scores.size());
}

MetricSummary bootstrap_mean(std::span<const double> values, std::size_t resamples, std::uint64_t seed) {
  MetricSummary out;
  if (values.empty()) return out;
  const auto n = values.size();
  double total = 0.0;
  for (double v : values) total += v;
  out.mean = total / static_cast<double>(n);
  if (resamples == 0) {
    out.ci_low = out.ci_high = out.mean;
    return out;
  }
  Rng rng(derive_seed(seed, 0xB0075ULL));
  std::vector<double> means(resamples);
  for (double& m : means) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += values[rng.below(n)];
    m = s / static_cast<double>(n);
  }
  std::sort(means.begin(), means.end());
  const auto lo = static_cast<std::size_t>(std::floor(0.025 * static_cast<double>(resamples)));
  const auto hi = static_cast<std::size_t>(std::ceil(0.975 * static_cast<double>(resamples))) - 1;
  out.ci_low = std::min(means[lo], out.mean);
  out.ci_high = std::max(means[std::min(hi, resamples - 1)], out.mean);
  return out;
}

EvalReport make_report(std::string label, std::vector<DocScores> docs, std::size_t resamples, std::uint64_t seed) {
  EvalReport r;
  r.label = std::move(label);
  std::vector<double> v1, v2, vl;
  for (const DocScores& d : docs) {
    v1.push_back(d.r1);
    v2.push_back(d.r2);
    vl.push_back(d.rl);
  }
  // Same seed for all three metrics: identical document resamples.
  r.r1 = bootstrap_mean(v1, resamples, seed);
  r.r2 = bootstrap_mean(v2, resamples, seed);
  r.rl = bootstrap_mean(vl, resamples, seed);
  r.docs = std::move(docs);
  return r;
}

namespace {

std::string fixed2(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string cell(const MetricSummary& m) {
  return fixed2(m.mean) + " [" + fixed2(m.ci_low) + ", " + fixed2(m.ci_high) + "]";
}

nlohmann::json metric_json(const MetricSummary& m) {
  return {{"mean", m.mean}, {"ci_low", m.ci_low}, {"ci_high", m.ci_high}};
}

}  // namespace

std::string format_table(const std::vector<EvalReport>& reports) {
  std::string out = "model\tROUGE-1\tROUGE-2\tROUGE-L\n";
  for (const EvalReport& r : reports) {
    out += r.label + '\t' + cell(r.r1) + '\t' + cell(r.r2) + '\t' + cell(r.rl) + '\n';
  }
  return out;
}

nlohmann::json to_json(const EvalReport& report) {
  nlohmann::json docs = nlohmann::json::array();
  for (const DocScores& d : report.docs) docs.push_back({{"id", d.id}, {"rouge1", d.r1}, {"rouge2", d.r2}, {"rougeL", d.rl}});
  return {{"label", report.label},
          {"rouge1", metric_json(report.r1)},
          {"rouge2", metric_json(report.r2)},
          {"rougeL", metric_json(report.rl)},
          {"documents", std::move(docs)},
          {"meta", report.meta}};
}

}  // namespace sumrl
