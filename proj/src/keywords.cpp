#include "sumrl/keywords.hpp"

#include <algorithm>
#include <limits>
#include <unordered_set>

#include "sumrl/error.hpp"

namespace sumrl {

namespace {

struct Candidate {
  TokenSeq phrase;
  Vector vector;
  double norm = 0.0;
};

std::vector<Candidate> collect(const TokenSeq& text, const KeywordConfig& cfg, const EmbeddingProvider& provider,
                               bool filtered) {
  const StopwordSet& stop = cfg.stopword_set();
  auto keep = [&](const std::string& t) {
    if (!filtered) return true;
    return t.size() >= cfg.min_token_len && !is_punctuation_token(t) && !stop.count(t);
  };
  std::vector<Candidate> out;
  std::unordered_set<std::string> seen;
  auto add = [&](std::span<const std::string> phrase) {
    std::string key = phrase[0];
    for (std::size_t i = 1; i < phrase.size(); ++i) key += ' ' + phrase[i];
    if (!seen.insert(key).second) return;
    Candidate c;
    c.phrase.assign(phrase.begin(), phrase.end());
    c.vector = embed_phrase(phrase, provider).vector;
    c.norm = norm(c.vector);
    out.push_back(std::move(c));
  };
  // Occurrence order: at each position the unigram precedes the bigram starting there.
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (!keep(text[i])) continue;
    if (cfg.unigrams || !filtered) add(std::span<const std::string>(&text[i], 1));
    if (filtered && cfg.bigrams && i + 1 < text.size() && keep(text[i + 1])) {
      add(std::span<const std::string>(&text[i], 2));
    }
  }
  return out;
}

}  // namespace

std::vector<Keyword> candidate_phrases(const TokenSeq& text, const KeywordConfig& cfg,
                                       const EmbeddingProvider& provider) {
  if (cfg.n_k == 0) throw Error(ErrorKind::input, "keyword count n_k must be >= 1");
  std::vector<Candidate> cands = collect(text, cfg, provider, true);
  if (cands.empty()) cands = collect(text, cfg, provider, false);
  if (cands.empty()) throw Error(ErrorKind::input, "no keyword candidates");

  std::stable_sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) { return a.norm > b.norm; });
  cands.resize(std::min(cands.size(), 2 * cfg.n_k));

  std::vector<Keyword> out;
  out.reserve(cands.size());
  for (auto& c : cands) out.push_back(Keyword{std::move(c.phrase), std::move(c.vector)});
  return out;
}

std::vector<std::size_t> select_max_min(const std::vector<Keyword>& ranked, std::size_t n_k) {
  std::vector<std::size_t> chosen;
  if (ranked.empty() || n_k == 0) return chosen;
  std::vector<char> taken(ranked.size(), 0);
  // closest[c] = max cosine of candidate c to anything chosen so far.
  std::vector<double> closest(ranked.size(), -std::numeric_limits<double>::infinity());
  auto take = [&](std::size_t idx) {
    chosen.push_back(idx);
    taken[idx] = 1;
    for (std::size_t c = 0; c < ranked.size(); ++c) {
      if (!taken[c]) closest[c] = std::max(closest[c], cosine(ranked[c].vector, ranked[idx].vector));
    }
  };
  take(0);
  while (chosen.size() < n_k) {
    std::size_t best = ranked.size();
    for (std::size_t c = 0; c < ranked.size(); ++c) {
      if (!taken[c] && (best == ranked.size() || closest[c] < closest[best])) best = c;
    }
    if (best == ranked.size()) break;
    take(best);
  }
  return chosen;
}

KeywordSet get_keywords(const TokenSeq& text, const KeywordConfig& cfg, const EmbeddingProvider& provider) {
  std::vector<Keyword> ranked = candidate_phrases(text, cfg, provider);
  KeywordSet out;
  out.n_k = cfg.n_k;
  for (std::size_t idx : select_max_min(ranked, cfg.n_k)) out.entries.push_back(std::move(ranked[idx]));
  return out;
}

double r_kw(const KeywordSet& doc_keywords, const KeywordSet& summary_keywords) {
  if (doc_keywords.empty()) throw Error(ErrorKind::input, "keyword reward needs document keywords");
  if (summary_keywords.empty()) return 0.0;
  double total = 0.0;
  for (const Keyword& kw : doc_keywords.entries) {
    double best = -std::numeric_limits<double>::infinity();
    for (const Keyword& other : summary_keywords.entries) best = std::max(best, cosine(kw.vector, other.vector));
    total += best;
  }
  return total / static_cast<double>(doc_keywords.size());
}

}  // namespace sumrl
