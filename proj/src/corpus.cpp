#include "sumrl/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include <json.hpp>

#include "sumrl/error.hpp"
#include "sumrl/rng.hpp"

namespace sumrl {

using nlohmann::json;

Document make_document(std::string id, const std::vector<std::string>& sentences, TokenSeq reference) {
  if (sentences.empty()) throw Error(ErrorKind::input, "document '" + id + "' has no sentences");
  Document doc;
  doc.id = std::move(id);
  doc.reference = std::move(reference);
  doc.sentences.reserve(sentences.size());
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    Sentence s{sentences[i], tokenize(sentences[i]), i};
    if (s.tokens.empty()) {
      throw Error(ErrorKind::input, "document '" + doc.id + "' sentence " + std::to_string(i) + " is empty");
    }
    doc.sentences.push_back(std::move(s));
  }
  return doc;
}

TokenSeq Summary::tokens(const Document& doc) const {
  TokenSeq out;
  for (std::size_t i : selected) {
    const auto& t = doc.sentences.at(i).tokens;
    out.insert(out.end(), t.begin(), t.end());
  }
  return out;
}

std::string Summary::text(const Document& doc) const {
  std::string out;
  for (std::size_t i : selected) {
    if (!out.empty()) out.push_back(' ');
    out += doc.sentences.at(i).raw;
  }
  return out;
}

std::vector<Document> parse_corpus(std::istream& in) {
  std::vector<Document> docs;
  std::unordered_set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = " at line " + std::to_string(line_no);
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      throw Error(ErrorKind::input, "malformed JSON" + where + ": " + e.what());
    }
    if (!rec.is_object()) throw Error(ErrorKind::input, "record is not an object" + where);
    for (const char* field : {"id", "sentences", "summary"}) {
      if (!rec.contains(field)) throw Error(ErrorKind::input, std::string("missing field ") + field + where);
    }
    if (!rec["id"].is_string()) throw Error(ErrorKind::input, "field id must be a string" + where);
    const auto& sents = rec["sentences"];
    if (!sents.is_array() || sents.empty()) {
      throw Error(ErrorKind::input, "field sentences must be a non-empty array" + where);
    }
    std::vector<std::string> raw;
    for (const auto& s : sents) {
      if (!s.is_string()) throw Error(ErrorKind::input, "field sentences must hold strings" + where);
      raw.push_back(s.get<std::string>());
    }
    TokenSeq reference;
    const auto& summary = rec["summary"];
    if (summary.is_string()) {
      reference = tokenize(summary.get<std::string>());
    } else if (summary.is_array()) {
      for (const auto& part : summary) {
        if (!part.is_string()) throw Error(ErrorKind::input, "field summary must hold strings" + where);
        const TokenSeq t = tokenize(part.get<std::string>());
        reference.insert(reference.end(), t.begin(), t.end());
      }
    } else {
      throw Error(ErrorKind::input, "field summary must be a string or array of strings" + where);
    }
    if (reference.empty()) throw Error(ErrorKind::input, "empty summary" + where);

    std::string id = rec["id"].get<std::string>();
    if (!ids.insert(id).second) throw Error(ErrorKind::input, "duplicate id '" + id + "'" + where);
    try {
      docs.push_back(make_document(std::move(id), raw, std::move(reference)));
    } catch (const Error& e) {
      throw Error(ErrorKind::input, e.what() + where);
    }
  }
  if (docs.empty()) throw Error(ErrorKind::input, "empty corpus");
  return docs;
}

std::vector<Document> load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::input, "cannot open corpus " + path.string());
  return parse_corpus(in);
}

void write_corpus(std::ostream& out, const std::vector<Document>& docs) {
  for (const Document& doc : docs) {
    json rec;
    rec["id"] = doc.id;
    json sents = json::array();
    for (const auto& s : doc.sentences) sents.push_back(s.raw);
    rec["sentences"] = std::move(sents);
    rec["summary"] = join_tokens(doc.reference);
    out << rec.dump() << '\n';
  }
}

LabelVector oracle_labels(const Document& doc, std::size_t m, const RougeConfig& cfg) {
  if (m == 0) throw Error(ErrorKind::input, "oracle label count m must be >= 1");
  const std::size_t n = doc.size();
  std::vector<TokenSeq> sentences(n);
  for (std::size_t i = 0; i < n; ++i) sentences[i] = rouge_normalize(doc.sentences[i].tokens, cfg);
  const TokenSeq reference = rouge_normalize(doc.reference, cfg);

  LabelVector labels(n, 0);
  double best_so_far = 0.0;
  for (std::size_t round = 0; round < std::min(m, n); ++round) {
    std::size_t best = n;
    double best_score = best_so_far;
    for (std::size_t cand = 0; cand < n; ++cand) {
      if (labels[cand]) continue;
      TokenSeq text;
      for (std::size_t i = 0; i < n; ++i) {
        if (labels[i] || i == cand) text.insert(text.end(), sentences[i].begin(), sentences[i].end());
      }
      const double score = rouge_all_normalized(text, reference).mean_f1();
      if (score > best_score) {
        best_score = score;
        best = cand;
      }
    }
    if (best == n) break;
    labels[best] = 1;
    best_so_far = best_score;
  }
  return labels;
}

std::vector<LabelVector> oracle_labels_batch(const std::vector<Document>& docs, std::size_t m,
                                             const RougeConfig& cfg, Exec exec) {
  std::vector<LabelVector> out(docs.size());
  for_each_index(docs.size(), exec, [&](std::size_t i) { out[i] = oracle_labels(docs[i], m, cfg); });
  return out;
}

Summary lead_m(const Document& doc, std::size_t m) {
  if (m == 0) throw Error(ErrorKind::input, "lead-m needs m >= 1");
  Summary s;
  for (std::size_t i = 0; i < std::min(m, doc.size()); ++i) s.selected.push_back(i);
  return s;
}

// ---------------------------------------------------------------------------
// Synthetic corpus

void SyntheticSpec::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::input, "invalid synthetic spec: " + msg); };
  if (num_docs == 0) fail("num_docs must be positive");
  if (sentences_per_doc == 0) fail("sentences_per_doc must be positive");
  if (salient_per_doc == 0) fail("salient_per_doc must be positive");
  if (salient_per_doc >= sentences_per_doc) fail("salient_per_doc must be < sentences_per_doc");
  if (vocab_size == 0) fail("vocab_size must be positive");
  if (keyword_pool_size == 0) fail("keyword_pool_size must be positive");
  if (keywords_per_doc == 0 || keywords_per_doc > keyword_pool_size) {
    fail("keywords_per_doc must be in [1, keyword_pool_size]");
  }
  if (min_sentence_len < 3 || max_sentence_len < min_sentence_len) {
    fail("sentence length range must satisfy 3 <= min <= max");
  }
  if (!(noise_token_rate >= 0.0 && noise_token_rate < 1.0)) fail("noise_token_rate must be in [0, 1)");
  if (!(synonym_rate >= 0.0 && synonym_rate <= 1.0)) fail("synonym_rate must be in [0, 1]");
}

namespace {

std::string numbered(const char* prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%04zu", prefix, i);
  return buf;
}

// k distinct values from [0, n), in draw order.
std::vector<std::size_t> sample_distinct(Rng& rng, std::size_t n, std::size_t k) {
  std::vector<std::size_t> pool(n);
  for (std::size_t i = 0; i < n; ++i) pool[i] = i;
  for (std::size_t i = 0; i < k; ++i) std::swap(pool[i], pool[i + rng.below(n - i)]);
  pool.resize(k);
  return pool;
}

}  // namespace

std::string synthetic_filler_token(std::size_t i) { return numbered("w", i); }
std::string synthetic_keyword_token(std::size_t i) { return numbered("kw", i); }
std::string synthetic_synonym_token(std::size_t i) { return numbered("sy", i); }

SyntheticCorpus generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  SyntheticCorpus out;
  out.docs.reserve(spec.num_docs);
  out.salient.reserve(spec.num_docs);

  for (std::size_t d = 0; d < spec.num_docs; ++d) {
    Rng rng(derive_seed(spec.seed, d));
    const auto keywords = sample_distinct(rng, spec.keyword_pool_size, spec.keywords_per_doc);
    auto salient = sample_distinct(rng, spec.sentences_per_doc, spec.salient_per_doc);
    std::sort(salient.begin(), salient.end());

    std::vector<std::string> raw(spec.sentences_per_doc);
    std::vector<std::vector<int>> keyword_slot(spec.sentences_per_doc);  // keyword index or -1 per token
    std::vector<TokenSeq> tokens(spec.sentences_per_doc);
    for (std::size_t s = 0; s < spec.sentences_per_doc; ++s) {
      const std::size_t len =
          spec.min_sentence_len + rng.below(spec.max_sentence_len - spec.min_sentence_len + 1);
      TokenSeq& t = tokens[s];
      std::vector<int>& slots = keyword_slot[s];
      for (std::size_t k = 0; k < len; ++k) {
        t.push_back(synthetic_filler_token(rng.below(spec.vocab_size)));
        slots.push_back(-1);
      }
      if (std::binary_search(salient.begin(), salient.end(), s)) {
        const std::size_t planted = std::min<std::size_t>(2, spec.keywords_per_doc);
        const auto which = sample_distinct(rng, spec.keywords_per_doc, planted);
        const auto where = sample_distinct(rng, len, planted);
        for (std::size_t p = 0; p < planted; ++p) {
          const std::size_t kw = keywords[which[p]];
          t[where[p]] = synthetic_keyword_token(kw);
          slots[where[p]] = static_cast<int>(kw);
        }
      }
      t.push_back(".");
      slots.push_back(-1);
      raw[s] = join_tokens(t);
    }

    TokenSeq reference;
    for (std::size_t s : salient) {
      for (std::size_t k = 0; k < tokens[s].size(); ++k) {
        if (spec.noise_token_rate > 0.0 && rng.bernoulli(spec.noise_token_rate)) continue;
        const int kw = keyword_slot[s][k];
        if (kw >= 0 && spec.synonym_rate > 0.0 && rng.bernoulli(spec.synonym_rate)) {
          reference.push_back(synthetic_synonym_token(static_cast<std::size_t>(kw)));
        } else {
          reference.push_back(tokens[s][k]);
        }
      }
    }
    if (reference.empty()) reference.push_back(tokens[salient.front()].front());

    out.docs.push_back(make_document(spec.id_prefix + "-" + std::to_string(d), raw, std::move(reference)));
    out.salient.push_back(std::move(salient));
  }
  return out;
}

std::vector<std::pair<std::string, Vector>> synthetic_vectors(const SyntheticSpec& spec, std::size_t dim,
                                                              double keyword_norm, double synonym_noise) {
  spec.validate();
  if (dim < 2) throw Error(ErrorKind::input, "synthetic vector dimension must be >= 2");
  Rng rng(derive_seed(spec.seed, 0x5EC7025ULL));
  auto direction = [&] {
    Vector v(dim);
    double sq = 0.0;
    for (double& x : v) {
      x = rng.uniform(-1.0, 1.0);
      sq += x * x;
    }
    const double inv = sq > 0.0 ? 1.0 / std::sqrt(sq) : 1.0;
    for (double& x : v) x *= inv;
    return v;
  };
  auto scaled = [](Vector v, double s) {
    for (double& x : v) x *= s;
    return v;
  };

  std::vector<std::pair<std::string, Vector>> rows;
  for (std::size_t i = 0; i < spec.vocab_size; ++i) rows.emplace_back(synthetic_filler_token(i), direction());
  for (std::size_t i = 0; i < spec.keyword_pool_size; ++i) {
    const Vector base = direction();
    Vector syn = base;
    const Vector jitter = direction();
    double sq = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      syn[k] += synonym_noise * jitter[k];
      sq += syn[k] * syn[k];
    }
    syn = scaled(std::move(syn), keyword_norm / std::sqrt(sq));
    rows.emplace_back(synthetic_keyword_token(i), scaled(base, keyword_norm));
    rows.emplace_back(synthetic_synonym_token(i), std::move(syn));
  }
  for (const char* p : {".", ",", ";", ":", "!", "?", "(", ")", "'", "\""}) rows.emplace_back(p, direction());
  return rows;
}

}  // namespace sumrl
