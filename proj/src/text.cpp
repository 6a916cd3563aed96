#include "sumrl/text.hpp"

#include <fstream>

#include "sumrl/error.hpp"

namespace sumrl {

namespace {

constexpr std::string_view kDetached = ".,;:!?()'\"";

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

char lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

}  // namespace

TokenSeq tokenize(std::string_view text) {
  TokenSeq out;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) {
      out.push_back(std::move(current));
      current.clear();
    }
  };
  for (char c : text) {
    if (is_space(c)) {
      flush();
    } else if (kDetached.find(c) != std::string_view::npos) {
      flush();
      out.emplace_back(1, c);
    } else {
      current.push_back(lower(c));
    }
  }
  flush();
  return out;
}

std::string join_tokens(const TokenSeq& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

bool is_punctuation_token(std::string_view token) noexcept {
  return token.size() == 1 && kDetached.find(token[0]) != std::string_view::npos;
}

const StopwordSet& default_stopwords() {
  static const StopwordSet words = {
      "a",       "about",   "above",  "after",  "again",   "against", "all",     "am",
      "an",      "and",     "any",    "are",    "as",      "at",      "be",      "because",
      "been",    "before",  "being",  "below",  "between", "both",    "but",     "by",
      "can",     "could",   "did",    "do",     "does",    "doing",   "down",    "during",
      "each",    "few",     "for",    "from",   "further", "had",     "has",     "have",
      "having",  "he",      "her",    "here",   "hers",    "herself", "him",     "himself",
      "his",     "how",     "i",      "if",     "in",      "into",    "is",      "it",
      "its",     "itself",  "just",   "me",     "more",    "most",    "my",      "myself",
      "no",      "nor",     "not",    "now",    "of",      "off",     "on",      "once",
      "only",    "or",      "other",  "our",    "ours",    "ourselves", "out",   "over",
      "own",     "same",    "she",    "should", "so",      "some",    "such",    "than",
      "that",    "the",     "their",  "theirs", "them",    "themselves", "then", "there",
      "these",   "they",    "this",   "those",  "through", "to",      "too",     "under",
      "until",   "up",      "very",   "was",    "we",      "were",    "what",    "when",
      "where",   "which",   "while",  "who",    "whom",    "why",     "will",    "with",
      "would",   "you",     "your",   "yours",  "yourself", "yourselves", "shall", "may",
      "must",    "upon",    "whether", "within", "without", "also",   "s",       "t",
  };
  return words;
}

StopwordSet load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::input, "cannot open stopword file " + path.string());
  StopwordSet out;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && is_space(line.back())) line.pop_back();
    std::size_t start = 0;
    while (start < line.size() && is_space(line[start])) ++start;
    if (start == line.size() || line[start] == '#') continue;
    std::string word = line.substr(start);
    for (char& c : word) {
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    out.insert(std::move(word));
  }
  return out;
}

}  // namespace sumrl
