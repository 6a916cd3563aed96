#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace sumrl {

/// Lowercase tokens in document order. Never contains empty strings.
using TokenSeq = std::vector<std::string>;

/// Lowercases ASCII letters, splits on whitespace and detaches each of
/// . , ; : ! ? ( ) ' " as its own token. Bytes >= 0x80 pass through unchanged.
TokenSeq tokenize(std::string_view text);

/// Space-joined tokens; tokenize(join_tokens(t)) == t for any tokenize output t.
std::string join_tokens(const TokenSeq& tokens);

bool is_punctuation_token(std::string_view token) noexcept;

using StopwordSet = std::unordered_set<std::string>;

/// Built-in English stopword list (the classic SMART-style short list of
/// function words: articles, pronouns, auxiliaries, prepositions, conjunctions).
const StopwordSet& default_stopwords();

/// One token per line, UTF-8. Blank lines and lines starting with '#' are skipped.
StopwordSet load_stopwords(const std::filesystem::path& path);

}  // namespace sumrl
