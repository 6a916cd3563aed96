#include "sumrl/embeddings.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "sumrl/error.hpp"
#include "sumrl/rng.hpp"

namespace sumrl {

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis) noexcept {
  std::uint64_t h = basis;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

Vector hash_embedding(std::string_view token, std::size_t dim, std::uint64_t seed) {
  if (dim < 2) throw Error(ErrorKind::input, "hash embedding dimension must be >= 2");
  const std::uint64_t key = splitmix64(fnv1a64(token) ^ splitmix64(seed));
  Vector v(dim);
  double sq = 0.0;
  for (std::size_t k = 0; k < dim; ++k) {
    const std::uint64_t bits = splitmix64(key + k);
    v[k] = static_cast<double>(bits >> 11) * 0x1.0p-52 - 1.0;
    sq += v[k] * v[k];
  }
  if (sq == 0.0) {
    v[0] = 1.0;
    return v;
  }
  const double inv = 1.0 / std::sqrt(sq);
  for (double& x : v) x *= inv;
  return v;
}

namespace {

std::string hex64(std::uint64_t x) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << x;
  return os.str();
}

std::uint64_t table_digest(const EmbeddingProvider::Table& table) {
  std::vector<const std::string*> keys;
  keys.reserve(table.size());
  for (const auto& [k, v] : table) keys.push_back(&k);
  std::sort(keys.begin(), keys.end(), [](auto* a, auto* b) { return *a < *b; });
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (const std::string* k : keys) {
    h = fnv1a64(*k, h);
    h = fnv1a64(std::string_view("\0", 1), h);
    for (double x : table.at(*k)) {
      h = fnv1a64(std::string_view(reinterpret_cast<const char*>(&x), sizeof x), h);
    }
  }
  return h;
}

}  // namespace

EmbeddingProvider EmbeddingProvider::hashed(std::size_t dim, std::uint64_t seed) {
  if (dim < 2) throw Error(ErrorKind::input, "hash embedding dimension must be >= 2");
  EmbeddingProvider p;
  p.kind_ = ProviderKind::hash;
  p.oov_ = OovPolicy::hash_fallback;
  p.dim_ = dim;
  p.seed_ = seed;
  p.fingerprint_ = "hash:dim=" + std::to_string(dim) + ":seed=" + std::to_string(seed);
  return p;
}

EmbeddingProvider EmbeddingProvider::from_table(Table table, OovPolicy oov, std::uint64_t seed) {
  if (table.empty()) throw Error(ErrorKind::input, "no vectors");
  const std::size_t dim = table.begin()->second.size();
  for (const auto& [token, v] : table) {
    if (v.size() != dim || dim == 0) {
      throw Error(ErrorKind::input, "inconsistent vector dimension for token '" + token + "'");
    }
    for (double x : v) {
      if (!std::isfinite(x)) throw Error(ErrorKind::input, "non-finite component for token '" + token + "'");
    }
  }
  EmbeddingProvider p;
  p.kind_ = ProviderKind::file_vectors;
  p.oov_ = oov;
  p.dim_ = dim;
  p.seed_ = seed;
  const std::uint64_t digest = table_digest(table);
  p.fingerprint_ = "file:dim=" + std::to_string(dim) + ":n=" + std::to_string(table.size()) +
                   ":digest=" + hex64(digest) +
                   (oov == OovPolicy::zero ? ":oov=zero" : ":oov=hash:seed=" + std::to_string(seed));
  p.table_ = std::make_shared<const Table>(std::move(table));
  return p;
}

bool EmbeddingProvider::lookup(std::string_view token, std::span<double> out) const {
  if (table_) {
    auto it = table_->find(std::string(token));
    if (it != table_->end()) {
      std::copy(it->second.begin(), it->second.end(), out.begin());
      return true;
    }
    if (oov_ == OovPolicy::zero) {
      std::fill(out.begin(), out.end(), 0.0);
      return false;
    }
  }
  const Vector v = hash_embedding(token, dim_, seed_);
  std::copy(v.begin(), v.end(), out.begin());
  return true;
}

Vector EmbeddingProvider::vector(std::string_view token) const {
  Vector v(dim_);
  lookup(token, v);
  return v;
}

EmbeddingProvider parse_vectors(std::istream& in, OovPolicy oov, std::uint64_t seed) {
  EmbeddingProvider::Table table;
  std::string line;
  std::size_t line_no = 0;
  std::size_t dim = 0;
  std::string first_token;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream fields(line);
    std::string token;
    if (!(fields >> token)) continue;
    std::vector<std::string> parts;
    for (std::string s; fields >> s;) parts.push_back(std::move(s));
    if (line_no == 1 && parts.size() == 1) {
      long long a = 0, b = 0;
      auto ra = std::from_chars(token.data(), token.data() + token.size(), a);
      auto rb = std::from_chars(parts[0].data(), parts[0].data() + parts[0].size(), b);
      if (ra.ec == std::errc() && ra.ptr == token.data() + token.size() && rb.ec == std::errc() &&
          rb.ptr == parts[0].data() + parts[0].size()) {
        continue;  // "count dim" header
      }
    }
    Vector v;
    v.reserve(parts.size());
    for (const std::string& s : parts) {
      char* end = nullptr;
      const double x = std::strtod(s.c_str(), &end);
      if (end != s.c_str() + s.size() || !std::isfinite(x)) {
        throw Error(ErrorKind::input, "non-numeric vector component at line " + std::to_string(line_no));
      }
      v.push_back(x);
    }
    if (v.empty()) throw Error(ErrorKind::input, "token without components at line " + std::to_string(line_no));
    if (dim == 0) {
      dim = v.size();
      first_token = token;
    } else if (v.size() != dim) {
      throw Error(ErrorKind::input, "inconsistent vector dimension for token '" + token + "' (expected " +
                                        std::to_string(dim) + ", got " + std::to_string(v.size()) + ")");
    }
    table[token] = std::move(v);
  }
  if (table.empty()) throw Error(ErrorKind::input, "no vectors");
  return EmbeddingProvider::from_table(std::move(table), oov, seed);
}

EmbeddingProvider load_vectors(const std::filesystem::path& path, OovPolicy oov, std::uint64_t seed) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::input, "cannot open vector file " + path.string());
  return parse_vectors(in, oov, seed);
}

void write_vectors(std::ostream& out, const std::vector<std::pair<std::string, Vector>>& rows) {
  const auto old_precision = out.precision(17);
  for (const auto& [token, v] : rows) {
    out << token;
    for (double x : v) out << ' ' << x;
    out << '\n';
  }
  out.precision(old_precision);
}

PhraseEmbedding embed_phrase(std::span<const std::string> phrase, const EmbeddingProvider& provider) {
  if (phrase.empty()) throw Error(ErrorKind::input, "cannot embed an empty phrase");
  PhraseEmbedding out;
  out.vector.assign(provider.dim(), 0.0);
  Vector scratch(provider.dim());
  std::size_t found = 0;
  for (const std::string& token : phrase) {
    if (provider.lookup(token, scratch)) ++found;
    for (std::size_t k = 0; k < scratch.size(); ++k) out.vector[k] += scratch[k];
  }
  const double inv = 1.0 / static_cast<double>(phrase.size());
  for (double& x : out.vector) x *= inv;
  out.all_oov = found == 0;
  return out;
}

PhraseEmbedding embed_phrase(const TokenSeq& phrase, const EmbeddingProvider& provider) {
  return embed_phrase(std::span<const std::string>(phrase), provider);
}

double dot(std::span<const double> u, std::span<const double> v) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
  return s;
}

double norm(std::span<const double> v) { return std::sqrt(dot(v, v)); }

double euclidean(std::span<const double> u, std::span<const double> v) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double d = u[i] - v[i];
    s += d * d;
  }
  return std::sqrt(s);
}

double cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    throw Error(ErrorKind::input, "cosine dimension mismatch: " + std::to_string(u.size()) + " vs " +
                                      std::to_string(v.size()));
  }
  const double nu = norm(u);
  const double nv = norm(v);
  if (nu == 0.0 || nv == 0.0) return 0.0;
  return std::clamp(dot(u, v) / (nu * nv), -1.0, 1.0);
}

}  // namespace sumrl
