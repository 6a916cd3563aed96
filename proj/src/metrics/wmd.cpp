#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "sumrl/error.hpp"
#include "sumrl/metrics.hpp"

namespace sumrl {

double min_cost_transport(std::span<const std::int64_t> supplies, std::span<const std::int64_t> demands,
                          std::span<const double> cost) {
  const std::size_t ns = supplies.size();
  const std::size_t nd = demands.size();
  if (cost.size() != ns * nd) throw std::invalid_argument("transport cost matrix has wrong size");
  const std::int64_t total_s = std::accumulate(supplies.begin(), supplies.end(), std::int64_t{0});
  const std::int64_t total_d = std::accumulate(demands.begin(), demands.end(), std::int64_t{0});
  if (total_s != total_d) throw std::invalid_argument("transport supplies and demands differ");

  // Node layout: [0, ns) supplies, [ns, ns + nd) demands, source, sink.
  const std::size_t source = ns + nd;
  const std::size_t sink = source + 1;
  const std::size_t nodes = sink + 1;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  std::vector<std::int64_t> left(supplies.begin(), supplies.end());
  std::vector<std::int64_t> need(demands.begin(), demands.end());
  std::vector<std::int64_t> flow(ns * nd, 0);
  std::vector<double> potential(nodes, 0.0);
  std::vector<double> dist(nodes);
  std::vector<std::size_t> parent(nodes);
  std::vector<char> done(nodes);

  std::int64_t remaining = total_s;
  while (remaining > 0) {
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(parent.begin(), parent.end(), kNone);
    std::fill(done.begin(), done.end(), 0);
    dist[source] = 0.0;

    auto relax = [&](std::size_t from, std::size_t to, double edge_cost) {
      const double reduced = std::max(0.0, edge_cost + potential[from] - potential[to]);
      const double candidate = dist[from] + reduced;
      if (candidate < dist[to]) {
        dist[to] = candidate;
        parent[to] = from;
      }
    };

    // Dense Dijkstra, run to completion so every reached potential stays valid.
    for (;;) {
      std::size_t u = kNone;
      for (std::size_t v = 0; v < nodes; ++v) {
        if (!done[v] && dist[v] < kInf && (u == kNone || dist[v] < dist[u])) u = v;
      }
      if (u == kNone) break;
      done[u] = 1;
      if (u == sink) continue;
      if (u == source) {
        for (std::size_t i = 0; i < ns; ++i) {
          if (left[i] > 0) relax(source, i, 0.0);
        }
      } else if (u < ns) {
        for (std::size_t j = 0; j < nd; ++j) relax(u, ns + j, cost[u * nd + j]);
      } else {
        const std::size_t j = u - ns;
        for (std::size_t i = 0; i < ns; ++i) {
          if (flow[i * nd + j] > 0) relax(u, i, -cost[i * nd + j]);
        }
        if (need[j] > 0) relax(u, sink, 0.0);
      }
    }
    if (dist[sink] == kInf) throw std::logic_error("transport problem became infeasible");

    for (std::size_t v = 0; v < nodes; ++v) {
      if (dist[v] < kInf) potential[v] += dist[v];
    }

    // Bottleneck along the path sink <- ... <- source.
    std::int64_t push = remaining;
    for (std::size_t v = sink; v != source; v = parent[v]) {
      const std::size_t u = parent[v];
      if (u == source) {
        push = std::min(push, left[v]);
      } else if (v == sink) {
        push = std::min(push, need[u - ns]);
      } else if (u >= ns) {
        push = std::min(push, flow[v * nd + (u - ns)]);
      }
    }
    for (std::size_t v = sink; v != source; v = parent[v]) {
      const std::size_t u = parent[v];
      if (u == source) {
        left[v] -= push;
      } else if (v == sink) {
        need[u - ns] -= push;
      } else if (u < ns) {
        flow[u * nd + (v - ns)] += push;
      } else {
        flow[v * nd + (u - ns)] -= push;
      }
    }
    remaining -= push;
  }

  double total = 0.0;
  for (std::size_t e = 0; e < flow.size(); ++e) {
    if (flow[e] > 0) total += static_cast<double>(flow[e]) * cost[e];
  }
  return total;
}

namespace {

struct Bag {
  std::vector<std::string> tokens;  // sorted unique
  std::vector<std::int64_t> counts;
};

Bag make_bag(const TokenSeq& seq) {
  std::map<std::string, std::int64_t> counts;
  for (const auto& t : seq) ++counts[t];
  Bag bag;
  for (auto& [t, c] : counts) {
    bag.tokens.push_back(t);
    bag.counts.push_back(c);
  }
  return bag;
}

std::vector<Vector> vectors_of(const std::vector<std::string>& tokens, const EmbeddingProvider& provider) {
  std::vector<Vector> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(provider.vector(t));
  return out;
}

}  // namespace

double wmd(const TokenSeq& candidate, const TokenSeq& reference, const EmbeddingProvider& provider) {
  if (candidate.empty() || reference.empty()) {
    throw Error(ErrorKind::input, "word mover's distance needs two non-empty sequences");
  }
  const Bag a = make_bag(candidate);
  const Bag b = make_bag(reference);
  const auto len_a = static_cast<std::int64_t>(candidate.size());
  const auto len_b = static_cast<std::int64_t>(reference.size());
  const std::int64_t scale = std::lcm(len_a, len_b);

  std::vector<std::int64_t> supply(a.counts.size()), demand(b.counts.size());
  for (std::size_t i = 0; i < supply.size(); ++i) supply[i] = a.counts[i] * (scale / len_a);
  for (std::size_t j = 0; j < demand.size(); ++j) demand[j] = b.counts[j] * (scale / len_b);

  const auto va = vectors_of(a.tokens, provider);
  const auto vb = vectors_of(b.tokens, provider);
  std::vector<double> cost(va.size() * vb.size());
  for (std::size_t i = 0; i < va.size(); ++i) {
    for (std::size_t j = 0; j < vb.size(); ++j) {
      cost[i * vb.size() + j] = a.tokens[i] == b.tokens[j] ? 0.0 : euclidean(va[i], vb[j]);
    }
  }
  return min_cost_transport(supply, demand, cost) / static_cast<double>(scale);
}

double empty_candidate_distance(const TokenSeq& reference, const EmbeddingProvider& provider) {
  const Bag b = make_bag(reference);
  const auto vb = vectors_of(b.tokens, provider);
  double widest = 0.0;
  for (std::size_t i = 0; i < vb.size(); ++i) {
    for (std::size_t j = i + 1; j < vb.size(); ++j) widest = std::max(widest, euclidean(vb[i], vb[j]));
  }
  return widest + 1.0;
}

double seq_reward_from_distance(double distance, double epsilon) { return 1.0 / (distance + epsilon); }

double r_seq(const TokenSeq& candidate, const TokenSeq& reference, const EmbeddingProvider& provider,
             double epsilon) {
  if (reference.empty()) throw Error(ErrorKind::input, "sequence reward needs a non-empty reference");
  const double d = candidate.empty() ? empty_candidate_distance(reference, provider)
                                     : wmd(candidate, reference, provider);
  return seq_reward_from_distance(d, epsilon);
}

}  // namespace sumrl
