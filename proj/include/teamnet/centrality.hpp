#pragma once

#include <cstdint>
#include <vector>

#include "teamnet/graph.hpp"
#include "teamnet/types.hpp"

namespace teamnet {

enum class CentralityKind { degree, betweenness, closeness };

struct CentralityVector {
  CentralityKind kind;
  std::vector<double> values;  // one non-negative score per agent
};

/// degree(i) / (n-1); zero for the single-node graph.
inline CentralityVector degree_centrality(const Graph& g) {
  const std::uint32_t n = g.node_count();
  CentralityVector out{CentralityKind::degree, std::vector<double>(n, 0.0)};
  if (n <= 1) return out;
  for (AgentId i = 0; i < n; ++i) out.values[i] = static_cast<double>(g.degree(i)) / (n - 1);
  return out;
}

namespace detail {

// Reduced signed fraction with overflow-checked arithmetic. Betweenness
// scores are sums of sigma ratios, i.e. exact rationals; computing them
// exactly makes the result independent of accumulation order, so it agrees
// bit for bit with any other exact evaluation. Every op reports overflow
// instead of wrapping so callers can fall back to floating point.
struct Frac {
  std::int64_t num = 0;
  std::int64_t den = 1;
};

inline bool checked_mul(std::int64_t a, std::int64_t b, std::int64_t& out) {
  return !__builtin_mul_overflow(a, b, &out);
}

inline bool checked_add(std::int64_t a, std::int64_t b, std::int64_t& out) {
  return !__builtin_add_overflow(a, b, &out);
}

inline std::int64_t gcd64(std::int64_t a, std::int64_t b) {
  a = a < 0 ? -a : a;
  while (b != 0) {
    const std::int64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline bool frac_mul(const Frac& a, const Frac& b, Frac& out) {
  const std::int64_t g1 = gcd64(a.num, b.den);
  const std::int64_t g2 = gcd64(b.num, a.den);
  const std::int64_t an = g1 ? a.num / g1 : a.num;
  const std::int64_t bd = g1 ? b.den / g1 : b.den;
  const std::int64_t bn = g2 ? b.num / g2 : b.num;
  const std::int64_t ad = g2 ? a.den / g2 : a.den;
  return checked_mul(an, bn, out.num) && checked_mul(ad, bd, out.den);
}

inline bool frac_add(const Frac& a, const Frac& b, Frac& out) {
  const std::int64_t g = gcd64(a.den, b.den);
  const std::int64_t bq = b.den / g;
  const std::int64_t aq = a.den / g;
  std::int64_t lhs = 0, rhs = 0;
  if (!checked_mul(a.num, bq, lhs) || !checked_mul(b.num, aq, rhs)) return false;
  if (!checked_add(lhs, rhs, out.num) || !checked_mul(a.den, bq, out.den)) return false;
  const std::int64_t r = gcd64(out.num, out.den);
  if (r > 1) {
    out.num /= r;
    out.den /= r;
  }
  return true;
}

// Exact only when both parts sit inside the 2^53 integer range of a double.
inline bool frac_to_double(const Frac& f, double& out) {
  constexpr std::int64_t exact_limit = std::int64_t(1) << 53;
  if (f.num >= exact_limit || f.num <= -exact_limit || f.den >= exact_limit) return false;
  out = static_cast<double>(f.num) / static_cast<double>(f.den);
  return true;
}

// Shared Brandes skeleton: BFS from every source collecting predecessor DAG,
// path counts and the reverse visit order, then caller-supplied accumulation.
struct BrandesWorkspace {
  std::vector<std::vector<AgentId>> pred;
  std::vector<std::uint64_t> sigma;
  std::vector<std::int64_t> dist;
  std::vector<AgentId> order;

  explicit BrandesWorkspace(std::uint32_t n) : pred(n), sigma(n), dist(n) { order.reserve(n); }

  void bfs(const Graph& g, AgentId s) {
    const std::uint32_t n = g.node_count();
    for (AgentId v = 0; v < n; ++v) {
      pred[v].clear();
      sigma[v] = 0;
      dist[v] = -1;
    }
    order.clear();
    sigma[s] = 1;
    dist[s] = 0;
    order.push_back(s);
    for (std::size_t head = 0; head < order.size(); ++head) {
      const AgentId v = order[head];
      for (AgentId w : g.neighbors(v)) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          order.push_back(w);
        }
        if (dist[w] == dist[v] + 1) {
          sigma[w] += sigma[v];
          pred[w].push_back(v);
        }
      }
    }
  }
};

inline bool betweenness_exact(const Graph& g, std::vector<double>& values) {
  const std::uint32_t n = g.node_count();
  BrandesWorkspace ws(n);
  std::vector<Frac> delta(n);
  std::vector<Frac> total(n);
  constexpr std::uint64_t sigma_limit = std::uint64_t(1) << 53;

  for (AgentId s = 0; s < n; ++s) {
    ws.bfs(g, s);
    for (AgentId v = 0; v < n; ++v) delta[v] = Frac{};
    for (auto it = ws.order.rbegin(); it != ws.order.rend(); ++it) {
      const AgentId w = *it;
      if (ws.sigma[w] >= sigma_limit) return false;
      for (AgentId v : ws.pred[w]) {
        Frac ratio{static_cast<std::int64_t>(ws.sigma[v]), static_cast<std::int64_t>(ws.sigma[w])};
        Frac one_plus, term;
        if (!frac_add(delta[w], Frac{1, 1}, one_plus)) return false;
        if (!frac_mul(ratio, one_plus, term)) return false;
        if (!frac_add(delta[v], term, delta[v])) return false;
      }
      if (w != s && !frac_add(total[w], delta[w], total[w])) return false;
    }
  }
  const Frac half{1, 2};  // both endpoints of every unordered pair accumulated
  for (AgentId v = 0; v < n; ++v) {
    if (!frac_mul(total[v], half, total[v])) return false;
    if (!frac_to_double(total[v], values[v])) return false;
  }
  return true;
}

inline void betweenness_double(const Graph& g, std::vector<double>& values) {
  const std::uint32_t n = g.node_count();
  BrandesWorkspace ws(n);
  std::vector<double> delta(n);
  for (AgentId s = 0; s < n; ++s) {
    ws.bfs(g, s);
    std::fill(delta.begin(), delta.end(), 0.0);
    for (auto it = ws.order.rbegin(); it != ws.order.rend(); ++it) {
      const AgentId w = *it;
      for (AgentId v : ws.pred[w])
        delta[v] += static_cast<double>(ws.sigma[v]) / static_cast<double>(ws.sigma[w]) * (1.0 + delta[w]);
      if (w != s) values[w] += delta[w];
    }
  }
  // Each unordered pair was accumulated from both endpoints.
  for (auto& v : values) v /= 2.0;
}

}  // namespace detail

/// Unnormalized shortest-path betweenness over unordered pairs,
/// sum over s<t of sigma_st(i)/sigma_st, by Brandes' accumulation.
/// Disconnected pairs contribute nothing. Accumulates in exact rational
/// arithmetic while the intermediate values fit 64 bits (always true at
/// small n), otherwise in doubles; both paths are deterministic.
inline CentralityVector betweenness(const Graph& g) {
  const std::uint32_t n = g.node_count();
  CentralityVector out{CentralityKind::betweenness, std::vector<double>(n, 0.0)};
  if (!detail::betweenness_exact(g, out.values)) {
    std::fill(out.values.begin(), out.values.end(), 0.0);
    detail::betweenness_double(g, out.values);
  }
  return out;
}

/// Harmonic closeness: sum over j != i of 1/d(i,j), with unreachable nodes
/// contributing 0. Total on disconnected graphs, which adaptation can
/// transiently create for non-initiating nodes.
inline CentralityVector closeness(const Graph& g) {
  const std::uint32_t n = g.node_count();
  CentralityVector out{CentralityKind::closeness, std::vector<double>(n, 0.0)};

  std::vector<std::int64_t> dist(n);
  std::vector<AgentId> queue;
  queue.reserve(n);

  for (AgentId s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    queue.clear();
    dist[s] = 0;
    queue.push_back(s);
    std::size_t head = 0;
    double sum = 0.0;
    while (head < queue.size()) {
      const AgentId v = queue[head++];
      if (v != s) sum += 1.0 / static_cast<double>(dist[v]);
      for (AgentId w : g.neighbors(v)) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          queue.push_back(w);
        }
      }
    }
    out.values[s] = sum;
  }
  return out;
}

}  // namespace teamnet
