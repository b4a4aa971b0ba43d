#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hyperanf/errors.hpp"
#include "hyperanf/graph.hpp"
#include "hyperanf/parallel.hpp"

// Exact ground truth: the neighbourhood function by all-pairs BFS, and the
// closed form for the clique-path graph.

namespace hyperanf {

struct OracleGuard {
  std::uint64_t max_nodes = 1'000'000;
  std::uint64_t max_work = 100'000'000'000ULL;  // n * arcs
};

// Exact neighbourhood function: values[t] counts ordered pairs (x, y) with
// d(x, y) <= t, pairs (x, x) included. values[0] = n, values.back() = all
// reachable pairs.
struct ExactNf {
  std::uint64_t n = 0;
  std::vector<std::uint64_t> values;

  std::uint64_t diameter() const noexcept {
    return values.empty() ? 0 : values.size() - 1;
  }
  std::vector<double> as_doubles() const {
    return {values.begin(), values.end()};
  }
};

// BFS from every source, distances folded into a histogram; never stores
// an n x n matrix. Work is bounded by the guard.
inline ExactNf exact_nf(const Graph& g, unsigned threads = 1,
                        const OracleGuard& guard = {}) {
  const std::uint64_t n = g.num_nodes();
  if (n > guard.max_nodes)
    throw GuardError("exact nf: node count exceeds guard (" +
                     std::to_string(n) + " > " +
                     std::to_string(guard.max_nodes) + ")");
  if (n > 0 && g.num_arcs() > guard.max_work / n)
    throw GuardError("exact nf: n * arcs exceeds guard");
  ExactNf result;
  result.n = n;
  if (n == 0) {
    result.values = {0};
    return result;
  }

  if (threads == 0) threads = 1;
  struct Scratch {
    std::vector<std::uint32_t> stamp, dist, queue;
    std::vector<std::uint64_t> hist;
  };
  std::vector<Scratch> scratch(threads);
  for (auto& s : scratch) {
    s.stamp.assign(n, 0);
    s.dist.assign(n, 0);
    s.queue.reserve(n);
    s.hist.assign(1, 0);
  }

  parallel_chunks(n, threads, 64,
                  [&](std::uint64_t lo, std::uint64_t hi, unsigned worker) {
    Scratch& s = scratch[worker];
    for (std::uint64_t src = lo; src < hi; ++src) {
      const auto mark = static_cast<std::uint32_t>(src) + 1;
      s.queue.clear();
      s.queue.push_back(static_cast<std::uint32_t>(src));
      s.stamp[src] = mark;
      s.dist[src] = 0;
      for (std::size_t head = 0; head < s.queue.size(); ++head) {
        const std::uint32_t v = s.queue[head];
        const std::uint32_t dv = s.dist[v];
        if (dv >= s.hist.size()) s.hist.resize(dv + 1, 0);
        ++s.hist[dv];
        for (std::uint32_t w : g.successors(v)) {
          if (s.stamp[w] == mark) continue;
          s.stamp[w] = mark;
          s.dist[w] = dv + 1;
          s.queue.push_back(w);
        }
      }
    }
  });

  std::size_t depth = 0;
  for (const auto& s : scratch) depth = std::max(depth, s.hist.size());
  std::vector<std::uint64_t> hist(depth, 0);
  for (const auto& s : scratch)
    for (std::size_t d = 0; d < s.hist.size(); ++d) hist[d] += s.hist[d];

  result.values.resize(depth);
  std::uint64_t acc = 0;
  for (std::size_t d = 0; d < depth; ++d) {
    acc += hist[d];
    result.values[d] = acc;
  }
  return result;
}

// Exact neighbourhood function of gen_clique_path(k, l) at distance t.
inline std::uint64_t clique_path_nf(std::uint64_t k, std::uint64_t l,
                                    std::uint64_t t) {
  if (k < 1 || l < 1) throw std::invalid_argument("clique-path needs k,l >= 1");
  if (t == 0) return 2 * k + l;
  if (t <= l) return (t + 1) * (4 * k + 2 * l - t) / 2 - 2 * k + 2 * k * k;
  return (l + 1) * (4 * k + l) / 2 - 2 * k + 3 * k * k;
}

}  // namespace hyperanf
