#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hyperanf/errors.hpp"
#include "hyperanf/hash.hpp"

// Immutable directed graphs in compressed sparse row layout, plus loaders,
// a binary cache and the generators used by the test fixtures.

namespace hyperanf {

class Graph {
 public:
  Graph() = default;

  // Builds a CSR graph from an arc list; duplicates are collapsed and each
  // successor list is sorted. All ids must be < n.
  static Graph from_edges(std::uint64_t n,
                          std::vector<std::pair<std::uint32_t, std::uint32_t>> edges) {
    for (const auto& [u, v] : edges)
      if (u >= n || v >= n)
        throw std::invalid_argument("arc endpoint out of range");
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    Graph g;
    g.n_ = n;
    g.offsets_.assign(n + 1, 0);
    g.succ_.resize(edges.size());
    for (const auto& [u, v] : edges) ++g.offsets_[u + 1];
    for (std::uint64_t v = 0; v < n; ++v) g.offsets_[v + 1] += g.offsets_[v];
    for (std::size_t i = 0; i < edges.size(); ++i) g.succ_[i] = edges[i].second;
    return g;
  }

  std::uint64_t num_nodes() const noexcept { return n_; }
  std::uint64_t num_arcs() const noexcept { return succ_.size(); }

  std::span<const std::uint32_t> successors(std::uint64_t v) const noexcept {
    return {succ_.data() + offsets_[v], succ_.data() + offsets_[v + 1]};
  }
  std::uint64_t out_degree(std::uint64_t v) const noexcept {
    return offsets_[v + 1] - offsets_[v];
  }

  const std::vector<std::uint64_t>& offsets() const noexcept { return offsets_; }
  const std::vector<std::uint32_t>& arcs() const noexcept { return succ_; }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.offsets_ == b.offsets_ && a.succ_ == b.succ_;
  }

 private:
  friend Graph transpose(const Graph&);

  std::uint64_t n_ = 0;
  std::vector<std::uint64_t> offsets_{0};
  std::vector<std::uint32_t> succ_;
};

// Graph with arc y->x for every arc x->y. Successor lists come out sorted.
inline Graph transpose(const Graph& g) {
  Graph t;
  t.n_ = g.num_nodes();
  t.offsets_.assign(t.n_ + 1, 0);
  t.succ_.resize(g.num_arcs());
  for (std::uint32_t w : g.arcs()) ++t.offsets_[w + 1];
  for (std::uint64_t v = 0; v < t.n_; ++v) t.offsets_[v + 1] += t.offsets_[v];
  std::vector<std::uint64_t> cursor(t.offsets_.begin(), t.offsets_.end() - 1);
  for (std::uint64_t v = 0; v < g.num_nodes(); ++v)
    for (std::uint32_t w : g.successors(v))
      t.succ_[cursor[w]++] = static_cast<std::uint32_t>(v);
  return t;
}

// --- Edge-list text format -------------------------------------------------
// One arc per line, "src dst", 0-based decimal ids, whitespace separated.
// Blank lines and lines starting with '#' are skipped. Unless n_override is
// nonzero, n = 1 + max id (0 for an empty file).

inline Graph load_edge_list(const std::string& path, bool symmetrise = false,
                            std::uint64_t n_override = 0) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  std::uint64_t max_id = 0;
  bool any = false;
  std::string line;
  std::uint64_t line_no = 0;
  auto fail = [&](const std::string& msg) {
    throw ParseError(path + ":" + std::to_string(line_no) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '#') continue;
    std::uint64_t ids[2];
    for (int field = 0; field < 2; ++field) {
      if (pos == std::string::npos) fail("expected two node ids");
      const char* begin = line.data() + pos;
      const char* end = line.data() + line.size();
      auto [next, ec] = std::from_chars(begin, end, ids[field]);
      if (ec != std::errc() || next == begin) fail("expected two node ids");
      pos = line.find_first_not_of(" \t\r", next - line.data());
    }
    if (pos != std::string::npos) fail("trailing characters after arc");
    if (ids[0] > std::numeric_limits<std::uint32_t>::max() ||
        ids[1] > std::numeric_limits<std::uint32_t>::max())
      fail("node id overflows 32 bits");
    if (n_override && (ids[0] >= n_override || ids[1] >= n_override))
      fail("node id exceeds declared node count");
    edges.emplace_back(static_cast<std::uint32_t>(ids[0]),
                       static_cast<std::uint32_t>(ids[1]));
    max_id = std::max({max_id, ids[0], ids[1]});
    any = true;
  }
  const std::uint64_t n = n_override ? n_override : (any ? max_id + 1 : 0);
  if (symmetrise) {
    const std::size_t original = edges.size();
    edges.reserve(2 * original);
    for (std::size_t i = 0; i < original; ++i)
      edges.emplace_back(edges[i].second, edges[i].first);
  }
  return Graph::from_edges(n, std::move(edges));
}

inline void save_edge_list(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  for (std::uint64_t v = 0; v < g.num_nodes(); ++v)
    for (std::uint32_t w : g.successors(v)) out << v << ' ' << w << '\n';
  if (!out) throw IoError("write failed: " + path);
}

// --- CSR binary cache --------------------------------------------------------
// "HBG1" magic, u64 n, u64 arc count, (n+1) u64 offsets, arc-count u32
// successor ids; everything little-endian. See docs/FORMATS.md.

namespace detail {

inline void put_u32f(std::ofstream& out, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 4);
}
inline void put_u64f(std::ofstream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}
inline std::uint32_t get_u32f(std::ifstream& in) {
  unsigned char b[4] = {};
  in.read(reinterpret_cast<char*>(b), 4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t(b[i]) << (8 * i);
  return v;
}
inline std::uint64_t get_u64f(std::ifstream& in) {
  unsigned char b[8] = {};
  in.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t(b[i]) << (8 * i);
  return v;
}

}  // namespace detail

inline void save_csr(const Graph& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out.write("HBG1", 4);
  detail::put_u64f(out, g.num_nodes());
  detail::put_u64f(out, g.num_arcs());
  for (std::uint64_t off : g.offsets()) detail::put_u64f(out, off);
  for (std::uint32_t w : g.arcs()) detail::put_u32f(out, w);
  if (!out) throw IoError("write failed: " + path);
}

inline bool is_csr_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  char magic[4] = {};
  in.read(magic, 4);
  return in && std::memcmp(magic, "HBG1", 4) == 0;
}

inline Graph load_csr(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  char magic[4] = {};
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "HBG1", 4) != 0)
    throw ParseError(path + ": bad graph cache magic");
  const std::uint64_t n = detail::get_u64f(in);
  const std::uint64_t arcs = detail::get_u64f(in);
  std::vector<std::uint64_t> offsets(n + 1);
  for (auto& off : offsets) off = detail::get_u64f(in);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  edges.reserve(arcs);
  for (std::uint64_t v = 0; v < n; ++v) {
    if (offsets[v] > offsets[v + 1] || offsets[v + 1] > arcs)
      throw ParseError(path + ": corrupt offset array");
    for (std::uint64_t i = offsets[v]; i < offsets[v + 1]; ++i)
      edges.emplace_back(static_cast<std::uint32_t>(v), detail::get_u32f(in));
  }
  if (!in || offsets.back() != arcs)
    throw ParseError(path + ": truncated or inconsistent cache");
  return Graph::from_edges(n, std::move(edges));
}

inline Graph load_graph(const std::string& path, bool symmetrise = false,
                        std::uint64_t n_override = 0) {
  if (is_csr_file(path)) {
    if (symmetrise || n_override)
      throw std::invalid_argument(
          "symmetrise/n overrides apply to edge-list input only");
    return load_csr(path);
  }
  return load_edge_list(path, symmetrise, n_override);
}

// --- Generators --------------------------------------------------------------

// Two complete digraphs of k nodes joined by a one-way path of l nodes:
// nodes [0,k) form clique A, [k,k+l) the path p1..pl, [k+l,2k+l) clique B.
// Every node of A points at p1 and pl points at every node of B, so all
// A-to-B distances equal l+1 and the final step of the neighbourhood
// function jumps by k^2.
inline Graph gen_clique_path(std::uint64_t k, std::uint64_t l) {
  if (k < 1 || l < 1) throw std::invalid_argument("clique-path needs k,l >= 1");
  const std::uint64_t n = 2 * k + l;
  if (n > std::numeric_limits<std::uint32_t>::max())
    throw std::invalid_argument("graph too large for 32-bit node ids");
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  edges.reserve(2 * k * (k - 1) + (l - 1) + 2 * k);
  auto id = [](std::uint64_t x) { return static_cast<std::uint32_t>(x); };
  for (std::uint64_t a = 0; a < k; ++a)
    for (std::uint64_t b = 0; b < k; ++b)
      if (a != b) edges.emplace_back(id(a), id(b));
  for (std::uint64_t a = 0; a < k; ++a) edges.emplace_back(id(a), id(k));
  for (std::uint64_t i = 0; i + 1 < l; ++i)
    edges.emplace_back(id(k + i), id(k + i + 1));
  for (std::uint64_t b = 0; b < k; ++b)
    edges.emplace_back(id(k + l - 1), id(k + l + b));
  for (std::uint64_t a = 0; a < k; ++a)
    for (std::uint64_t b = 0; b < k; ++b)
      if (a != b) edges.emplace_back(id(k + l + a), id(k + l + b));
  return Graph::from_edges(n, std::move(edges));
}

// Every node gets round(d) successors drawn uniformly without replacement
// (self-loops allowed). Deterministic for a given seed.
inline Graph gen_uniform_random(std::uint64_t n, double d, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("random graph needs n >= 1");
  if (n > std::numeric_limits<std::uint32_t>::max())
    throw std::invalid_argument("graph too large for 32-bit node ids");
  const std::uint64_t deg = static_cast<std::uint64_t>(std::llround(d));
  if (d < 0 || deg >= n)
    throw std::invalid_argument("average degree must satisfy 0 <= d < n");
  SplitMix64 rng(mix64(seed ^ 0x5eedULL));
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  edges.reserve(n * deg);
  std::vector<std::uint32_t> picks;
  picks.reserve(deg);
  for (std::uint64_t v = 0; v < n; ++v) {
    picks.clear();
    while (picks.size() < deg) {
      const auto w = static_cast<std::uint32_t>(rng.next_below(n));
      if (std::find(picks.begin(), picks.end(), w) == picks.end())
        picks.push_back(w);
    }
    for (std::uint32_t w : picks)
      edges.emplace_back(static_cast<std::uint32_t>(v), w);
  }
  return Graph::from_edges(n, std::move(edges));
}

}  // namespace hyperanf
