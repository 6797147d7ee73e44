#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cartan/error.hpp"
#include "cartan/nat_matrix.hpp"

namespace cartan {

using Vertex = std::uint32_t;

/// Bipartite multigraph of a matrix: row vertices, column vertices, and
/// A(i,j) parallel edges between row i and column j.
class BipartiteMultigraph {
 public:
  explicit BipartiteMultigraph(NatMatrix multiplicity) : mult_(std::move(multiplicity)) {}

  std::size_t row_count() const noexcept { return mult_.rows(); }
  std::size_t col_count() const noexcept { return mult_.cols(); }
  std::size_t vertex_count() const noexcept { return mult_.rows() + mult_.cols(); }
  const NatMatrix& multiplicity() const noexcept { return mult_; }

  Entry row_valency(std::size_t i) const { return mult_.row_sum(i); }
  Entry col_valency(std::size_t j) const { return mult_.col_sum(j); }

  friend bool operator==(const BipartiteMultigraph&, const BipartiteMultigraph&) = default;

 private:
  NatMatrix mult_;
};

inline BipartiteMultigraph graph_from_matrix(const NatMatrix& a) { return BipartiteMultigraph(a); }

/// Undirected multigraph with loops. Edges are stored as sorted (u <= v) pairs;
/// a loop contributes 2 to its vertex's valency.
class Multigraph {
 public:
  Multigraph() = default;
  Multigraph(std::size_t vertex_count, std::vector<std::pair<Vertex, Vertex>> edges)
      : vertex_count_(vertex_count), edges_(std::move(edges)) {
    for (auto& [u, v] : edges_) {
      if (u >= vertex_count_ || v >= vertex_count_) throw PreconditionError("Multigraph: edge endpoint out of range");
      if (v < u) std::swap(u, v);
    }
    std::sort(edges_.begin(), edges_.end());
  }

  /// Rows become vertices 0..R-1, columns R..R+C-1.
  static Multigraph from_bipartite(const BipartiteMultigraph& g) {
    std::vector<std::pair<Vertex, Vertex>> edges;
    const auto& a = g.multiplicity();
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j)
        for (Entry t = 0; t < a(i, j); ++t)
          edges.emplace_back(static_cast<Vertex>(i), static_cast<Vertex>(a.rows() + j));
    return Multigraph(g.vertex_count(), std::move(edges));
  }

  std::size_t vertex_count() const noexcept { return vertex_count_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<std::pair<Vertex, Vertex>>& edges() const noexcept { return edges_; }

  std::size_t valency(Vertex v) const {
    std::size_t d = 0;
    for (auto [a, b] : edges_) d += (a == v) + (b == v);
    return d;
  }

  /// Dense edge-count matrix; loops are counted once on the diagonal.
  std::vector<std::vector<std::uint32_t>> adjacency() const {
    std::vector<std::vector<std::uint32_t>> adj(vertex_count_, std::vector<std::uint32_t>(vertex_count_, 0));
    for (auto [u, v] : edges_) {
      ++adj[u][v];
      if (u != v) ++adj[v][u];
    }
    return adj;
  }

  friend bool operator==(const Multigraph&, const Multigraph&) = default;
  friend auto operator<=>(const Multigraph&, const Multigraph&) = default;

 private:
  std::size_t vertex_count_ = 0;
  std::vector<std::pair<Vertex, Vertex>> edges_;
};

namespace detail {

inline std::vector<std::vector<Vertex>> components_of(std::size_t n, const std::vector<std::pair<Vertex, Vertex>>& edges) {
  std::vector<Vertex> parent(n);
  for (Vertex v = 0; v < n; ++v) parent[v] = v;
  auto find = [&](Vertex x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (auto [u, v] : edges) {
    Vertex a = find(u), b = find(v);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::vector<Vertex>> by_root(n);
  for (Vertex v = 0; v < n; ++v) by_root[find(v)].push_back(v);
  std::vector<std::vector<Vertex>> out;
  for (auto& c : by_root)
    if (!c.empty()) out.push_back(std::move(c));
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    return x.size() != y.size() ? x.size() < y.size() : x.front() < y.front();
  });
  return out;
}

}  // namespace detail

/// Connected components sorted by (size, least vertex). Bipartite vertices are
/// numbered rows first, then columns.
inline std::vector<std::vector<Vertex>> connected_components(const Multigraph& g) {
  return detail::components_of(g.vertex_count(), g.edges());
}

inline std::vector<std::vector<Vertex>> connected_components(const BipartiteMultigraph& g) {
  return connected_components(Multigraph::from_bipartite(g));
}

namespace detail {

using AdjMatrix = std::vector<std::vector<std::uint32_t>>;

// Ranks signatures so that new colours respect the old colour order.
template <typename Sig>
std::vector<std::uint32_t> rank_colours(const std::vector<Sig>& sig, std::size_t& distinct) {
  std::vector<Sig> uniq = sig;
  std::sort(uniq.begin(), uniq.end());
  uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
  distinct = uniq.size();
  std::vector<std::uint32_t> out(sig.size());
  for (std::size_t v = 0; v < sig.size(); ++v)
    out[v] = static_cast<std::uint32_t>(std::lower_bound(uniq.begin(), uniq.end(), sig[v]) - uniq.begin());
  return out;
}

// Colour refinement to the coarsest equitable partition finer than `colour`.
inline std::vector<std::uint32_t> refine(const AdjMatrix& adj, std::vector<std::uint32_t> colour) {
  const std::size_t n = adj.size();
  std::size_t distinct = 0;
  {
    std::vector<std::uint32_t> c = colour;
    rank_colours(c, distinct);
  }
  for (;;) {
    std::vector<std::vector<std::uint32_t>> sig(n);
    for (std::size_t v = 0; v < n; ++v) {
      std::vector<std::pair<std::uint32_t, std::uint32_t>> nb;
      for (std::size_t u = 0; u < n; ++u)
        if (u != v && adj[v][u] != 0) nb.emplace_back(colour[u], adj[v][u]);
      std::sort(nb.begin(), nb.end());
      sig[v].push_back(colour[v]);
      for (auto [c, m] : nb) {
        sig[v].push_back(c);
        sig[v].push_back(m);
      }
    }
    std::size_t now = 0;
    auto next = rank_colours(sig, now);
    colour = std::move(next);
    if (now == distinct) return colour;
    distinct = now;
  }
}

// Upper-triangular edge counts (diagonal = loops) in the order given by `label`.
inline std::vector<std::uint32_t> encode(const AdjMatrix& adj, const std::vector<std::uint32_t>& label) {
  const std::size_t n = adj.size();
  std::vector<Vertex> at(n);
  for (std::size_t v = 0; v < n; ++v) at[label[v]] = static_cast<Vertex>(v);
  std::vector<std::uint32_t> code;
  code.reserve(n * (n + 1) / 2);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x; y < n; ++y) code.push_back(adj[at[x]][at[y]]);
  return code;
}

// Individualisation-refinement search over one connected component; keeps the
// minimal leaf code and its labelling.
inline void ir_search(const AdjMatrix& adj, std::vector<std::uint32_t> colour, std::vector<std::uint32_t>& best_code,
                      std::vector<std::uint32_t>& best_label, bool& have_best, std::size_t& nodes, const Limits& limits) {
  limits.check("graph canonical search nodes", ++nodes, limits.search_node_budget);
  colour = refine(adj, std::move(colour));
  const std::size_t n = adj.size();

  std::vector<std::size_t> cell_size(n, 0);
  for (auto c : colour) ++cell_size[c];
  std::size_t target = n;
  for (std::size_t c = 0; c < n; ++c)
    if (cell_size[c] > 1) {
      target = c;
      break;
    }

  if (target == n) {
    auto code = encode(adj, colour);
    if (!have_best || code < best_code) {
      best_code = std::move(code);
      best_label = colour;
      have_best = true;
    }
    return;
  }
  // Twins (same loops, same edges to every other vertex) are exchanged by an
  // automorphism fixing the current colouring, so one branch covers them all.
  auto twins = [&](std::size_t v, std::size_t w) {
    if (adj[v][v] != adj[w][w]) return false;
    for (std::size_t x = 0; x < n; ++x)
      if (x != v && x != w && adj[v][x] != adj[w][x]) return false;
    return true;
  };
  std::vector<std::size_t> tried;
  for (std::size_t v = 0; v < n; ++v) {
    if (colour[v] != target) continue;
    if (std::any_of(tried.begin(), tried.end(), [&](std::size_t w) { return twins(v, w); })) continue;
    tried.push_back(v);
    std::vector<std::uint32_t> split(n);
    for (std::size_t u = 0; u < n; ++u) split[u] = 2 * colour[u] + ((colour[u] == target && u != v) ? 1 : 0);
    std::size_t distinct = 0;
    ir_search(adj, rank_colours(split, distinct), best_code, best_label, have_best, nodes, limits);
  }
}

}  // namespace detail

/// Canonical relabelling: components are canonicalised separately (minimal
/// leaf of an individualisation-refinement search seeded by loop count and
/// valency) and laid out in sorted (size, code) order. Two multigraphs are
/// isomorphic iff their canonical forms are equal.
inline Multigraph canonical_form(const Multigraph& g, const Limits& limits = {}) {
  const auto adj = g.adjacency();
  struct Part {
    std::size_t size;
    std::vector<std::uint32_t> code;
    std::vector<Vertex> order;  // global vertices in canonical order
    auto operator<=>(const Part& o) const {
      if (auto c = size <=> o.size; c != 0) return c;
      return code <=> o.code;
    }
  };
  std::vector<Part> parts;
  std::size_t nodes = 0;
  for (const auto& comp : connected_components(g)) {
    const std::size_t s = comp.size();
    detail::AdjMatrix local(s, std::vector<std::uint32_t>(s));
    for (std::size_t x = 0; x < s; ++x)
      for (std::size_t y = 0; y < s; ++y) local[x][y] = adj[comp[x]][comp[y]];
    std::vector<std::pair<std::uint32_t, std::size_t>> seed(s);
    for (std::size_t x = 0; x < s; ++x) {
      std::size_t val = 0;
      for (std::size_t y = 0; y < s; ++y) val += (x == y ? 2 : 1) * local[x][y];
      seed[x] = {local[x][x], val};
    }
    std::size_t distinct = 0;
    std::vector<std::uint32_t> code, label;
    bool have = false;
    detail::ir_search(local, detail::rank_colours(seed, distinct), code, label, have, nodes, limits);
    std::vector<Vertex> order(s);
    for (std::size_t x = 0; x < s; ++x) order[label[x]] = comp[x];
    parts.push_back({s, std::move(code), std::move(order)});
  }
  std::sort(parts.begin(), parts.end());

  std::vector<Vertex> relabel(g.vertex_count());
  Vertex next = 0;
  for (const auto& p : parts)
    for (Vertex v : p.order) relabel[v] = next++;
  std::vector<std::pair<Vertex, Vertex>> edges;
  edges.reserve(g.edge_count());
  for (auto [u, v] : g.edges()) edges.emplace_back(relabel[u], relabel[v]);
  return Multigraph(g.vertex_count(), std::move(edges));
}

/// Graph isomorphism (loops to loops, multiplicities preserved) by canonical
/// form equality.
inline bool are_isomorphic(const Multigraph& g, const Multigraph& h, const Limits& limits = {}) {
  limits.check("graph vertices", g.vertex_count() + h.vertex_count(), limits.max_graph_vertices);
  if (g.vertex_count() != h.vertex_count() || g.edge_count() != h.edge_count()) return false;
  std::vector<std::size_t> dg, dh;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    dg.push_back(g.valency(v));
    dh.push_back(h.valency(v));
  }
  std::sort(dg.begin(), dg.end());
  std::sort(dh.begin(), dh.end());
  if (dg != dh) return false;
  return canonical_form(g, limits) == canonical_form(h, limits);
}

inline bool are_isomorphic(const BipartiteMultigraph& g, const BipartiteMultigraph& h, const Limits& limits = {}) {
  return are_isomorphic(Multigraph::from_bipartite(g), Multigraph::from_bipartite(h), limits);
}

/// Homeomorphism-type fingerprint of a graph's geometric realisation: the
/// number of circle components plus the canonical smoothed remainder.
struct HomeoType {
  std::size_t circle_count = 0;
  Multigraph core;

  friend bool operator==(const HomeoType&, const HomeoType&) = default;
  friend auto operator<=>(const HomeoType&, const HomeoType&) = default;
};

/// Picks the smallest eligible vertex.
struct SmallestFirst {
  std::size_t operator()(const std::vector<Vertex>&) const { return 0; }
};

struct IgnoreSteps {
  void operator()(std::size_t, std::size_t) const {}
};

/// Suppresses valency-2 vertices. Components whose vertices all have valency 2
/// are counted as circles and dropped. Then, while some vertex has valency 2
/// and no loop, one is chosen by `pick` (an index into the eligible list,
/// sorted ascending) and replaced by a single edge joining its two neighbours
/// (a loop if both are the same vertex). `on_step(vertices, edges)` is called
/// after every suppression.
template <typename Picker = SmallestFirst, typename StepObserver = IgnoreSteps>
HomeoType smooth(const Multigraph& g, Picker&& pick = {}, StepObserver&& on_step = {}) {
  const std::size_t n = g.vertex_count();
  auto adj = g.adjacency();
  std::vector<bool> alive(n, true);
  auto valency = [&](std::size_t v) {
    std::size_t d = 2 * adj[v][v];
    for (std::size_t u = 0; u < n; ++u)
      if (u != v && alive[u]) d += adj[v][u];
    return d;
  };

  HomeoType out;
  for (const auto& comp : connected_components(g)) {
    bool all_two = true;
    for (Vertex v : comp) all_two = all_two && valency(v) == 2;
    if (!all_two) continue;
    ++out.circle_count;
    for (Vertex v : comp) alive[v] = false;
  }

  std::size_t vertices = 0, edges = 0;
  for (std::size_t v = 0; v < n; ++v) {
    if (!alive[v]) continue;
    ++vertices;
    for (std::size_t u = v; u < n; ++u)
      if (alive[u]) edges += adj[v][u];
  }

  for (;;) {
    std::vector<Vertex> eligible;
    for (std::size_t v = 0; v < n; ++v)
      if (alive[v] && adj[v][v] == 0 && valency(v) == 2) eligible.push_back(static_cast<Vertex>(v));
    if (eligible.empty()) break;
    const Vertex v = eligible[pick(static_cast<const std::vector<Vertex>&>(eligible))];
    std::vector<std::size_t> ends;
    for (std::size_t u = 0; u < n; ++u)
      if (u != v && alive[u])
        for (std::uint32_t t = 0; t < adj[v][u]; ++t) ends.push_back(u);
    for (std::size_t u : ends) {
      adj[v][u] = 0;
      adj[u][v] = 0;
    }
    alive[v] = false;
    if (ends[0] == ends[1]) {
      ++adj[ends[0]][ends[0]];
    } else {
      ++adj[ends[0]][ends[1]];
      ++adj[ends[1]][ends[0]];
    }
    --vertices;
    --edges;
    on_step(vertices, edges);
  }

  std::vector<Vertex> index(n, 0);
  Vertex next = 0;
  for (std::size_t v = 0; v < n; ++v)
    if (alive[v]) index[v] = next++;
  std::vector<std::pair<Vertex, Vertex>> core_edges;
  for (std::size_t v = 0; v < n; ++v) {
    if (!alive[v]) continue;
    for (std::size_t u = v; u < n; ++u)
      if (alive[u])
        for (std::uint32_t t = 0; t < adj[v][u]; ++t) core_edges.emplace_back(index[v], index[u]);
  }
  Limits unlimited;
  unlimited.force = true;
  out.core = canonical_form(Multigraph(next, std::move(core_edges)), unlimited);
  return out;
}

inline HomeoType smooth(const BipartiteMultigraph& g) { return smooth(Multigraph::from_bipartite(g)); }

inline HomeoType homeo_type(const NatMatrix& a) { return smooth(graph_from_matrix(a)); }

/// DOT text; row vertices r1..rR, column vertices c1..cC, one line per edge.
inline std::string to_dot(const BipartiteMultigraph& g) {
  std::ostringstream os;
  os << "graph G {\n";
  for (std::size_t i = 0; i < g.row_count(); ++i) os << "  r" << i + 1 << ";\n";
  for (std::size_t j = 0; j < g.col_count(); ++j) os << "  c" << j + 1 << ";\n";
  const auto& a = g.multiplicity();
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (Entry t = 0; t < a(i, j); ++t) os << "  r" << i + 1 << " -- c" << j + 1 << ";\n";
  os << "}\n";
  return os.str();
}

/// DOT text; vertices v1..vN.
inline std::string to_dot(const Multigraph& g) {
  std::ostringstream os;
  os << "graph G {\n";
  for (std::size_t v = 0; v < g.vertex_count(); ++v) os << "  v" << v + 1 << ";\n";
  for (auto [u, v] : g.edges()) os << "  v" << u + 1 << " -- v" << v + 1 << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace cartan
