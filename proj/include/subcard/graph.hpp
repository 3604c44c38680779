//
// subcard - subgraph cardinality estimation
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "subcard/types.hpp"

namespace subcard {

struct LabelCount {
  Label label;
  std::uint32_t count;
};

/// Immutable vertex-labeled undirected simple graph.
///
/// Adjacency is stored in CSR form with strictly increasing neighbor lists.
/// Every undirected edge has a dense id; `edge(e)` returns its endpoints with
/// the smaller id first.
class LabeledGraph {
 public:
  LabeledGraph() = default;

  /// Builds a graph from per-vertex labels and an edge list. Duplicate edges
  /// and both orientations collapse into one edge. Throws graph_error on
  /// self-loops or out-of-range endpoints.
  static LabeledGraph from_edges(std::vector<Label> labels,
                                 std::span<const std::pair<VertexId, VertexId>> edges);

  std::size_t vertex_count() const noexcept { return labels_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  Label label(VertexId v) const { return labels_[v]; }
  std::span<const Label> labels() const noexcept { return labels_; }

  /// One past the largest label in use (0 for the empty graph).
  std::size_t label_bound() const noexcept { return by_label_offsets_.empty() ? 0 : by_label_offsets_.size() - 1; }

  std::span<const VertexId> neighbors(VertexId v) const {
    return {neighbors_.data() + offsets_[v], neighbors_.data() + offsets_[v + 1]};
  }
  std::size_t degree(VertexId v) const { return offsets_[v + 1] - offsets_[v]; }

  /// Edge ids parallel to `neighbors(v)`.
  std::span<const EdgeId> incident_edges(VertexId v) const {
    return {slot_edges_.data() + offsets_[v], slot_edges_.data() + offsets_[v + 1]};
  }

  /// d_g(v, l): neighbors of v carrying label l.
  std::size_t label_degree(VertexId v, Label l) const {
    auto row = label_degrees(v);
    auto it = std::lower_bound(row.begin(), row.end(), l,
                               [](const LabelCount &lc, Label x) { return lc.label < x; });
    return (it != row.end() && it->label == l) ? it->count : 0;
  }

  /// Nonzero label degrees of v, sorted by label.
  std::span<const LabelCount> label_degrees(VertexId v) const {
    return {label_degrees_.data() + label_offsets_[v], label_degrees_.data() + label_offsets_[v + 1]};
  }

  /// Sorted vertices carrying label l.
  std::span<const VertexId> vertices_with_label(Label l) const {
    if (l + 1 >= by_label_offsets_.size()) return {};
    return {by_label_.data() + by_label_offsets_[l], by_label_.data() + by_label_offsets_[l + 1]};
  }

  bool has_edge(VertexId a, VertexId b) const { return edge_id(a, b).has_value(); }

  std::optional<EdgeId> edge_id(VertexId a, VertexId b) const {
    if (a >= vertex_count() || b >= vertex_count()) return std::nullopt;
    if (degree(a) > degree(b)) std::swap(a, b);
    auto nbrs = neighbors(a);
    auto it = std::lower_bound(nbrs.begin(), nbrs.end(), b);
    if (it == nbrs.end() || *it != b) return std::nullopt;
    return slot_edges_[offsets_[a] + static_cast<std::size_t>(it - nbrs.begin())];
  }

  std::pair<VertexId, VertexId> edge(EdgeId e) const { return edges_[e]; }
  std::span<const std::pair<VertexId, VertexId>> edges() const noexcept { return edges_; }

  std::size_t max_degree() const noexcept { return max_degree_; }
  std::size_t degeneracy() const noexcept { return degeneracy_; }

  bool is_connected() const;

 private:
  std::vector<Label> labels_;
  std::vector<std::size_t> offsets_{0};
  std::vector<VertexId> neighbors_;
  std::vector<EdgeId> slot_edges_;
  std::vector<std::pair<VertexId, VertexId>> edges_;
  std::vector<std::size_t> label_offsets_{0};
  std::vector<LabelCount> label_degrees_;
  std::vector<std::size_t> by_label_offsets_;
  std::vector<VertexId> by_label_;
  std::size_t max_degree_ = 0;
  std::size_t degeneracy_ = 0;
};

/// Smallest d such that every subgraph has a vertex of degree <= d,
/// computed by repeatedly peeling a minimum-degree vertex.
inline std::size_t compute_degeneracy(const LabeledGraph &g) {
  const std::size_t n = g.vertex_count();
  if (n == 0) return 0;
  std::vector<std::size_t> deg(n);
  std::size_t max_deg = 0;
  for (VertexId v = 0; v < n; ++v) {
    deg[v] = g.degree(v);
    max_deg = std::max(max_deg, deg[v]);
  }
  // Bucket queue keyed by current degree (Matula-Beck).
  std::vector<std::size_t> bin(max_deg + 2, 0);
  for (auto d : deg) ++bin[d];
  std::size_t start = 0;
  for (auto &b : bin) {
    auto c = b;
    b = start;
    start += c;
  }
  std::vector<VertexId> order(n);
  std::vector<std::size_t> pos(n);
  for (VertexId v = 0; v < n; ++v) {
    pos[v] = bin[deg[v]]++;
    order[pos[v]] = v;
  }
  for (std::size_t d = bin.size() - 1; d > 0; --d) bin[d] = bin[d - 1];
  bin[0] = 0;

  std::size_t result = 0;
  for (std::size_t i = 0; i < n; ++i) {
    VertexId v = order[i];
    result = std::max(result, deg[v]);
    for (VertexId w : g.neighbors(v)) {
      if (deg[w] > deg[v]) {
        std::size_t dw = deg[w];
        std::size_t pw = pos[w];
        std::size_t pu = bin[dw];
        VertexId u = order[pu];
        if (u != w) {
          pos[w] = pu;
          order[pu] = w;
          pos[u] = pw;
          order[pw] = u;
        }
        ++bin[dw];
        --deg[w];
      }
    }
  }
  return result;
}

inline LabeledGraph LabeledGraph::from_edges(std::vector<Label> labels,
                                             std::span<const std::pair<VertexId, VertexId>> edges) {
  LabeledGraph g;
  const std::size_t n = labels.size();
  std::vector<std::pair<VertexId, VertexId>> norm;
  norm.reserve(edges.size());
  for (auto [a, b] : edges) {
    if (a >= n || b >= n) {
      throw graph_error("edge (" + std::to_string(a) + ", " + std::to_string(b) +
                        ") references a vertex outside 0.." + std::to_string(n == 0 ? 0 : n - 1));
    }
    if (a == b) throw graph_error("self-loop on vertex " + std::to_string(a));
    norm.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(norm.begin(), norm.end());
  norm.erase(std::unique(norm.begin(), norm.end()), norm.end());

  g.labels_ = std::move(labels);
  g.edges_ = norm;

  std::vector<std::size_t> deg(n, 0);
  for (auto [a, b] : norm) {
    ++deg[a];
    ++deg[b];
  }
  g.offsets_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) g.offsets_[v + 1] = g.offsets_[v] + deg[v];
  g.neighbors_.resize(g.offsets_[n]);
  g.slot_edges_.resize(g.offsets_[n]);
  std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
  for (EdgeId e = 0; e < norm.size(); ++e) {
    auto [a, b] = norm[e];
    g.neighbors_[fill[a]] = b;
    g.slot_edges_[fill[a]++] = e;
    g.neighbors_[fill[b]] = a;
    g.slot_edges_[fill[b]++] = e;
  }
  std::vector<std::pair<VertexId, EdgeId>> tmp;
  for (std::size_t v = 0; v < n; ++v) {
    tmp.clear();
    for (std::size_t i = g.offsets_[v]; i < g.offsets_[v + 1]; ++i) tmp.emplace_back(g.neighbors_[i], g.slot_edges_[i]);
    std::sort(tmp.begin(), tmp.end());
    for (std::size_t i = 0; i < tmp.size(); ++i) {
      g.neighbors_[g.offsets_[v] + i] = tmp[i].first;
      g.slot_edges_[g.offsets_[v] + i] = tmp[i].second;
    }
    g.max_degree_ = std::max(g.max_degree_, deg[v]);
  }

  std::vector<Label> nl;
  for (std::size_t v = 0; v < n; ++v) {
    nl.clear();
    for (VertexId w : g.neighbors(static_cast<VertexId>(v))) nl.push_back(g.labels_[w]);
    std::sort(nl.begin(), nl.end());
    for (std::size_t i = 0; i < nl.size();) {
      std::size_t j = i;
      while (j < nl.size() && nl[j] == nl[i]) ++j;
      g.label_degrees_.push_back({nl[i], static_cast<std::uint32_t>(j - i)});
      i = j;
    }
    g.label_offsets_.push_back(g.label_degrees_.size());
  }

  Label max_label = 0;
  for (Label l : g.labels_) max_label = std::max(max_label, l);
  if (n > 0) {
    g.by_label_offsets_.assign(static_cast<std::size_t>(max_label) + 2, 0);
    for (Label l : g.labels_) ++g.by_label_offsets_[l + 1];
    for (std::size_t i = 1; i < g.by_label_offsets_.size(); ++i) g.by_label_offsets_[i] += g.by_label_offsets_[i - 1];
    g.by_label_.resize(n);
    std::vector<std::size_t> pos(g.by_label_offsets_.begin(), g.by_label_offsets_.end() - 1);
    for (VertexId v = 0; v < n; ++v) g.by_label_[pos[g.labels_[v]]++] = v;
  }

  g.degeneracy_ = compute_degeneracy(g);
  return g;
}

inline bool LabeledGraph::is_connected() const {
  const std::size_t n = vertex_count();
  if (n <= 1) return true;
  std::vector<char> seen(n, 0);
  std::vector<VertexId> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    for (VertexId w : neighbors(v)) {
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  return reached == n;
}

namespace detail {

inline bool parse_uint(const std::string &tok, std::uint64_t &out) {
  if (tok.empty() || tok.size() > 19) return false;
  std::uint64_t x = 0;
  for (char c : tok) {
    if (c < '0' || c > '9') return false;
    x = x * 10 + static_cast<std::uint64_t>(c - '0');
  }
  out = x;
  return true;
}

}  // namespace detail

/// Reads the line-oriented `t/v/e` format:
///
///     t <num_vertices> <num_edges>
///     v <id> <label> [degree]
///     e <src> <dst>
///
/// Blank lines and lines starting with '#' are skipped.
inline LabeledGraph load_graph(std::istream &in) {
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  std::uint64_t n = 0;
  std::vector<Label> labels;
  std::vector<char> defined;
  std::vector<std::pair<VertexId, VertexId>> edges;

  auto read_id = [&](const std::string &tok, const char *what) -> VertexId {
    std::uint64_t x = 0;
    if (!detail::parse_uint(tok, x)) throw parse_error(lineno, std::string("malformed ") + what + " '" + tok + "'");
    if (x >= n) throw parse_error(lineno, std::string(what) + " " + tok + " out of range");
    return static_cast<VertexId>(x);
  };

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ss(line);
    std::vector<std::string> tok;
    for (std::string t; ss >> t;) tok.push_back(t);
    if (tok.empty() || tok[0][0] == '#') continue;

    const std::string &kind = tok[0];
    if (kind == "t") {
      if (have_header) throw parse_error(lineno, "duplicate header");
      std::uint64_t m = 0;
      if (tok.size() != 3 || !detail::parse_uint(tok[1], n) || !detail::parse_uint(tok[2], m)) {
        throw parse_error(lineno, "expected 't <num_vertices> <num_edges>'");
      }
      if (n >= kNoVertex) throw parse_error(lineno, "too many vertices");
      have_header = true;
      labels.assign(n, 0);
      defined.assign(n, 0);
      edges.reserve(m);
    } else if (kind == "v") {
      if (!have_header) throw parse_error(lineno, "vertex line before header");
      if (tok.size() != 3 && tok.size() != 4) throw parse_error(lineno, "expected 'v <id> <label> [degree]'");
      VertexId id = read_id(tok[1], "vertex id");
      std::uint64_t l = 0;
      if (!detail::parse_uint(tok[2], l) || l >= kNoVertex) throw parse_error(lineno, "malformed label '" + tok[2] + "'");
      if (defined[id]) throw parse_error(lineno, "vertex " + tok[1] + " defined twice");
      defined[id] = 1;
      labels[id] = static_cast<Label>(l);
    } else if (kind == "e") {
      if (!have_header) throw parse_error(lineno, "edge line before header");
      if (tok.size() != 3) throw parse_error(lineno, "expected 'e <src> <dst>'");
      VertexId a = read_id(tok[1], "vertex id");
      VertexId b = read_id(tok[2], "vertex id");
      if (a == b) throw parse_error(lineno, "self-loop on vertex " + tok[1]);
      edges.emplace_back(a, b);
    } else {
      throw parse_error(lineno, "unknown record type '" + kind + "'");
    }
  }
  if (!have_header) throw parse_error(lineno, "missing 't' header");
  for (std::size_t v = 0; v < n; ++v) {
    if (!defined[v]) throw parse_error(lineno, "vertex " + std::to_string(v) + " has no 'v' line");
  }
  return LabeledGraph::from_edges(std::move(labels), edges);
}

inline LabeledGraph load_graph_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw graph_error("cannot open " + path);
  return load_graph(in);
}

inline void write_graph(std::ostream &out, const LabeledGraph &g) {
  out << "t " << g.vertex_count() << ' ' << g.edge_count() << '\n';
  for (VertexId v = 0; v < g.vertex_count(); ++v) out << "v " << v << ' ' << g.label(v) << ' ' << g.degree(v) << '\n';
  for (auto [a, b] : g.edges()) out << "e " << a << ' ' << b << '\n';
}

}  // namespace subcard
