//
// subcard - subgraph cardinality estimation
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "subcard/graph.hpp"

namespace subcard {

inline constexpr std::uint64_t kDefaultCycleCap = 10'000'000'000ULL;

namespace detail {

template <class F>
void for_each_common(std::span<const VertexId> a, std::span<const VertexId> b, F &&f) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      f(*i);
      ++i;
      ++j;
    }
  }
}

}  // namespace detail

/// Per-edge triangle apexes and 4-cycle opposite edges of one graph.
///
/// Lists are keyed by edge id. For the key edge (a, b) with a < b, a 4-cycle
/// a-b-c-d-a is stored as the pair (c, d): c is adjacent to b and d to a.
/// Every triangle appears in the lists of its three edges, every 4-cycle in
/// the lists of its four edges.
///
/// A kind of cycle whose total exceeds its cap is not stored; the matching
/// `*_enabled()` flag is then false while the total still reports the count.
class CycleIndex {
 public:
  using OppositeEdge = std::pair<VertexId, VertexId>;

  CycleIndex() = default;

  static CycleIndex build(const LabeledGraph &g, std::uint64_t triangle_cap = kDefaultCycleCap,
                          std::uint64_t four_cycle_cap = kDefaultCycleCap);

  bool triangles_enabled() const noexcept { return triangles_enabled_; }
  bool four_cycles_enabled() const noexcept { return four_cycles_enabled_; }
  std::uint64_t total_triangles() const noexcept { return total_triangles_; }
  std::uint64_t total_four_cycles() const noexcept { return total_four_cycles_; }

  /// L3(e): vertices closing a triangle with edge e, sorted.
  std::span<const VertexId> triangle_apexes(EdgeId e) const {
    if (!triangles_enabled_) return {};
    return triangles_[e];
  }

  /// L4(e) relative to the normalized key (lo, hi) of e.
  std::span<const OppositeEdge> four_cycle_edges(EdgeId e) const {
    if (!four_cycles_enabled_) return {};
    return four_cycles_[e];
  }

  /// Calls f(x, y) for every 4-cycle a-b-x-y-a through edge (a, b), in
  /// whichever orientation (a, b) is given.
  template <class F>
  void for_each_four_cycle(const LabeledGraph &g, VertexId a, VertexId b, F &&f) const {
    auto e = g.edge_id(a, b);
    if (!e) return;
    const bool flipped = a > b;
    for (auto [c, d] : four_cycle_edges(*e)) {
      if (flipped) {
        f(d, c);
      } else {
        f(c, d);
      }
    }
  }

 private:
  std::vector<std::vector<VertexId>> triangles_;
  std::vector<std::vector<OppositeEdge>> four_cycles_;
  bool triangles_enabled_ = false;
  bool four_cycles_enabled_ = false;
  std::uint64_t total_triangles_ = 0;
  std::uint64_t total_four_cycles_ = 0;
};

inline CycleIndex CycleIndex::build(const LabeledGraph &g, std::uint64_t triangle_cap,
                                    std::uint64_t four_cycle_cap) {
  CycleIndex idx;
  const std::size_t m = g.edge_count();

  std::uint64_t tri_slots = 0;
  for (auto [a, b] : g.edges()) {
    detail::for_each_common(g.neighbors(a), g.neighbors(b), [&](VertexId) { ++tri_slots; });
  }
  idx.total_triangles_ = tri_slots / 3;
  idx.triangles_enabled_ = idx.total_triangles_ <= triangle_cap;
  if (idx.triangles_enabled_) {
    idx.triangles_.resize(m);
    for (EdgeId e = 0; e < m; ++e) {
      auto [a, b] = g.edge(e);
      detail::for_each_common(g.neighbors(a), g.neighbors(b),
                              [&](VertexId c) { idx.triangles_[e].push_back(c); });
    }
  }

  // For key (a, b): c ranges over N(b) \ {a}, d over N(a) ∩ N(c) \ {b}.
  auto enumerate = [&](EdgeId e, auto &&emit) {
    auto [a, b] = g.edge(e);
    for (VertexId c : g.neighbors(b)) {
      if (c == a) continue;
      detail::for_each_common(g.neighbors(a), g.neighbors(c), [&](VertexId d) {
        if (d != b) emit(c, d);
      });
    }
  };
  std::uint64_t quad_slots = 0;
  for (EdgeId e = 0; e < m; ++e) enumerate(e, [&](VertexId, VertexId) { ++quad_slots; });
  idx.total_four_cycles_ = quad_slots / 4;
  idx.four_cycles_enabled_ = idx.total_four_cycles_ <= four_cycle_cap;
  if (idx.four_cycles_enabled_) {
    idx.four_cycles_.resize(m);
    for (EdgeId e = 0; e < m; ++e) {
      enumerate(e, [&](VertexId c, VertexId d) { idx.four_cycles_[e].emplace_back(c, d); });
    }
  }
  return idx;
}

}  // namespace subcard
