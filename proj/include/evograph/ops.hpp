#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "evograph/graph.hpp"
#include "evograph/parallel.hpp"

namespace evograph {

enum class Direction { In, Out };
enum class EdgeEnd { Source, Destination };

struct ZoomStats {
  // (edge, window) pairs where the edge passed its quantifier but an endpoint
  // was not admitted for the window; the edge is excluded from that window to
  // keep snapshots referentially intact.
  std::uint64_t edge_window_endpoint_rejections = 0;
  std::uint64_t edges_dropped = 0;
  std::uint64_t vertices_dropped = 0;
};

// Structural zoom: groups vertices by their cell at a strictly coarser (or
// equal) resolution. One output vertex per nonempty group, validity = the
// temporal union over members, vids assigned by ascending grouping key. Every
// edge persists unchanged except for re-pointed endpoints; coarsening may
// create self-loops, which are kept.
EvolvingGraph node_creation(const EvolvingGraph& g, int target_resolution_digits);

// Temporal zoom: admits each vertex and edge per tiling window by quantifier,
// expanding validity to the union of admitted windows. Edges additionally
// need both endpoints admitted for the window. Entities admitted nowhere are
// dropped. All attributes, including duration_seconds, are unchanged.
EvolvingGraph temporal_zoom(const EvolvingGraph& g, const WindowSpec& w,
                            Quantifier vertex_quantifier, Quantifier edge_quantifier,
                            ZoomStats* stats = nullptr, int threads = 1);

template <class V>
struct VertexSeries {
  VertexId vid = 0;
  std::vector<std::pair<Interval, V>> entries;  // strictly increasing windows

  friend bool operator==(const VertexSeries&, const VertexSeries&) = default;
};

using DegreeSeries = VertexSeries<std::int64_t>;

// General aggregate-messages. For every edge and every tiling window its
// validity intersects, msg(edge, end, window) may emit a value for the vertex
// at that end; values for one (vertex, window) combine through reduce, which
// must be commutative and associative so the result is independent of
// partitioning and scan order. Output is ordered by (vid, window start);
// vertices that received no message are absent.
template <class V, class MsgFn, class ReduceFn>
std::vector<VertexSeries<V>> aggregate_messages(const EvolvingGraph& g, const WindowSpec& w,
                                                MsgFn msg, ReduceFn reduce, int threads = 1) {
  using Key = std::pair<VertexId, TimeInstant>;
  const auto& parts = g.partitions();
  std::vector<std::map<Key, V>> local(parts.size());
  parallel_tasks(parts.size(), threads, [&](std::size_t pi) {
    auto& acc = local[pi];
    auto deliver = [&](VertexId vid, TimeInstant wstart, const V& value) {
      auto [it, fresh] = acc.try_emplace(Key{vid, wstart}, value);
      if (!fresh) it->second = reduce(it->second, value);
    };
    for (const EdgeRecord& e : parts[pi]) {
      for (const Interval& win : windows_overlapping(e.validity, w)) {
        if (auto v = msg(e, EdgeEnd::Source, win)) deliver(e.src, win.start, *v);
        if (auto v = msg(e, EdgeEnd::Destination, win)) deliver(e.dst, win.start, *v);
      }
    }
  });

  std::map<Key, V> total;
  for (auto& m : local) {
    for (auto& [k, v] : m) {
      auto [it, fresh] = total.try_emplace(k, v);
      if (!fresh) it->second = reduce(it->second, v);
    }
  }

  std::vector<VertexSeries<V>> out;
  for (const auto& [k, v] : total) {
    if (out.empty() || out.back().vid != k.first) out.push_back({k.first, {}});
    out.back().entries.emplace_back(w.window_at(k.second), v);
  }
  return out;
}

// Per-window in/out degree, parallel edges counted individually; an edge
// counts in every window its validity intersects. Zero-valued entries are
// omitted. Defined on top of the general aggregate_messages form.
std::vector<DegreeSeries> aggregate_messages_degree(const EvolvingGraph& g, Direction direction,
                                                    const WindowSpec& w, int threads = 1);

}  // namespace evograph
