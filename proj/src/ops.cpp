#include "evograph/ops.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "evograph/error.hpp"

namespace evograph {

EvolvingGraph node_creation(const EvolvingGraph& g, int target_resolution_digits) {
  if (!valid_resolution(target_resolution_digits))
    throw std::invalid_argument("resolution_digits must be 4, 3, or 2");
  if (target_resolution_digits > g.meta().resolution_digits)
    throw std::invalid_argument("node_creation cannot refine resolution (target " +
                                std::to_string(target_resolution_digits) + " digits, graph has " +
                                std::to_string(g.meta().resolution_digits) + ")");

  struct Group {
    GeoCell cell;
    std::vector<const VertexRecord*> members;
  };
  std::map<std::string, Group> groups;  // key order is the Skolem order
  for (const VertexRecord& v : g.vertices()) {
    const GeoCell coarse = quantize_cell(v.cell, target_resolution_digits);
    Group& grp = groups[grouping_key(coarse)];
    if (grp.members.empty()) grp.cell = coarse;
    grp.members.push_back(&v);
  }

  std::vector<VertexRecord> verts;
  verts.reserve(groups.size());
  std::unordered_map<VertexId, VertexId> remap;
  remap.reserve(g.vertices().size());
  VertexId next = 0;
  for (auto& [key, grp] : groups) {
    std::vector<Interval> ivs;
    for (const VertexRecord* m : grp.members) {
      ivs.insert(ivs.end(), m->validity.intervals().begin(), m->validity.intervals().end());
      remap.emplace(m->vid, next);
    }
    verts.push_back({next, grp.cell, IntervalSet::from_intervals(std::move(ivs))});
    ++next;
  }

  std::vector<EdgeRecord> edges;
  edges.reserve(g.meta().edge_count);
  g.for_each_edge([&](const EdgeRecord& e) {
    const auto s = remap.find(e.src);
    const auto d = remap.find(e.dst);
    if (s == remap.end() || d == remap.end())
      throw DataError("node_creation: edge " + std::to_string(e.eid) +
                      " references a missing vertex");
    EdgeRecord out = e;
    out.src = s->second;
    out.dst = d->second;
    edges.push_back(out);
  });

  return EvolvingGraph::build(std::move(verts), std::move(edges), target_resolution_digits,
                              g.meta().window_applied, g.meta().partition_count,
                              g.meta().time_span);
}

EvolvingGraph temporal_zoom(const EvolvingGraph& g, const WindowSpec& w,
                            Quantifier vertex_quantifier, Quantifier edge_quantifier,
                            ZoomStats* stats, int threads) {
  const auto& vs = g.vertices();

  // Admitted windows per vertex, coalesced. A vertex is admitted for window W
  // exactly when its output validity contains W.start, because output
  // validity is a union of whole tiling windows.
  std::vector<IntervalSet> admitted(vs.size());
  const std::size_t block = 2048;
  const std::size_t vtasks = (vs.size() + block - 1) / block;
  parallel_tasks(vtasks, threads, [&](std::size_t ti) {
    const std::size_t lo = ti * block;
    const std::size_t hi = std::min(vs.size(), lo + block);
    std::vector<Interval> acc;
    for (std::size_t i = lo; i < hi; ++i) {
      acc.clear();
      for (const Interval& win : windows_overlapping(vs[i].validity, w)) {
        if (!evaluate_quantifier(vertex_quantifier, vs[i].validity, win)) continue;
        if (!acc.empty() && acc.back().end == win.start)
          acc.back().end = win.end;
        else
          acc.push_back(win);
      }
      admitted[i] = IntervalSet::from_intervals(acc);
    }
  });

  ZoomStats total;
  std::vector<VertexRecord> verts;
  verts.reserve(vs.size());
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (admitted[i].empty())
      ++total.vertices_dropped;
    else
      verts.push_back({vs[i].vid, vs[i].cell, admitted[i]});
  }

  const auto& parts = g.partitions();
  std::vector<std::vector<EdgeRecord>> kept(parts.size());
  std::vector<ZoomStats> local(parts.size());
  parallel_tasks(parts.size(), threads, [&](std::size_t pi) {
    for (const EdgeRecord& e : parts[pi]) {
      const std::size_t si = g.vertex_index(e.src);
      const std::size_t di = g.vertex_index(e.dst);
      if (si == EvolvingGraph::npos || di == EvolvingGraph::npos)
        throw DataError("temporal_zoom: edge " + std::to_string(e.eid) +
                        " references a missing vertex");
      TimeInstant lo = 0, hi = 0;
      bool any = false;
      for (const Interval& win : windows_overlapping(e.validity, w)) {
        if (!evaluate_quantifier(edge_quantifier, e.validity, win)) continue;
        if (!admitted[si].contains(win.start) || !admitted[di].contains(win.start)) {
          ++local[pi].edge_window_endpoint_rejections;
          continue;
        }
        if (!any) {
          lo = win.start;
          hi = win.end;
          any = true;
        } else if (win.start == hi) {
          hi = win.end;
        } else {
          // Only reachable when the input violates edge-within-endpoint
          // coverage; an EdgeRecord cannot carry a gappy validity.
          throw DataError("temporal_zoom: edge " + std::to_string(e.eid) +
                          " was admitted for non-contiguous windows");
        }
      }
      if (!any) {
        ++local[pi].edges_dropped;
        continue;
      }
      EdgeRecord out = e;
      out.validity = {lo, hi};
      kept[pi].push_back(out);
    }
  });

  std::vector<EdgeRecord> edges;
  for (auto& part : kept) {
    total.edge_window_endpoint_rejections +=
        local[&part - kept.data()].edge_window_endpoint_rejections;
    total.edges_dropped += local[&part - kept.data()].edges_dropped;
    edges.insert(edges.end(), part.begin(), part.end());
  }
  if (stats) *stats = total;

  return EvolvingGraph::build(std::move(verts), std::move(edges), g.meta().resolution_digits, w,
                              g.meta().partition_count, g.meta().time_span);
}

std::vector<DegreeSeries> aggregate_messages_degree(const EvolvingGraph& g, Direction direction,
                                                    const WindowSpec& w, int threads) {
  const EdgeEnd counted = direction == Direction::Out ? EdgeEnd::Source : EdgeEnd::Destination;
  return aggregate_messages<std::int64_t>(
      g, w,
      [counted](const EdgeRecord&, EdgeEnd end, const Interval&) -> std::optional<std::int64_t> {
        if (end != counted) return std::nullopt;
        return 1;
      },
      [](std::int64_t a, std::int64_t b) { return a + b; }, threads);
}

}  // namespace evograph
