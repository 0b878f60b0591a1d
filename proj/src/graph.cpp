#include "evograph/graph.hpp"

#include <algorithm>
#include <cinttypes>
#include <limits>

namespace evograph {

namespace {

bool edge_order(const EdgeRecord& a, const EdgeRecord& b) {
  if (a.src != b.src) return a.src < b.src;
  if (a.dst != b.dst) return a.dst < b.dst;
  if (a.validity.start != b.validity.start) return a.validity.start < b.validity.start;
  return a.eid < b.eid;
}

}  // namespace

EvolvingGraph EvolvingGraph::build(std::vector<VertexRecord> vertices,
                                   std::vector<EdgeRecord> edges, int resolution_digits,
                                   std::optional<WindowSpec> window_applied,
                                   std::size_t partition_count,
                                   std::optional<Interval> span_when_empty) {
  EvolvingGraph g;
  std::sort(vertices.begin(), vertices.end(),
            [](const VertexRecord& a, const VertexRecord& b) { return a.vid < b.vid; });
  g.vertices_ = std::move(vertices);
  g.max_vid_ = g.vertices_.empty() ? 0 : g.vertices_.back().vid;
  g.partitions_.resize(std::max<std::size_t>(partition_count, 1));

  for (EdgeRecord& e : edges) g.partitions_[g.partition_of(e.src)].push_back(std::move(e));
  for (auto& part : g.partitions_) std::sort(part.begin(), part.end(), edge_order);

  TimeInstant lo = std::numeric_limits<TimeInstant>::max();
  TimeInstant hi = std::numeric_limits<TimeInstant>::min();
  for (const VertexRecord& v : g.vertices_) {
    if (v.validity.empty()) continue;
    lo = std::min(lo, v.validity.hull().start);
    hi = std::max(hi, v.validity.hull().end);
  }
  std::uint64_t edge_count = 0;
  for (const auto& part : g.partitions_) {
    edge_count += part.size();
    for (const EdgeRecord& e : part) {
      lo = std::min(lo, e.validity.start);
      hi = std::max(hi, e.validity.end);
    }
  }
  g.meta_.resolution_digits = resolution_digits;
  g.meta_.window_applied = window_applied;
  g.meta_.vertex_count = g.vertices_.size();
  g.meta_.edge_count = edge_count;
  g.meta_.partition_count = g.partitions_.size();
  g.meta_.time_span = lo < hi ? Interval{lo, hi} : span_when_empty.value_or(Interval{0, 1});
  return g;
}

std::size_t EvolvingGraph::vertex_index(VertexId vid) const {
  auto it = std::lower_bound(vertices_.begin(), vertices_.end(), vid,
                             [](const VertexRecord& v, VertexId id) { return v.vid < id; });
  if (it == vertices_.end() || it->vid != vid) return npos;
  return static_cast<std::size_t>(it - vertices_.begin());
}

const VertexRecord* EvolvingGraph::find_vertex(VertexId vid) const {
  const std::size_t i = vertex_index(vid);
  return i == npos ? nullptr : &vertices_[i];
}

std::size_t EvolvingGraph::partition_of(VertexId src) const {
  if (partitions_.size() <= 1) return 0;
  if (src > max_vid_) return partitions_.size() - 1;
  return static_cast<std::size_t>(static_cast<unsigned __int128>(src) * partitions_.size() /
                                  (max_vid_ + 1));
}

StaticSnapshot snapshot(const EvolvingGraph& g, TimeInstant t) {
  StaticSnapshot s;
  s.at = t;
  for (const VertexRecord& v : g.vertices())
    if (v.validity.contains(t)) s.vertices.push_back(v.vid);
  g.for_each_edge([&](const EdgeRecord& e) {
    if (e.validity.contains(t)) s.edges.push_back(e);
  });
  return s;
}

std::vector<EdgeRow> edge_relation(const EvolvingGraph& g) {
  std::vector<EdgeRow> rows;
  rows.reserve(g.meta().edge_count);
  g.for_each_edge([&](const EdgeRecord& e) {
    rows.push_back({e.eid, e.src, e.dst, e.validity.start, e.validity.end, e.passengers,
                    e.fare_cents, e.duration_seconds});
  });
  return rows;
}

ValidationReport validate(const EvolvingGraph& g) {
  ValidationReport rep;
  auto flag = [&rep](std::string msg) { rep.violations.push_back(std::move(msg)); };

  const GraphMeta& meta = g.meta();
  if (!valid_resolution(meta.resolution_digits))
    flag("meta: invalid resolution_digits " + std::to_string(meta.resolution_digits));
  if (meta.partition_count != g.partitions().size())
    flag("meta: partition_count " + std::to_string(meta.partition_count) + " != actual " +
         std::to_string(g.partitions().size()));
  if (meta.vertex_count != g.vertices().size())
    flag("meta: vertex_count " + std::to_string(meta.vertex_count) + " != actual " +
         std::to_string(g.vertices().size()));

  const std::int64_t unit =
      valid_resolution(meta.resolution_digits) ? resolution_unit(meta.resolution_digits) : 1;
  const auto& vs = g.vertices();
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const VertexRecord& v = vs[i];
    const std::string tag = "vertex " + std::to_string(v.vid);
    if (i > 0 && vs[i - 1].vid >= v.vid) flag("vertex table not strictly sorted at index " + std::to_string(i));
    if (v.validity.empty()) flag(tag + ": empty validity");
    if (!v.validity.is_canonical()) flag(tag + ": validity not canonical");
    if (v.cell.resolution_digits != meta.resolution_digits)
      flag(tag + ": cell resolution differs from graph resolution");
    if (v.cell.lat_micro % unit != 0 || v.cell.lon_micro % unit != 0)
      flag(tag + ": cell not aligned to resolution unit");
    if (v.cell.lat_micro < -90 * kMicroPerDegree || v.cell.lat_micro > 90 * kMicroPerDegree ||
        v.cell.lon_micro < -180 * kMicroPerDegree || v.cell.lon_micro > 180 * kMicroPerDegree)
      flag(tag + ": cell outside geographic bounds");
  }

  std::vector<EdgeId> eids;
  eids.reserve(meta.edge_count);
  std::uint64_t edge_count = 0;
  for (std::size_t pi = 0; pi < g.partitions().size(); ++pi) {
    const auto& part = g.partitions()[pi];
    edge_count += part.size();
    for (std::size_t i = 0; i < part.size(); ++i) {
      const EdgeRecord& e = part[i];
      const std::string tag = "edge " + std::to_string(e.eid) + " (partition " +
                              std::to_string(pi) + ", row " + std::to_string(i) + ")";
      eids.push_back(e.eid);
      if (i > 0 && edge_order(e, part[i - 1]))
        flag("partition " + std::to_string(pi) + " not sorted at row " + std::to_string(i));
      if (g.partition_of(e.src) != pi) flag(tag + ": wrong partition for src");
      if (e.validity.start >= e.validity.end) flag(tag + ": empty validity");
      if (e.passengers < 0) flag(tag + ": negative passengers");
      if (e.duration_seconds < 1) flag(tag + ": non-positive duration");
      if (!meta.window_applied && e.duration_seconds != e.validity.length())
        flag(tag + ": duration does not match validity on an unzoomed graph");
      const VertexRecord* sv = g.find_vertex(e.src);
      const VertexRecord* dv = g.find_vertex(e.dst);
      if (!sv) flag(tag + ": src " + std::to_string(e.src) + " missing from vertex table");
      if (!dv) flag(tag + ": dst " + std::to_string(e.dst) + " missing from vertex table");
      if (sv && e.validity.start < e.validity.end &&
          sv->validity.covered_seconds(e.validity) != e.validity.length())
        flag(tag + ": alive outside src validity");
      if (dv && e.validity.start < e.validity.end &&
          dv->validity.covered_seconds(e.validity) != e.validity.length())
        flag(tag + ": alive outside dst validity");
    }
  }
  if (meta.edge_count != edge_count)
    flag("meta: edge_count " + std::to_string(meta.edge_count) + " != actual " +
         std::to_string(edge_count));
  std::sort(eids.begin(), eids.end());
  for (std::size_t i = 1; i < eids.size(); ++i)
    if (eids[i] == eids[i - 1]) flag("duplicate eid " + std::to_string(eids[i]));

  TimeInstant lo = std::numeric_limits<TimeInstant>::max();
  TimeInstant hi = std::numeric_limits<TimeInstant>::min();
  for (const VertexRecord& v : vs) {
    if (v.validity.empty()) continue;
    lo = std::min(lo, v.validity.hull().start);
    hi = std::max(hi, v.validity.hull().end);
  }
  g.for_each_edge([&](const EdgeRecord& e) {
    lo = std::min(lo, e.validity.start);
    hi = std::max(hi, e.validity.end);
  });
  if (lo < hi && meta.time_span != Interval{lo, hi}) flag("meta: time_span is not the validity hull");

  return rep;
}

}  // namespace evograph
