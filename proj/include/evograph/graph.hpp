#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "evograph/geo.hpp"
#include "evograph/time.hpp"

namespace evograph {

using VertexId = std::uint64_t;
using EdgeId = std::uint64_t;

// A location node. Validity can be gappy: grouped nodes inherit the temporal
// union of their members' lifetimes.
struct VertexRecord {
  VertexId vid = 0;
  GeoCell cell;
  IntervalSet validity;

  friend bool operator==(const VertexRecord&, const VertexRecord&) = default;
};

// One trip. validity is [pickup, dropoff) at ingestion; temporal zoom may
// widen it, but duration_seconds always keeps the original trip length.
struct EdgeRecord {
  EdgeId eid = 0;
  VertexId src = 0;
  VertexId dst = 0;
  Interval validity;
  std::int64_t passengers = 0;
  std::int64_t fare_cents = 0;
  std::int64_t duration_seconds = 1;

  friend bool operator==(const EdgeRecord&, const EdgeRecord&) = default;
};

struct GraphMeta {
  int resolution_digits = 4;
  Interval time_span{0, 1};
  std::optional<WindowSpec> window_applied;
  std::uint64_t vertex_count = 0;
  std::uint64_t edge_count = 0;
  std::size_t partition_count = 1;

  friend bool operator==(const GraphMeta&, const GraphMeta&) = default;
};

// Entities alive at a single instant (point semantics).
struct StaticSnapshot {
  TimeInstant at = 0;
  std::vector<VertexId> vertices;  // ascending
  std::vector<EdgeRecord> edges;   // (src, dst, start, eid) order
};

// Flattened tabular row of the edge table.
struct EdgeRow {
  EdgeId eid = 0;
  VertexId src = 0;
  VertexId dst = 0;
  TimeInstant start = 0;
  TimeInstant end = 0;
  std::int64_t passengers = 0;
  std::int64_t fare_cents = 0;
  std::int64_t duration_seconds = 0;

  friend bool operator==(const EdgeRow&, const EdgeRow&) = default;
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Immutable evolving multigraph. Vertices are sorted by vid. Edges live in
// partition_count partitions keyed by contiguous src ranges, each sorted by
// (src, dst, validity.start, eid), so concatenating partitions in order
// yields one globally sorted edge relation. Safe to share across threads.
class EvolvingGraph {
 public:
  EvolvingGraph() = default;

  // Sorts, partitions, and derives meta. span_when_empty seeds time_span for
  // graphs with no entities.
  static EvolvingGraph build(std::vector<VertexRecord> vertices, std::vector<EdgeRecord> edges,
                             int resolution_digits, std::optional<WindowSpec> window_applied,
                             std::size_t partition_count,
                             std::optional<Interval> span_when_empty = std::nullopt);

  const std::vector<VertexRecord>& vertices() const { return vertices_; }
  const std::vector<std::vector<EdgeRecord>>& partitions() const { return partitions_; }
  const GraphMeta& meta() const { return meta_; }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t vertex_index(VertexId vid) const;
  const VertexRecord* find_vertex(VertexId vid) const;
  std::size_t partition_of(VertexId src) const;

  template <class Fn>
  void for_each_edge(Fn&& fn) const {
    for (const auto& part : partitions_)
      for (const EdgeRecord& e : part) fn(e);
  }

  friend bool operator==(const EvolvingGraph&, const EvolvingGraph&) = default;

 private:
  std::vector<VertexRecord> vertices_;
  std::vector<std::vector<EdgeRecord>> partitions_;
  VertexId max_vid_ = 0;
  GraphMeta meta_;
};

StaticSnapshot snapshot(const EvolvingGraph& g, TimeInstant t);

// One row per edge in (src, dst, start, eid) order; lossless.
std::vector<EdgeRow> edge_relation(const EvolvingGraph& g);

// Checks every structural invariant; returns violations instead of throwing.
ValidationReport validate(const EvolvingGraph& g);

}  // namespace evograph
