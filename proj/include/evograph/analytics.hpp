#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "evograph/graph.hpp"
#include "evograph/ops.hpp"

namespace evograph {

struct HotspotRow {
  Interval window;
  VertexId vid = 0;
  GeoCell cell;
  Direction direction = Direction::In;
  std::int64_t degree = 0;
  int rank = 0;  // 1-based within (window, direction)

  friend bool operator==(const HotspotRow&, const HotspotRow&) = default;
};

// Zoom (Exists/Exists) over w, group to `digits`, compute per-window in/out
// degree, keep the top k per (window, direction). Degree ties break by
// ascending vid; output is ordered by (window, direction, rank). Only
// locations with at least one trip in a window are ranked there.
std::vector<HotspotRow> hotspots(const EvolvingGraph& g, int digits, const WindowSpec& w, int k,
                                 int threads = 1);

struct RouteAggregate {
  GeoCell source;
  GeoCell dest;
  TimeInstant window_start = 0;
  std::int64_t num_trips = 0;
  std::int64_t total_passengers = 0;
  std::int64_t total_cost_cents = 0;
  std::int64_t total_duration_seconds = 0;

  friend bool operator==(const RouteAggregate&, const RouteAggregate&) = default;
};

struct RoutesResult {
  // num_trips descending, ties by (source, dest, window_start) ascending.
  std::vector<RouteAggregate> aggregates;
  std::uint64_t trips_grouped = 0;
  std::uint64_t self_loop_trips = 0;  // excluded rows: coarsened source == dest
};

// Groups trips by (coarsened source cell, coarsened dest cell, window of the
// original pickup instant) and sums passengers, fare and duration exactly.
// Self-loop routes are removed. pickup_within, when set, restricts the
// analysis to trips whose pickup falls inside it.
RoutesResult popular_routes(const EvolvingGraph& g, int digits, const WindowSpec& w,
                            std::optional<Interval> pickup_within = std::nullopt, int threads = 1);

struct RouteStats {
  // (route, max trips in any one window), ascending by route.
  std::vector<std::pair<std::pair<GeoCell, GeoCell>, std::int64_t>> per_route_max;
  // (m, number of routes whose max is >= m) for m = 2..max; non-increasing.
  std::vector<std::pair<std::int64_t, std::uint64_t>> at_least;
  std::int64_t max_simultaneous = 0;
};

RouteStats route_stats(const std::vector<RouteAggregate>& aggregates);

struct RoutePairCount {
  GeoCell source;
  GeoCell dest;
  std::int64_t trips = 0;

  friend bool operator==(const RoutePairCount&, const RoutePairCount&) = default;
};

// All trips with pickup inside `span` per (source, dest) pair regardless of
// window, self-loops excluded; top n by count, ties by (source, dest).
std::vector<RoutePairCount> top_route_pairs(const EvolvingGraph& g, int digits,
                                            const Interval& span, std::size_t n, int threads = 1);

struct WindowCounts {
  Interval window;
  std::uint64_t vertices = 0;
  std::uint64_t edges = 0;

  friend bool operator==(const WindowCounts&, const WindowCounts&) = default;
};

// Distinct locations and trips alive per window after Exists/Exists zoom and
// grouping to `digits`.
std::vector<WindowCounts> window_counts(const EvolvingGraph& g, int digits, const WindowSpec& w,
                                        int threads = 1);

// Single window covering the graph's whole time span.
WindowSpec span_window(const EvolvingGraph& g);

}  // namespace evograph
