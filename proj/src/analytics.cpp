#include "evograph/analytics.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "evograph/error.hpp"

namespace evograph {

namespace {

void check_digits(const EvolvingGraph& g, int digits) {
  if (!valid_resolution(digits)) throw std::invalid_argument("resolution_digits must be 4, 3, or 2");
  if (digits > g.meta().resolution_digits)
    throw std::invalid_argument("requested resolution (" + std::to_string(digits) +
                                " digits) is finer than the graph's (" +
                                std::to_string(g.meta().resolution_digits) + ")");
}

// Zoom keeps every vertex under Exists, and grouping at the graph's own
// resolution only relabels vids; skip the no-op regroup.
EvolvingGraph zoom_and_group(const EvolvingGraph& g, int digits, const WindowSpec& w,
                             int threads) {
  EvolvingGraph zoomed = temporal_zoom(g, w, Quantifier::Exists, Quantifier::Exists, nullptr,
                                       threads);
  if (digits == zoomed.meta().resolution_digits) return zoomed;
  return node_creation(zoomed, digits);
}

struct RouteKey {
  std::int64_t slat, slon, dlat, dlon;
  TimeInstant window_start;

  friend auto operator<=>(const RouteKey&, const RouteKey&) = default;
};

struct RouteTotals {
  std::int64_t trips = 0, passengers = 0, cost = 0, duration = 0;
};

}  // namespace

WindowSpec span_window(const EvolvingGraph& g) {
  const Interval span = g.meta().time_span;
  return WindowSpec::fixed(span.length(), span.start);
}

std::vector<HotspotRow> hotspots(const EvolvingGraph& g, int digits, const WindowSpec& w, int k,
                                 int threads) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  check_digits(g, digits);
  const EvolvingGraph grouped = zoom_and_group(g, digits, w, threads);

  std::vector<HotspotRow> rows;
  for (const Direction dir : {Direction::In, Direction::Out}) {
    std::map<TimeInstant, std::vector<std::pair<VertexId, std::int64_t>>> per_window;
    for (const DegreeSeries& s : aggregate_messages_degree(grouped, dir, w, threads))
      for (const auto& [win, deg] : s.entries) per_window[win.start].emplace_back(s.vid, deg);
    for (auto& [wstart, entries] : per_window) {
      std::sort(entries.begin(), entries.end(),
                [](const auto& a, const auto& b) {
                  if (a.second != b.second) return a.second > b.second;
                  return a.first < b.first;
                });
      const std::size_t keep = std::min<std::size_t>(entries.size(), static_cast<std::size_t>(k));
      const Interval win = w.window_at(wstart);
      for (std::size_t i = 0; i < keep; ++i) {
        const VertexRecord* v = grouped.find_vertex(entries[i].first);
        rows.push_back({win, entries[i].first, v ? v->cell : GeoCell{}, dir, entries[i].second,
                        static_cast<int>(i + 1)});
      }
    }
  }
  std::sort(rows.begin(), rows.end(), [](const HotspotRow& a, const HotspotRow& b) {
    if (a.window.start != b.window.start) return a.window.start < b.window.start;
    if (a.direction != b.direction) return a.direction < b.direction;
    return a.rank < b.rank;
  });
  return rows;
}

RoutesResult popular_routes(const EvolvingGraph& g, int digits, const WindowSpec& w,
                            std::optional<Interval> pickup_within, int threads) {
  check_digits(g, digits);
  const auto& vs = g.vertices();
  std::vector<GeoCell> coarse(vs.size());
  for (std::size_t i = 0; i < vs.size(); ++i) coarse[i] = quantize_cell(vs[i].cell, digits);

  const auto& parts = g.partitions();
  std::vector<std::map<RouteKey, RouteTotals>> local(parts.size());
  std::vector<std::uint64_t> local_self(parts.size(), 0);
  std::vector<std::uint64_t> local_grouped(parts.size(), 0);
  parallel_tasks(parts.size(), threads, [&](std::size_t pi) {
    for (const EdgeRecord& e : parts[pi]) {
      const TimeInstant pickup = e.validity.start;
      if (pickup_within && !pickup_within->contains(pickup)) continue;
      const std::size_t si = g.vertex_index(e.src);
      const std::size_t di = g.vertex_index(e.dst);
      if (si == EvolvingGraph::npos || di == EvolvingGraph::npos)
        throw DataError("popular_routes: edge " + std::to_string(e.eid) +
                        " references a missing vertex");
      const GeoCell& s = coarse[si];
      const GeoCell& d = coarse[di];
      if (s.lat_micro == d.lat_micro && s.lon_micro == d.lon_micro) {
        ++local_self[pi];
        continue;
      }
      ++local_grouped[pi];
      RouteTotals& t = local[pi][RouteKey{s.lat_micro, s.lon_micro, d.lat_micro, d.lon_micro,
                                          w.window_at(pickup).start}];
      ++t.trips;
      t.passengers += e.passengers;
      t.cost += e.fare_cents;
      t.duration += e.duration_seconds;
    }
  });

  RoutesResult res;
  std::map<RouteKey, RouteTotals> total;
  for (std::size_t pi = 0; pi < parts.size(); ++pi) {
    res.self_loop_trips += local_self[pi];
    res.trips_grouped += local_grouped[pi];
    for (const auto& [k, t] : local[pi]) {
      RouteTotals& agg = total[k];
      agg.trips += t.trips;
      agg.passengers += t.passengers;
      agg.cost += t.cost;
      agg.duration += t.duration;
    }
  }

  res.aggregates.reserve(total.size());
  for (const auto& [k, t] : total)
    res.aggregates.push_back({{k.slat, k.slon, digits},
                              {k.dlat, k.dlon, digits},
                              k.window_start,
                              t.trips,
                              t.passengers,
                              t.cost,
                              t.duration});
  std::stable_sort(res.aggregates.begin(), res.aggregates.end(),
                   [](const RouteAggregate& a, const RouteAggregate& b) {
                     return a.num_trips > b.num_trips;
                   });
  return res;
}

RouteStats route_stats(const std::vector<RouteAggregate>& aggregates) {
  RouteStats stats;
  std::map<std::pair<GeoCell, GeoCell>, std::int64_t> max_per_route;
  for (const RouteAggregate& a : aggregates) {
    std::int64_t& m = max_per_route[{a.source, a.dest}];
    m = std::max(m, a.num_trips);
  }
  stats.per_route_max.assign(max_per_route.begin(), max_per_route.end());
  for (const auto& [route, m] : stats.per_route_max)
    stats.max_simultaneous = std::max(stats.max_simultaneous, m);
  for (std::int64_t m = 2; m <= stats.max_simultaneous; ++m) {
    std::uint64_t count = 0;
    for (const auto& [route, rm] : stats.per_route_max)
      if (rm >= m) ++count;
    stats.at_least.emplace_back(m, count);
  }
  return stats;
}

std::vector<RoutePairCount> top_route_pairs(const EvolvingGraph& g, int digits,
                                            const Interval& span, std::size_t n, int threads) {
  check_digits(g, digits);
  if (n == 0) return {};
  const auto& vs = g.vertices();
  std::vector<GeoCell> coarse(vs.size());
  for (std::size_t i = 0; i < vs.size(); ++i) coarse[i] = quantize_cell(vs[i].cell, digits);

  using PairKey = std::pair<std::pair<std::int64_t, std::int64_t>, std::pair<std::int64_t, std::int64_t>>;
  const auto& parts = g.partitions();
  std::vector<std::map<PairKey, std::int64_t>> local(parts.size());
  parallel_tasks(parts.size(), threads, [&](std::size_t pi) {
    for (const EdgeRecord& e : parts[pi]) {
      if (!span.contains(e.validity.start)) continue;
      const GeoCell& s = coarse[g.vertex_index(e.src)];
      const GeoCell& d = coarse[g.vertex_index(e.dst)];
      if (s.lat_micro == d.lat_micro && s.lon_micro == d.lon_micro) continue;
      ++local[pi][PairKey{{s.lat_micro, s.lon_micro}, {d.lat_micro, d.lon_micro}}];
    }
  });
  std::map<PairKey, std::int64_t> total;
  for (const auto& m : local)
    for (const auto& [k, c] : m) total[k] += c;

  std::vector<RoutePairCount> pairs;
  pairs.reserve(total.size());
  for (const auto& [k, c] : total)
    pairs.push_back({{k.first.first, k.first.second, digits},
                     {k.second.first, k.second.second, digits},
                     c});
  std::stable_sort(pairs.begin(), pairs.end(), [](const RoutePairCount& a, const RoutePairCount& b) {
    return a.trips > b.trips;
  });
  if (pairs.size() > n) pairs.resize(n);
  return pairs;
}

std::vector<WindowCounts> window_counts(const EvolvingGraph& g, int digits, const WindowSpec& w,
                                        int threads) {
  check_digits(g, digits);
  const EvolvingGraph grouped = zoom_and_group(g, digits, w, threads);
  std::map<TimeInstant, WindowCounts> counts;
  for (const VertexRecord& v : grouped.vertices())
    for (const Interval& win : windows_overlapping(v.validity, w)) {
      auto [it, fresh] = counts.try_emplace(win.start, WindowCounts{win, 0, 0});
      ++it->second.vertices;
    }
  grouped.for_each_edge([&](const EdgeRecord& e) {
    for (const Interval& win : windows_overlapping(e.validity, w)) {
      auto [it, fresh] = counts.try_emplace(win.start, WindowCounts{win, 0, 0});
      ++it->second.edges;
    }
  });
  std::vector<WindowCounts> out;
  out.reserve(counts.size());
  for (const auto& [start, c] : counts) out.push_back(c);
  return out;
}

}  // namespace evograph
