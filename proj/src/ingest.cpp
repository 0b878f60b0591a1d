#include "evograph/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "evograph/error.hpp"
#include "evograph/parallel.hpp"
#include "evograph/text.hpp"

namespace evograph {

namespace {

constexpr std::int64_t kMaxLat = 90 * kMicroPerDegree;
constexpr std::int64_t kMaxLon = 180 * kMicroPerDegree;
constexpr std::int64_t kMaxTripSeconds = 7200;

// NYC plausibility box for the out-of-region warning (covers the five
// boroughs plus generous margin).
constexpr std::int64_t kRegionLatLo = 40 * kMicroPerDegree;
constexpr std::int64_t kRegionLatHi = 41500000;
constexpr std::int64_t kRegionLonLo = -75 * kMicroPerDegree;
constexpr std::int64_t kRegionLonHi = -72500000;

struct ResolvedColumns {
  std::size_t pickup_time, dropoff_time, pickup_lon, pickup_lat, dropoff_lon, dropoff_lat,
      passengers, fare;
  std::size_t max_index;
};

std::size_t resolve_one(const ColumnRef& ref, const std::vector<std::string>& header,
                        const char* field, bool has_header) {
  if (std::holds_alternative<std::size_t>(ref)) return std::get<std::size_t>(ref);
  const std::string& name = std::get<std::string>(ref);
  if (!has_header)
    throw DataError(std::string("column '") + field + "' is mapped by name ('" + name +
                    "') but the input has no header row");
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw DataError(std::string("column '") + name + "' (for " + field +
                  ") not found in the header row");
}

ResolvedColumns resolve(const ColumnMap& map, const std::vector<std::string>& header) {
  ResolvedColumns r{};
  r.pickup_time = resolve_one(map.pickup_time, header, "pickup_time", map.header);
  r.dropoff_time = resolve_one(map.dropoff_time, header, "dropoff_time", map.header);
  r.pickup_lon = resolve_one(map.pickup_lon, header, "pickup_lon", map.header);
  r.pickup_lat = resolve_one(map.pickup_lat, header, "pickup_lat", map.header);
  r.dropoff_lon = resolve_one(map.dropoff_lon, header, "dropoff_lon", map.header);
  r.dropoff_lat = resolve_one(map.dropoff_lat, header, "dropoff_lat", map.header);
  r.passengers = resolve_one(map.passengers, header, "passengers", map.header);
  r.fare = resolve_one(map.fare, header, "fare", map.header);
  r.max_index = std::max({r.pickup_time, r.dropoff_time, r.pickup_lon, r.pickup_lat, r.dropoff_lon,
                          r.dropoff_lat, r.passengers, r.fare});
  return r;
}

bool coordinate_ok(std::int64_t lat, std::int64_t lon) {
  return lat >= -kMaxLat && lat <= kMaxLat && lon >= -kMaxLon && lon <= kMaxLon;
}

bool parse_row(std::string_view line, char delim, const ResolvedColumns& cols,
               std::vector<std::string_view>& fields, std::string& scratch, TripRow& out) {
  split_csv_line(line, delim, fields, scratch);
  if (fields.size() <= cols.max_index) return false;
  const auto pt = parse_time(trim(fields[cols.pickup_time]));
  const auto dt = parse_time(trim(fields[cols.dropoff_time]));
  const auto plat = parse_scaled_decimal(fields[cols.pickup_lat], 6);
  const auto plon = parse_scaled_decimal(fields[cols.pickup_lon], 6);
  const auto dlat = parse_scaled_decimal(fields[cols.dropoff_lat], 6);
  const auto dlon = parse_scaled_decimal(fields[cols.dropoff_lon], 6);
  const auto pax = parse_int(fields[cols.passengers]);
  const auto fare = parse_scaled_decimal(fields[cols.fare], 2);
  if (!pt || !dt || !plat || !plon || !dlat || !dlon || !pax || !fare) return false;
  if (*pax < 0) return false;
  if (!coordinate_ok(*plat, *plon) || !coordinate_ok(*dlat, *dlon)) return false;
  out = {*pt, *dt, *plat, *plon, *dlat, *dlon, *pax, *fare};
  return true;
}

}  // namespace

ColumnMap ColumnMap::tlc_yellow() {
  ColumnMap m;
  m.pickup_time = std::string("tpep_pickup_datetime");
  m.dropoff_time = std::string("tpep_dropoff_datetime");
  m.pickup_lon = std::string("pickup_longitude");
  m.pickup_lat = std::string("pickup_latitude");
  m.dropoff_lon = std::string("dropoff_longitude");
  m.dropoff_lat = std::string("dropoff_latitude");
  m.passengers = std::string("passenger_count");
  m.fare = std::string("fare_amount");
  return m;
}

ColumnMap ColumnMap::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open column map file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("bad column map JSON in " + path + ": " + e.what());
  }
  ColumnMap m = tlc_yellow();
  auto assign = [&](const char* key, ColumnRef& ref) {
    if (!j.contains(key)) return;
    const auto& v = j.at(key);
    if (v.is_string())
      ref = v.get<std::string>();
    else if (v.is_number_unsigned() || v.is_number_integer())
      ref = static_cast<std::size_t>(v.get<std::int64_t>());
    else
      throw DataError(std::string("column map key '") + key + "' must be a string or an index");
  };
  assign("pickup_time", m.pickup_time);
  assign("dropoff_time", m.dropoff_time);
  assign("pickup_lon", m.pickup_lon);
  assign("pickup_lat", m.pickup_lat);
  assign("dropoff_lon", m.dropoff_lon);
  assign("dropoff_lat", m.dropoff_lat);
  assign("passengers", m.passengers);
  assign("fare", m.fare);
  if (j.contains("header")) m.header = j.at("header").get<bool>();
  if (j.contains("delimiter")) {
    const std::string d = j.at("delimiter").get<std::string>();
    if (d.size() != 1) throw DataError("delimiter must be a single character");
    m.delimiter = d[0];
  }
  return m;
}

ParseResult parse_trips(std::istream& in, const ColumnMap& map, int threads) {
  if (!in) throw IoError("cannot read trip input stream");
  std::string buffer;
  {
    std::ostringstream ss;
    ss << in.rdbuf();
    buffer = std::move(ss).str();
  }
  if (in.bad()) throw IoError("failed reading trip input stream");

  std::vector<std::string_view> lines;
  {
    std::size_t start = 0;
    while (start <= buffer.size()) {
      const std::size_t nl = buffer.find('\n', start);
      const std::size_t end = nl == std::string::npos ? buffer.size() : nl;
      std::string_view line(buffer.data() + start, end - start);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (!line.empty()) lines.push_back(line);
      if (nl == std::string::npos) break;
      start = nl + 1;
    }
  }

  std::vector<std::string> header;
  std::size_t first_data = 0;
  if (map.header) {
    if (lines.empty()) throw DataError("input has a header row configured but is empty");
    std::vector<std::string_view> fields;
    std::string scratch;
    split_csv_line(lines[0], map.delimiter, fields, scratch);
    for (const auto& f : fields) header.emplace_back(trim(f));
    first_data = 1;
  }
  const ResolvedColumns cols = resolve(map, header);

  const std::size_t data_lines = lines.size() - first_data;
  ParseResult result;
  result.lines_read = data_lines;
  if (data_lines == 0) return result;

  threads = clamp_threads(threads);
  const std::size_t chunk_count = std::min<std::size_t>(
      static_cast<std::size_t>(threads) * 4, std::max<std::size_t>(data_lines / 4096, 1));
  const std::size_t chunk_size = (data_lines + chunk_count - 1) / chunk_count;
  std::vector<std::vector<TripRow>> chunk_rows(chunk_count);
  std::vector<std::uint64_t> chunk_errors(chunk_count, 0);
  parallel_tasks(chunk_count, threads, [&](std::size_t ci) {
    const std::size_t lo = first_data + ci * chunk_size;
    const std::size_t hi = std::min(lines.size(), lo + chunk_size);
    std::vector<std::string_view> fields;
    std::string scratch;
    TripRow row;
    auto& out = chunk_rows[ci];
    out.reserve(hi > lo ? hi - lo : 0);
    for (std::size_t i = lo; i < hi; ++i) {
      if (parse_row(lines[i], map.delimiter, cols, fields, scratch, row))
        out.push_back(row);
      else
        ++chunk_errors[ci];
    }
  });
  std::size_t total = 0;
  for (const auto& c : chunk_rows) total += c.size();
  result.rows.reserve(total);
  for (std::size_t ci = 0; ci < chunk_count; ++ci) {
    result.rows.insert(result.rows.end(), chunk_rows[ci].begin(), chunk_rows[ci].end());
    result.parse_errors += chunk_errors[ci];
  }
  return result;
}

CleanResult clean_trips(std::vector<TripRow> rows) {
  CleanResult res;
  res.report.total_read = rows.size();
  std::size_t w = 0;
  for (const TripRow& r : rows) {
    if (r.pickup_lat_micro == 0 || r.pickup_lon_micro == 0 || r.dropoff_lat_micro == 0 ||
        r.dropoff_lon_micro == 0) {
      ++res.report.rejected_zero_coordinate;
      continue;
    }
    if (r.dropoff_time < r.pickup_time) {
      ++res.report.rejected_negative_duration;
      continue;
    }
    if (r.dropoff_time == r.pickup_time) {
      ++res.report.rejected_zero_duration;
      continue;
    }
    if (r.dropoff_time - r.pickup_time > kMaxTripSeconds) {
      ++res.report.rejected_too_long;
      continue;
    }
    const bool in_region =
        r.pickup_lat_micro >= kRegionLatLo && r.pickup_lat_micro <= kRegionLatHi &&
        r.pickup_lon_micro >= kRegionLonLo && r.pickup_lon_micro <= kRegionLonHi &&
        r.dropoff_lat_micro >= kRegionLatLo && r.dropoff_lat_micro <= kRegionLatHi &&
        r.dropoff_lon_micro >= kRegionLonLo && r.dropoff_lon_micro <= kRegionLonHi;
    if (!in_region) ++res.report.kept_outside_region;
    rows[w++] = r;
  }
  rows.resize(w);
  res.kept = std::move(rows);
  res.report.kept = w;
  return res;
}

EvolvingGraph build_graph(const std::vector<TripRow>& rows, int digits,
                          std::size_t partition_count) {
  if (!valid_resolution(digits)) throw std::invalid_argument("resolution_digits must be 4, 3, or 2");
  if (rows.empty()) throw DataError("no trips to build a graph from");

  struct Hull {
    TimeInstant first_pickup;
    TimeInstant last_dropoff;
  };
  std::map<std::pair<std::int64_t, std::int64_t>, Hull> cells;
  auto touch = [&](std::int64_t lat, std::int64_t lon, TimeInstant pickup, TimeInstant dropoff) {
    auto [it, fresh] = cells.try_emplace({lat, lon}, Hull{pickup, dropoff});
    if (!fresh) {
      it->second.first_pickup = std::min(it->second.first_pickup, pickup);
      it->second.last_dropoff = std::max(it->second.last_dropoff, dropoff);
    }
  };
  for (const TripRow& r : rows) {
    if (r.pickup_time >= r.dropoff_time)
      throw DataError("build_graph requires cleaned rows with positive duration");
    touch(quantize(r.pickup_lat_micro, digits), quantize(r.pickup_lon_micro, digits),
          r.pickup_time, r.dropoff_time);
    touch(quantize(r.dropoff_lat_micro, digits), quantize(r.dropoff_lon_micro, digits),
          r.pickup_time, r.dropoff_time);
  }

  std::vector<std::pair<std::string, std::pair<std::int64_t, std::int64_t>>> keyed;
  keyed.reserve(cells.size());
  for (const auto& [coords, hull] : cells)
    keyed.emplace_back(grouping_key({coords.first, coords.second, digits}), coords);
  std::sort(keyed.begin(), keyed.end());

  std::vector<VertexRecord> verts;
  verts.reserve(keyed.size());
  std::map<std::pair<std::int64_t, std::int64_t>, VertexId> vid_of;
  for (VertexId vid = 0; vid < keyed.size(); ++vid) {
    const auto& coords = keyed[vid].second;
    const Hull& hull = cells.at(coords);
    verts.push_back({vid,
                     {coords.first, coords.second, digits},
                     IntervalSet({hull.first_pickup, hull.last_dropoff})});
    vid_of.emplace(coords, vid);
  }

  std::vector<EdgeRecord> edges;
  edges.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const TripRow& r = rows[i];
    EdgeRecord e;
    e.eid = i;
    e.src = vid_of.at({quantize(r.pickup_lat_micro, digits), quantize(r.pickup_lon_micro, digits)});
    e.dst =
        vid_of.at({quantize(r.dropoff_lat_micro, digits), quantize(r.dropoff_lon_micro, digits)});
    e.validity = {r.pickup_time, r.dropoff_time};
    e.passengers = r.passengers;
    e.fare_cents = r.fare_cents;
    e.duration_seconds = r.dropoff_time - r.pickup_time;
    edges.push_back(e);
  }

  return EvolvingGraph::build(std::move(verts), std::move(edges), digits, std::nullopt,
                              partition_count);
}

}  // namespace evograph
