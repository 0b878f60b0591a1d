#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "evograph/graph.hpp"

namespace evograph {

struct TripRow {
  TimeInstant pickup_time = 0;
  TimeInstant dropoff_time = 0;
  std::int64_t pickup_lat_micro = 0;
  std::int64_t pickup_lon_micro = 0;
  std::int64_t dropoff_lat_micro = 0;
  std::int64_t dropoff_lon_micro = 0;
  std::int64_t passengers = 0;
  std::int64_t fare_cents = 0;

  friend bool operator==(const TripRow&, const TripRow&) = default;
};

// A column is referenced by header name or 0-based index.
using ColumnRef = std::variant<std::string, std::size_t>;

struct ColumnMap {
  ColumnRef pickup_time;
  ColumnRef dropoff_time;
  ColumnRef pickup_lon;
  ColumnRef pickup_lat;
  ColumnRef dropoff_lon;
  ColumnRef dropoff_lat;
  ColumnRef passengers;
  ColumnRef fare;
  bool header = true;
  char delimiter = ',';

  // 2015-2016 TLC yellow-cab schema.
  static ColumnMap tlc_yellow();
  // JSON object with the field names above; values are strings (header
  // names) or integers (0-based indices). Optional "header" and "delimiter".
  static ColumnMap from_json_file(const std::string& path);
};

struct ParseResult {
  std::vector<TripRow> rows;
  std::uint64_t parse_errors = 0;
  std::uint64_t lines_read = 0;  // data lines, header excluded
};

// Rows that fail to parse in any mapped field (including timestamps that are
// not "YYYY-MM-DD HH:MM:SS" and coordinates beyond +-90/+-180 degrees) are
// counted and skipped, never fatal. An unresolvable column mapping or an
// unreadable stream throws.
ParseResult parse_trips(std::istream& in, const ColumnMap& map, int threads = 1);

struct CleaningReport {
  std::uint64_t total_read = 0;
  std::uint64_t kept = 0;
  std::uint64_t rejected_zero_coordinate = 0;
  std::uint64_t rejected_negative_duration = 0;
  std::uint64_t rejected_zero_duration = 0;
  std::uint64_t rejected_too_long = 0;
  // Kept rows whose coordinates fall outside the NYC plausibility box;
  // a warning, not a rejection.
  std::uint64_t kept_outside_region = 0;

  std::uint64_t total_rejected() const {
    return rejected_zero_coordinate + rejected_negative_duration + rejected_zero_duration +
           rejected_too_long;
  }
};

struct CleanResult {
  std::vector<TripRow> kept;
  CleaningReport report;
};

// Rejection rules, first match wins: any coordinate exactly 0; dropoff before
// pickup; dropoff equal to pickup; duration over 7200 s (exactly 2 h is kept).
CleanResult clean_trips(std::vector<TripRow> rows);

// One vertex per distinct quantized pickup/dropoff cell, validity
// [earliest incident pickup, latest incident dropoff); one edge per row with
// validity [pickup, dropoff). Vertex ids follow ascending grouping key, edge
// ids follow input row order. Throws DataError on empty input.
EvolvingGraph build_graph(const std::vector<TripRow>& rows, int digits,
                          std::size_t partition_count = 8);

}  // namespace evograph
