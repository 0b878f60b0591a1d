#pragma once

#include <cstdint>
#include <string>

namespace evograph {

inline constexpr std::int64_t kMicroPerDegree = 1000000;

// A quantized location. resolution_digits is the number of retained decimal
// digits of the degree value: 4 ~ 10 m, 3 ~ 100 m, 2 ~ 1000 m.
struct GeoCell {
  std::int64_t lat_micro = 0;
  std::int64_t lon_micro = 0;
  int resolution_digits = 4;

  friend bool operator==(const GeoCell&, const GeoCell&) = default;
  friend auto operator<=>(const GeoCell&, const GeoCell&) = default;
};

bool valid_resolution(int digits);         // {4, 3, 2}
std::int64_t resolution_unit(int digits);  // 10^(6 - digits) micro-degrees

// Round to `digits` decimal places, half away from zero, in exact integer
// arithmetic. The result is a multiple of resolution_unit(digits).
std::int64_t quantize(std::int64_t coord_micro, int digits);
GeoCell quantize_cell(const GeoCell& cell, int digits);

// Canonical fixed-width key "+DD.DDDDDD:+DDD.DDDDDD". Equal keys iff equal
// coordinates; byte order of keys is the group (Skolem) order.
std::string grouping_key(const GeoCell& cell);

}  // namespace evograph
