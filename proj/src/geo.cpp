#include "evograph/geo.hpp"

#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace evograph {

bool valid_resolution(int digits) { return digits == 4 || digits == 3 || digits == 2; }

std::int64_t resolution_unit(int digits) {
  switch (digits) {
    case 4:
      return 100;
    case 3:
      return 1000;
    case 2:
      return 10000;
    default:
      throw std::invalid_argument("resolution_digits must be 4, 3, or 2");
  }
}

std::int64_t quantize(std::int64_t coord_micro, int digits) {
  const std::int64_t unit = resolution_unit(digits);
  const std::int64_t mag = coord_micro < 0 ? -coord_micro : coord_micro;
  const std::int64_t q = (mag + unit / 2) / unit * unit;
  return coord_micro < 0 ? -q : q;
}

GeoCell quantize_cell(const GeoCell& cell, int digits) {
  return {quantize(cell.lat_micro, digits), quantize(cell.lon_micro, digits), digits};
}

std::string grouping_key(const GeoCell& c) {
  char buf[40];
  const std::int64_t alat = c.lat_micro < 0 ? -c.lat_micro : c.lat_micro;
  const std::int64_t alon = c.lon_micro < 0 ? -c.lon_micro : c.lon_micro;
  std::snprintf(buf, sizeof buf, "%c%02lld.%06lld:%c%03lld.%06lld",
                c.lat_micro < 0 ? '-' : '+', static_cast<long long>(alat / kMicroPerDegree),
                static_cast<long long>(alat % kMicroPerDegree), c.lon_micro < 0 ? '-' : '+',
                static_cast<long long>(alon / kMicroPerDegree),
                static_cast<long long>(alon % kMicroPerDegree));
  return buf;
}

}  // namespace evograph
