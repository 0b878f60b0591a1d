#include "evograph/text.hpp"

#include <cstdio>
#include <limits>

namespace evograph {

std::string_view trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r' || s[b] == '\n')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r' || s[e - 1] == '\n')) --e;
  return s.substr(b, e - b);
}

std::optional<std::int64_t> parse_scaled_decimal(std::string_view s, int scale_digits) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max();
  bool neg = false;
  std::size_t i = 0;
  if (s[0] == '+' || s[0] == '-') {
    neg = s[0] == '-';
    i = 1;
  }
  std::int64_t whole = 0;
  std::size_t int_digits = 0;
  for (; i < s.size() && s[i] >= '0' && s[i] <= '9'; ++i, ++int_digits) {
    if (whole > (kMax - 9) / 10) return std::nullopt;
    whole = whole * 10 + (s[i] - '0');
  }
  std::int64_t frac = 0;
  std::size_t frac_digits = 0;
  bool round_up = false;
  if (i < s.size() && s[i] == '.') {
    ++i;
    std::size_t seen = 0;
    for (; i < s.size() && s[i] >= '0' && s[i] <= '9'; ++i, ++seen) {
      if (seen < static_cast<std::size_t>(scale_digits))
        frac = frac * 10 + (s[i] - '0');
      else if (seen == static_cast<std::size_t>(scale_digits))
        round_up = s[i] >= '5';  // first excess digit decides: half rounds away from zero
    }
    frac_digits = seen;
  }
  if (int_digits == 0 && frac_digits == 0) return std::nullopt;
  if (i != s.size()) return std::nullopt;
  std::int64_t scale = 1;
  for (int k = 0; k < scale_digits; ++k) scale *= 10;
  std::int64_t frac_scale = 1;
  for (std::size_t k = std::min<std::size_t>(frac_digits, scale_digits);
       k < static_cast<std::size_t>(scale_digits); ++k)
    frac_scale *= 10;
  frac *= frac_scale;
  if (whole > (kMax - frac - 1) / scale) return std::nullopt;
  const std::int64_t out = whole * scale + frac + (round_up ? 1 : 0);
  return neg ? -out : out;
}

std::optional<std::int64_t> parse_int(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max();
  bool neg = false;
  std::size_t i = 0;
  if (s[0] == '+' || s[0] == '-') {
    neg = s[0] == '-';
    i = 1;
  }
  if (i == s.size()) return std::nullopt;
  std::int64_t v = 0;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') return std::nullopt;
    if (v > (kMax - 9) / 10) return std::nullopt;
    v = v * 10 + (s[i] - '0');
  }
  return neg ? -v : v;
}

std::string format_micro_degrees(std::int64_t micro) {
  char buf[32];
  const bool neg = micro < 0;
  const unsigned long long mag = neg ? 0ull - static_cast<unsigned long long>(micro)
                                     : static_cast<unsigned long long>(micro);
  std::snprintf(buf, sizeof buf, "%s%llu.%06llu", neg ? "-" : "", mag / 1000000ull,
                mag % 1000000ull);
  return buf;
}

void split_csv_line(std::string_view line, char delim, std::vector<std::string_view>& fields,
                    std::string& scratch) {
  fields.clear();
  scratch.clear();
  scratch.reserve(line.size());  // appended bytes never exceed the input, so views stay valid
  std::size_t i = 0;
  const std::size_t n = line.size();
  while (true) {
    if (i < n && line[i] == '"') {
      const std::size_t mark = scratch.size();
      ++i;
      while (i < n) {
        if (line[i] == '"') {
          if (i + 1 < n && line[i + 1] == '"') {
            scratch.push_back('"');
            i += 2;
          } else {
            ++i;
            break;
          }
        } else {
          scratch.push_back(line[i++]);
        }
      }
      while (i < n && line[i] != delim) scratch.push_back(line[i++]);
      fields.emplace_back(scratch.data() + mark, scratch.size() - mark);
    } else {
      const std::size_t start = i;
      while (i < n && line[i] != delim) ++i;
      fields.emplace_back(line.substr(start, i - start));
    }
    if (i >= n) break;
    ++i;
    if (i == n) {
      fields.emplace_back();
      break;
    }
  }
}

}  // namespace evograph
